"""Presentations of varieties: generators, identities, polarization and
linear changes of the binary generators.

Expressions are nested tuples.  A variable is a ``str`` (``"x"``), a
multilinear leaf is an ``int``, and an application is ``(op, arg1, ...)``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence

from .errors import (
    BadArity,
    InhomogeneousIdentity,
    PresentationError,
    SingularMap,
    SymmetryOnNonBinary,
    UndeclaredGenerator,
)

PLAIN = "plain"
SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
SYMMETRIES = (PLAIN, SYMMETRIC, ANTISYMMETRIC)


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    arity: int = 2
    symmetry: str = PLAIN


@dataclass(frozen=True)
class RawIdentity:
    """``sum(c * expr for c, expr in terms) = 0``."""

    terms: tuple
    label: str = ""

    @classmethod
    def of(cls, pairs, label: str = "") -> "RawIdentity":
        return cls(tuple((Fraction(c), e) for c, e in pairs), label)


@dataclass(frozen=True)
class MultilinearIdentity:
    arity: int
    terms: tuple

    def as_dict(self) -> dict:
        return dict((e, c) for c, e in self.terms)


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    identities: tuple = ()
    name: str = ""

    def generator(self, name: str) -> GeneratorSpec:
        for g in self.generators:
            if g.name == name:
                return g
        raise UndeclaredGenerator(f"generator {name!r} is not declared")

    @property
    def generator_map(self) -> dict:
        return {g.name: g for g in self.generators}


# ---------------------------------------------------------------------------
# expression helpers
# ---------------------------------------------------------------------------


def variables(expr) -> list:
    """Variables (or integer leaves) in planar order, with repetitions."""
    if isinstance(expr, (str, int)):
        return [expr]
    out = []
    for a in expr[1:]:
        out.extend(variables(a))
    return out


def ops_used(expr) -> list:
    if isinstance(expr, (str, int)):
        return []
    out = [(expr[0], len(expr) - 1)]
    for a in expr[1:]:
        out.extend(ops_used(a))
    return out


def expr_str(expr) -> str:
    if isinstance(expr, (str, int)):
        return str(expr)
    return f"{expr[0]}(" + ",".join(expr_str(a) for a in expr[1:]) + ")"


def _describe(identity: RawIdentity) -> str:
    return identity.label or " + ".join(f"{c} {expr_str(e)}" for c, e in identity.terms[:3])


def validate(p: Presentation) -> Presentation:
    names = [g.name for g in p.generators]
    dup = [n for n, k in Counter(names).items() if k > 1]
    if dup:
        raise PresentationError(f"generator {dup[0]!r} declared twice")
    gens = {g.name: g for g in p.generators}
    for g in p.generators:
        if g.symmetry not in SYMMETRIES:
            raise PresentationError(f"generator {g.name!r}: unknown symmetry {g.symmetry!r}")
        if g.arity < 2:
            raise BadArity(f"generator {g.name!r} has arity {g.arity}; arity must be at least 2")
        if g.symmetry != PLAIN and g.arity != 2:
            raise SymmetryOnNonBinary(
                f"generator {g.name!r} is {g.symmetry} but has arity {g.arity}"
            )
    for identity in p.identities:
        check_identity(identity, gens)
    return p


def check_identity(identity: RawIdentity, gens: Mapping[str, GeneratorSpec]) -> None:
    degrees = None
    for _, expr in identity.terms:
        for op, k in ops_used(expr):
            if op not in gens:
                raise UndeclaredGenerator(
                    f"identity {_describe(identity)!r} uses undeclared generator {op!r}"
                )
            if gens[op].arity != k:
                raise BadArity(
                    f"identity {_describe(identity)!r} applies {op!r} to {k} arguments, "
                    f"expected {gens[op].arity}"
                )
        d = Counter(variables(expr))
        if degrees is None:
            degrees = d
        elif d != degrees:
            raise InhomogeneousIdentity(
                f"identity {_describe(identity)!r} is not homogeneous in its variables"
            )


# ---------------------------------------------------------------------------
# symmetric-operad normal form (used for collecting terms)
# ---------------------------------------------------------------------------


def _sort_key(expr):
    return expr_str(expr)


def sym_normalize(expr, gens: Mapping[str, GeneratorSpec]) -> tuple:
    """Sort arguments of symmetric and antisymmetric operations.

    Returns ``(expr, sign)``; the sign is 0 when an antisymmetric operation
    gets two equal arguments.
    """
    if isinstance(expr, (str, int)):
        return expr, 1
    sign = 1
    args = []
    for a in expr[1:]:
        e, s = sym_normalize(a, gens)
        sign *= s
        args.append(e)
    g = gens.get(expr[0])
    if g is not None and g.symmetry != PLAIN:
        k0, k1 = _sort_key(args[0]), _sort_key(args[1])
        if k0 > k1:
            args = [args[1], args[0]]
            if g.symmetry == ANTISYMMETRIC:
                sign = -sign
        elif k0 == k1 and args[0] == args[1] and g.symmetry == ANTISYMMETRIC:
            sign = 0
    return (expr[0], *args), sign


def collect(pairs, gens: Mapping[str, GeneratorSpec]) -> dict:
    acc: dict = {}
    for c, e in pairs:
        n, s = sym_normalize(e, gens)
        if s:
            acc[n] = acc.get(n, 0) + s * Fraction(c)
    return {e: c for e, c in acc.items() if c}


def _content_divide(terms: dict) -> dict:
    num = 0
    den = 1
    for c in terms.values():
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    if num == 0:
        return terms
    f = Fraction(den, num)
    return {e: c * f for e, c in terms.items()}


def _ordered_terms(terms: dict) -> tuple:
    return tuple((c, e) for e, c in sorted(terms.items(), key=lambda ec: _sort_key(ec[0])))


# ---------------------------------------------------------------------------
# polarization
# ---------------------------------------------------------------------------


def multilinearize(
    identity: RawIdentity, generators: Optional[Sequence[GeneratorSpec]] = None
) -> list:
    """Full polarization; returns ``[]`` when the multilinear part vanishes.

    Variables are numbered in natural name order; a variable of degree ``d``
    receives ``d`` consecutive fresh labels, and every monomial is summed over
    all bijections between its occurrences and those labels.
    """
    gens = {g.name: g for g in (generators or ())}
    if generators is not None:
        check_identity(identity, gens)
    else:
        check_identity(identity, _implicit_gens(identity))
    if not identity.terms:
        return []
    order = sorted({v for _, e in identity.terms for v in variables(e)}, key=_natural)
    degrees = Counter(variables(identity.terms[0][1]))
    labels = {}
    nxt = 1
    for v in order:
        labels[v] = list(range(nxt, nxt + degrees[v]))
        nxt += degrees[v]
    n = nxt - 1
    pairs = []
    for c, e in identity.terms:
        for assignment in _assignments(e, labels):
            pairs.append((c, assignment))
    terms = collect(pairs, gens)
    if not terms:
        return []
    return [MultilinearIdentity(n, _ordered_terms(_content_divide(terms)))]


def _natural(v):
    if isinstance(v, int):
        return ("", v)
    m = re.fullmatch(r"(.*?)(\d*)", v)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def _implicit_gens(identity: RawIdentity) -> dict:
    out = {}
    for _, e in identity.terms:
        for op, k in ops_used(e):
            out.setdefault(op, GeneratorSpec(op, k))
    return out


def _assignments(expr, labels):
    occ = variables(expr)
    per_var = {v: [i for i, w in enumerate(occ) if w == v] for v in labels}
    choices = [list(itertools.permutations(labels[v])) for v in labels]
    names = list(labels)
    for combo in itertools.product(*choices):
        leaf_labels = [0] * len(occ)
        for v, perm in zip(names, combo):
            for pos, lab in zip(per_var[v], perm):
                leaf_labels[pos] = lab
        it = iter(leaf_labels)
        yield _fill(expr, it)


def _fill(expr, it):
    if isinstance(expr, (str, int)):
        return next(it)
    return (expr[0],) + tuple(_fill(a, it) for a in expr[1:])


def multilinear_to_raw(m: MultilinearIdentity) -> RawIdentity:
    return RawIdentity(tuple((c, _rename(e)) for c, e in m.terms))


def _rename(expr):
    if isinstance(expr, int):
        return f"a{expr}"
    if isinstance(expr, str):
        return expr
    return (expr[0],) + tuple(_rename(a) for a in expr[1:])


# ---------------------------------------------------------------------------
# change of generator basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasisChange:
    """Express each old binary operation in the new generators.

    ``definitions[old]`` is a tuple of ``(coefficient, new_name, swapped)``:
    ``old(x1, x2) = sum(c * new(x1, x2) or c * new(x2, x1) if swapped)``.
    """

    new_generators: tuple
    definitions: Mapping = field(default_factory=dict)


def split_basis_change(old: str, sym_name: str, anti_name: str) -> BasisChange:
    """``x*y = 1/2 (x o y) + 1/2 [x, y]`` for ``o = xy + yx`` and ``[x,y] = xy - yx``."""
    half = Fraction(1, 2)
    return BasisChange(
        (GeneratorSpec(sym_name, 2, SYMMETRIC), GeneratorSpec(anti_name, 2, ANTISYMMETRIC)),
        {old: ((half, sym_name, False), (half, anti_name, False))},
    )


def _variant_basis(g: GeneratorSpec) -> list:
    if g.symmetry == PLAIN:
        return [(g.name, False), (g.name, True)]
    return [(g.name, False)]


def _binary_vector(pairs, gens) -> dict:
    vec: dict = {}
    for c, name, swapped in pairs:
        g = gens[name]
        sign = 1
        if swapped and g.symmetry != PLAIN:
            swapped = False
            sign = -1 if g.symmetry == ANTISYMMETRIC else 1
        key = (name, swapped)
        vec[key] = vec.get(key, 0) + sign * Fraction(c)
    return vec


def _rank(rows: list) -> int:
    rows = [dict(r) for r in rows]
    rank = 0
    pivots: dict = {}
    for r in rows:
        r = {k: v for k, v in r.items() if v}
        for k in sorted(pivots, key=str):
            if k in r:
                f = r[k]
                for kk, vv in pivots[k].items():
                    r[kk] = r.get(kk, 0) - f * vv
                r = {kk: vv for kk, vv in r.items() if vv}
        if r:
            k = min(r, key=str)
            f = r[k]
            pivots[k] = {kk: vv / f for kk, vv in r.items()}
            rank += 1
    return rank


def change_generator_basis(p: Presentation, change: BasisChange) -> Presentation:
    """Rewrite every identity of ``p`` in the new generators."""
    old_gens = p.generator_map
    new_gens = {g.name: g for g in change.new_generators}
    for old in change.definitions:
        if old not in old_gens:
            raise UndeclaredGenerator(f"basis change mentions unknown generator {old!r}")
        if old_gens[old].arity != 2:
            raise SingularMap(f"only binary generators can be rewritten, not {old!r}")
    kept = [g for g in p.generators if g.name not in change.definitions]
    for g in kept:
        if g.name in new_gens:
            raise PresentationError(f"new generator {g.name!r} clashes with a kept one")
    all_new = {**{g.name: g for g in kept}, **new_gens}
    for defs in change.definitions.values():
        for _, name, _ in defs:
            if name not in new_gens:
                raise UndeclaredGenerator(f"basis change uses undeclared generator {name!r}")

    # invertibility on the binary variant spaces
    rows = []
    for old, defs in change.definitions.items():
        g = old_gens[old]
        rows.append(_binary_vector(defs, new_gens))
        if g.symmetry == PLAIN:
            rows.append(_binary_vector([(c, n, not s) for c, n, s in defs], new_gens))
    new_dim = sum(len(_variant_basis(g)) for g in change.new_generators)
    old_dim = sum(len(_variant_basis(old_gens[o])) for o in change.definitions)
    if old_dim != new_dim or _rank(rows) != new_dim:
        raise SingularMap("the change of generators is not invertible")

    identities = []
    for identity in p.identities:
        pairs = []
        for c, e in identity.terms:
            for c2, e2 in _substitute(e, change.definitions):
                pairs.append((c * c2, e2))
        terms = collect(pairs, all_new)
        identities.append(RawIdentity(_ordered_terms(terms), identity.label))
    out = Presentation(tuple(kept) + tuple(change.new_generators), tuple(identities), p.name)
    return validate(out)


def _substitute(expr, definitions) -> list:
    if isinstance(expr, (str, int)):
        return [(Fraction(1), expr)]
    arg_options = [_substitute(a, definitions) for a in expr[1:]]
    out = []
    for combo in itertools.product(*arg_options):
        coef = Fraction(1)
        args = []
        for c, a in combo:
            coef *= c
            args.append(a)
        if expr[0] in definitions:
            for c, name, swapped in definitions[expr[0]]:
                new_args = [args[1], args[0]] if swapped else args
                out.append((coef * c, (name, *new_args)))
        else:
            out.append((coef, (expr[0], *args)))
    return out
