"""Brute-force verification in the free symmetric operad.

Nothing here uses the shuffle machinery: monomials are plain application
trees with symmetric and antisymmetric arguments sorted, identities are
polarized by expanding substitutions of sums, and the operadic ideal is
built by grafting generators above and below known consequences.

Why the graftings suffice: an element of the ideal is a tree with one
vertex replaced by a relation.  If that vertex is the root, the element is
obtained from the relation by inserting generators at leaves one at a time
(``v o_j g``).  Otherwise the root generator ``g`` has the relation inside
one argument, which is ``g o_i v`` with the other arguments still whole
trees; those are again added one generator at a time below.  Each arity
component is closed under relabeling, so relabelings of ``v`` never need to
be enumerated separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import BoundExceeded, InhomogeneousIdentity, UndeclaredGenerator
from .presentation import ANTISYMMETRIC, PLAIN, Presentation, RawIdentity

DEFAULT_GUARD = 5


def _leaf_tuple(t) -> tuple:
    if isinstance(t, int):
        return (t,)
    out = ()
    for c in t[1:]:
        out += _leaf_tuple(c)
    return out


def sym_canonical(t, gens) -> tuple:
    """``(canonical tree, sign)``; sign 0 means the term vanishes."""
    if isinstance(t, int):
        return t, 1
    sign = 1
    kids = []
    for c in t[1:]:
        k, s = sym_canonical(c, gens)
        if s == 0:
            return None, 0
        sign *= s
        kids.append(k)
    g = gens[t[0]]
    if g.symmetry != PLAIN:
        a, b = kids
        ka, kb = (_leaf_tuple(a), repr(a)), (_leaf_tuple(b), repr(b))
        if ka > kb:
            kids = [b, a]
            if g.symmetry == ANTISYMMETRIC:
                sign = -sign
        elif ka == kb and g.symmetry == ANTISYMMETRIC:
            return None, 0
    return (t[0], *kids), sign


def _trees(labels: tuple, gens) -> list:
    if len(labels) == 1:
        return [labels[0]]
    out = []
    for g in gens.values():
        k = g.arity
        if k > len(labels):
            continue
        # unordered set partitions; plain generators take every argument order
        for parts in _set_partitions(labels, k):
            kid_lists = [_trees(tuple(p), gens) for p in parts]
            orders = [tuple(range(k))] if g.symmetry != PLAIN else itertools.permutations(range(k))
            for order in orders:
                for kids in itertools.product(*[kid_lists[i] for i in order]):
                    out.append((g.name, *kids))
    return out


def _set_partitions(items, k):
    items = list(items)
    if k == 1:
        yield [items]
        return
    if len(items) < k:
        return
    head, tail = items[0], items[1:]
    # head alone
    for p in _set_partitions(tail, k - 1):
        yield [[head]] + p
    # head joins a block of a k-partition of tail
    for p in _set_partitions(tail, k):
        for i in range(len(p)):
            yield [p[j] if j != i else [head] + p[j] for j in range(len(p))]


def _guard(n: int, guard: int) -> None:
    if n > guard:
        raise BoundExceeded(f"arity {n} exceeds the oracle guard {guard}")


def free_basis(gens, n: int) -> list:
    gens = _gens(gens)
    seen = {}
    for t in _trees(tuple(range(1, n + 1)), gens):
        c, s = sym_canonical(t, gens)
        if s:
            seen[c] = True
    return sorted(seen, key=repr)


def free_dim(gens, n: int, guard: int = 6) -> int:
    _guard(n, guard)
    return len(free_basis(gens, n))


def _gens(gens) -> dict:
    if isinstance(gens, dict):
        return gens
    if isinstance(gens, Presentation):
        return {g.name: g for g in gens.generators}
    return {g.name: g for g in gens}


# ---------------------------------------------------------------------------
# polarization by substitution of sums
# ---------------------------------------------------------------------------


def _vars(e) -> list:
    if isinstance(e, (str, int)):
        return [e]
    out = []
    for a in e[1:]:
        out.extend(_vars(a))
    return out


def polarize(identity: RawIdentity, gens) -> dict:
    """Multilinear component of ``f(a_1+...+a_d, ...)``: a dict tree -> coefficient."""
    gens = _gens(gens)
    for _, e in identity.terms:
        stack = [e]
        while stack:
            x = stack.pop()
            if isinstance(x, tuple):
                if x[0] not in gens:
                    raise UndeclaredGenerator(f"undeclared generator {x[0]!r}")
                stack.extend(x[1:])
    if not identity.terms:
        return {}
    names = sorted({v for _, e in identity.terms for v in _vars(e)}, key=str)
    deg = {v: _vars(identity.terms[0][1]).count(v) for v in names}
    for _, e in identity.terms:
        if any(_vars(e).count(v) != deg[v] for v in names):
            raise InhomogeneousIdentity("identity is not homogeneous")
    fresh = {}
    nxt = 1
    for v in names:
        fresh[v] = list(range(nxt, nxt + deg[v]))
        nxt += deg[v]
    n = nxt - 1
    acc: dict = {}
    for c, e in identity.terms:
        occ = _vars(e)
        # every occurrence of v may become any of v's fresh labels; keep
        # only the choices using each label once
        for choice in itertools.product(*[fresh[v] for v in occ]):
            if len(set(choice)) != n:
                continue
            it = iter(choice)
            t, s = sym_canonical(_fill(e, it), gens)
            if s:
                acc[t] = acc.get(t, 0) + s * Fraction(c)
    return {t: c for t, c in acc.items() if c}


def _fill(e, it):
    if isinstance(e, (str, int)):
        return next(it)
    return (e[0],) + tuple(_fill(a, it) for a in e[1:])


def _arity_of(vec: dict) -> int:
    for t in vec:
        return len(_leaf_tuple(t))
    return 0


def _relabel(t, mapping):
    if isinstance(t, int):
        return mapping[t]
    return (t[0],) + tuple(_relabel(c, mapping) for c in t[1:])


# ---------------------------------------------------------------------------
# exact row spaces
# ---------------------------------------------------------------------------


class RowSpace:
    """Reduced row echelon form over Fractions, optionally tracking how each
    row is expressed through the generating vectors."""

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.track = track
        self.combos: dict = {}
        self.count = 0

    def _reduce(self, vec: dict, combo: Optional[dict]):
        # rows are fully reduced, so one pass over the pivots present suffices
        vec = dict(vec)
        for p in [k for k in vec if k in self.rows]:
            f = vec.get(p)
            if not f:
                continue
            for k, v in self.rows[p].items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            if combo is not None:
                for k, v in self.combos[p].items():
                    nv = combo.get(k, 0) - f * v
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
        return vec, combo

    def add(self, vec: dict, label=None) -> bool:
        combo = {label if label is not None else self.count: Fraction(1)} if self.track else None
        self.count += 1
        vec, combo = self._reduce(vec, combo)
        vec = {k: v for k, v in vec.items() if v}
        if not vec:
            return False
        p = min(vec, key=repr)
        f = vec[p]
        row = {k: v / f for k, v in vec.items()}
        if combo is not None:
            combo = {k: v / f for k, v in combo.items()}
        for q, other in self.rows.items():
            if p in other:
                g = other[p]
                for k, v in row.items():
                    nv = other.get(k, 0) - g * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                if combo is not None:
                    oc = self.combos[q]
                    for k, v in combo.items():
                        nv = oc.get(k, 0) - g * v
                        if nv:
                            oc[k] = nv
                        else:
                            oc.pop(k, None)
        self.rows[p] = row
        if combo is not None:
            self.combos[p] = combo
        return True

    def contains(self, vec: dict) -> tuple:
        combo = {} if self.track else None
        rest, combo = self._reduce(vec, combo)
        if rest:
            return False, None
        return True, ({k: -v for k, v in combo.items()} if combo is not None else None)

    @property
    def dim(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# consequences
# ---------------------------------------------------------------------------


def _compose_above(g, i, v: dict, n: int, gens):
    """All ``g o_i v`` with the other inputs of ``g`` single leaves."""
    k = g.arity
    m = _arity_of(v)
    for sub in itertools.combinations(range(1, n + 1), m):
        mapping = {j + 1: sub[j] for j in range(m)}
        rest = [x for x in range(1, n + 1) if x not in sub]
        for perm in itertools.permutations(rest):
            it = iter(perm)
            vec: dict = {}
            for t, c in v.items():
                inner = _relabel(t, mapping)
                it = iter(perm)
                args = [inner if pos == i else next(it) for pos in range(k)]
                ct, s = sym_canonical((g.name, *args), gens)
                if s:
                    vec[ct] = vec.get(ct, 0) + s * c
            vec = {t: c for t, c in vec.items() if c}
            if vec:
                yield vec


def _compose_below(g, j, v: dict, n: int, gens):
    """All ``v o_j g`` with ordered labels on ``g`` and order-preserving ones elsewhere."""
    k = g.arity
    m = _arity_of(v)
    for labels in itertools.permutations(range(1, n + 1), k):
        rest = [x for x in range(1, n + 1) if x not in labels]
        node = (g.name, *labels)
        mapping = {}
        it = iter(rest)
        for leaf in range(1, m + 1):
            mapping[leaf] = node if leaf == j else next(it)
        vec: dict = {}
        for t, c in v.items():
            ct, s = sym_canonical(_relabel(t, mapping), gens)
            if s:
                vec[ct] = vec.get(ct, 0) + s * c
        vec = {t: c for t, c in vec.items() if c}
        if vec:
            yield vec


def _orbit(vec: dict, gens):
    n = _arity_of(vec)
    for perm in itertools.permutations(range(1, n + 1)):
        mapping = {i + 1: perm[i] for i in range(n)}
        out: dict = {}
        for t, c in vec.items():
            ct, s = sym_canonical(_relabel(t, mapping), gens)
            if s:
                out[ct] = out.get(ct, 0) + s * c
        out = {t: c for t, c in out.items() if c}
        if out:
            yield out


def consequence_spaces(p: Presentation, n: int, guard: int = DEFAULT_GUARD, track_last: bool = False) -> dict:
    """Row spaces ``V_m`` of the ideal for arities up to ``n``."""
    _guard(n, guard)
    gens = _gens(p)
    polys = [polarize(i, gens) for i in p.identities]
    polys = [q for q in polys if q]
    spaces: dict = {}
    for m in range(2, n + 1):
        space = RowSpace(track=track_last and m == n)
        for q in polys:
            if _arity_of(q) == m:
                for vec in _orbit(q, gens):
                    space.add(vec)
        for g in gens.values():
            lower = m - g.arity + 1
            if lower < 2 or lower not in spaces:
                continue
            basis = list(spaces[lower].rows.values())
            for v in basis:
                for i in range(g.arity):
                    for vec in _compose_above(g, i, v, m, gens):
                        space.add(vec)
                for j in range(1, lower + 1):
                    for vec in _compose_below(g, j, v, m, gens):
                        space.add(vec)
        spaces[m] = space
    return spaces


def consequence_dim(p: Presentation, n: int, guard: int = DEFAULT_GUARD) -> int:
    if n < 2:
        return 0
    return consequence_spaces(p, n, guard)[n].dim


def operad_dim(p: Presentation, n: int, guard: int = DEFAULT_GUARD) -> int:
    _guard(n, guard)
    if n == 1:
        return 1
    return free_dim(p, n, guard=max(guard, 6)) - consequence_dim(p, n, guard)


def operad_dims(p: Presentation, N: int, guard: int = DEFAULT_GUARD) -> list:
    _guard(N, guard)
    spaces = consequence_spaces(p, N, guard) if N >= 2 else {}
    out = [1]
    for n in range(2, N + 1):
        out.append(free_dim(p, n, guard=max(guard, 6)) - spaces[n].dim)
    return out


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Optional[dict] = None


def is_consequence(p: Presentation, element: RawIdentity, guard: int = DEFAULT_GUARD) -> Membership:
    """Whether ``element`` (polarized) lies in the ideal at its arity.

    The witness maps indices of generating vectors (in generation order) to
    coefficients expressing the element.
    """
    gens = _gens(p)
    vec = polarize(element, gens)
    if not vec:
        return Membership(True, {})
    n = _arity_of(vec)
    _guard(n, guard)
    space = consequence_spaces(p, n, guard, track_last=True)[n]
    ok, combo = space.contains(vec)
    return Membership(ok, combo)
