"""From symmetric-operad relations to shuffle-operad relations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .ordering import OrderingSpec, preset
from .poly import OperadPolynomial
from .presentation import (
    PLAIN,
    GeneratorSpec,
    MultilinearIdentity,
    Presentation,
    multilinearize,
    validate,
)
from .shuffle_tree import ShuffleGenerator, Signature, canonical, relabel, variant_name


def to_shuffle_generators(g: GeneratorSpec) -> list:
    """Ordered-species basis of one generator: ``k!`` variants when plain."""
    if g.symmetry != PLAIN:
        return [ShuffleGenerator(g.name, g.name, 2, (1, 2), g.symmetry)]
    return [
        ShuffleGenerator(variant_name(g.name, perm), g.name, g.arity, perm, PLAIN)
        for perm in itertools.permutations(range(1, g.arity + 1))
    ]


def signature_of(generators) -> Signature:
    out = []
    for g in generators:
        out.extend(to_shuffle_generators(g))
    return Signature(tuple(out))


def canonical_order(signature: Signature) -> OrderingSpec:
    """Fixed order used for pivots and scaling, independent of user orderings."""
    return preset("gpl", signature.names)


class _Echelon:
    """Incremental exact row space over monomials, pivots in a fixed order."""

    def __init__(self, key):
        self.key = key
        self.rows: dict = {}

    def reduce(self, vec: dict) -> dict:
        vec = {m: c for m, c in vec.items() if c}
        while vec:
            pivots = [m for m in vec if m in self.rows]
            if not pivots:
                break
            m = max(pivots, key=self.key)
            f = vec[m]
            for mm, cc in self.rows[m].items():
                v = vec.get(mm, 0) - f * cc
                if v:
                    vec[mm] = v
                else:
                    vec.pop(mm, None)
        return vec

    def add(self, vec: dict) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        m = max(r, key=self.key)
        f = r[m]
        row = {mm: cc / f for mm, cc in r.items()}
        for other in self.rows.values():
            if m in other:
                g = other[m]
                for mm, cc in row.items():
                    v = other.get(mm, 0) - g * cc
                    if v:
                        other[mm] = v
                    else:
                        other.pop(mm, None)
        self.rows[m] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def shuffle_image(identity: MultilinearIdentity, signature: Signature, perm=None) -> OperadPolynomial:
    """Rewrite ``identity(a_perm(1), ..., a_perm(n))`` in the shuffle basis."""
    n = identity.arity
    mapping = {i + 1: (perm[i] if perm else i + 1) for i in range(n)}
    acc: dict = {}
    for c, expr in identity.terms:
        m, s = canonical(relabel(expr, mapping), signature)
        acc[m] = acc.get(m, 0) + s * Fraction(c)
    return OperadPolynomial(n, acc)


def _scaled(p: OperadPolynomial, order: OrderingSpec) -> OperadPolynomial:
    p = p.primitive()
    lead = max(p.monomials(), key=order.key)
    return p if p.coefficient(lead) > 0 else -p


def orbit_expand(identity: MultilinearIdentity, signature: Signature) -> list:
    """A linearly independent subset of the ``S_n``-orbit spanning all of it.

    Permutations are visited in lexicographic order and an image is kept
    when it is independent of the ones kept so far.  Each kept element is
    made primitive with a positive coefficient on its largest monomial in
    the fixed canonical order.
    """
    order = canonical_order(signature)
    ech = _Echelon(order.key)
    out = []
    for perm in itertools.permutations(range(1, identity.arity + 1)):
        p = shuffle_image(identity, signature, perm)
        if p.is_zero():
            continue
        if ech.add(dict(p.items())):
            out.append(_scaled(p, order))
    return out


@dataclass(frozen=True)
class ShufflePresentation:
    signature: Signature
    relations: tuple
    name: str = ""
    source: Optional[Presentation] = field(default=None, compare=False)

    def by_arity(self) -> dict:
        out: dict = {}
        for r in self.relations:
            out.setdefault(r.arity, []).append(r)
        return out

    @property
    def max_relation_arity(self) -> int:
        return max((r.arity for r in self.relations), default=0)


def present_shuffle(p: Presentation) -> ShufflePresentation:
    """Multilinearize, pass to shuffle generators and expand orbits.

    Relations of equal arity coming from different identities are merged
    into one independent set.
    """
    validate(p)
    signature = signature_of(p.generators)
    order = canonical_order(signature)
    echelons: dict = {}
    relations = []
    for identity in p.identities:
        for mid in multilinearize(identity, p.generators):
            ech = echelons.setdefault(mid.arity, _Echelon(order.key))
            for r in orbit_expand(mid, signature):
                if ech.add(dict(r.items())):
                    relations.append(r)
    relations.sort(key=lambda r: r.arity)
    return ShufflePresentation(signature, tuple(relations), p.name, p)


def relation_space_dim(sp: ShufflePresentation, n: int) -> int:
    return sum(1 for r in sp.relations if r.arity == n)
