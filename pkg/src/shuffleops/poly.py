"""Exact rational linear combinations of tree monomials."""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .errors import ArityMismatch, ZeroPolynomial
from .ordering import OrderingSpec
from .shuffle_tree import (
    Occurrence,
    TreeMonomial,
    arity,
    divisors,
    parse_monomial,
    replace,
    to_str,
)


class OperadPolynomial:
    """An immutable map from same-arity monomials to nonzero Fractions."""

    __slots__ = ("_arity", "_terms", "_hash")

    def __init__(self, arity_: int, terms: Optional[dict] = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if arity(m) != arity_:
                    raise ArityMismatch(f"{to_str(m)} does not have arity {arity_}")
                clean[m] = c
        self._arity = arity_
        self._terms = clean
        self._hash = None

    @classmethod
    def from_terms(cls, arity_: int, pairs: Iterable[tuple]) -> "OperadPolynomial":
        acc: dict = {}
        for m, c in pairs:
            acc[m] = acc.get(m, 0) + Fraction(c)
        return cls(arity_, acc)

    @classmethod
    def monomial(cls, m: TreeMonomial, c=1) -> "OperadPolynomial":
        return cls(arity(m), {m: c})

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list:
        return list(self._terms)

    def coefficient(self, m: TreeMonomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperadPolynomial):
            return NotImplemented
        return self._arity == other._arity and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._arity, frozenset(self._terms.items())))
        return self._hash

    def _combine(self, other: "OperadPolynomial", sign: int) -> "OperadPolynomial":
        if other._arity != self._arity:
            raise ArityMismatch("cannot combine polynomials of different arity")
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + sign * c
        return OperadPolynomial(self._arity, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "OperadPolynomial":
        c = Fraction(c)
        return OperadPolynomial(self._arity, {m: c * v for m, v in self._terms.items()})

    def primitive(self) -> "OperadPolynomial":
        """Scale to coprime integer coefficients, keeping signs."""
        if not self._terms:
            return self
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return self.scale(Fraction(den, num))

    def sorted_terms(self, ordering: Optional[OrderingSpec] = None) -> list:
        if ordering is None:
            return sorted(self._terms.items(), key=lambda mc: to_str(mc[0]))
        return sorted(self._terms.items(), key=lambda mc: ordering.key(mc[0]), reverse=True)

    def to_str(self, ordering: Optional[OrderingSpec] = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms(ordering)):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            text = f"{coef}{to_str(m)}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + text)
            else:
                parts.append(f" {sign} {text}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"OperadPolynomial({self.to_str()})"


def parse_polynomial(text: str) -> OperadPolynomial:
    """Parse ``"b(b(1,2),3) - 1/2 b(1,b(2,3))"`` style sums."""
    s = text.strip()
    pairs = []
    i = 0
    sign = 1
    depth = 0
    start = 0
    chunks = []
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and s[start:i].strip():
            chunks.append((sign, s[start:i]))
            sign = 1 if ch == "+" else -1
            start = i + 1
        elif ch in "+-" and depth == 0:
            sign = sign * (1 if ch == "+" else -1)
            start = i + 1
        i += 1
    chunks.append((sign, s[start:]))
    for sgn, chunk in chunks:
        chunk = chunk.strip()
        if not chunk:
            continue
        coef = Fraction(1)
        head, _, rest = chunk.partition(" ")
        if rest and "(" not in head:
            coef = Fraction(head)
            chunk = rest
        m = parse_monomial(chunk)
        pairs.append((m, sgn * coef))
    if not pairs:
        raise ZeroPolynomial("empty polynomial")
    return OperadPolynomial.from_terms(arity(pairs[0][0]), pairs)


def leading_term(p: OperadPolynomial, ordering: OrderingSpec) -> tuple:
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no leading term")
    m = ordering.max(p.monomials())
    return m, p.coefficient(m)


def monic(p: OperadPolynomial, ordering: OrderingSpec) -> OperadPolynomial:
    _, c = leading_term(p, ordering)
    return p.scale(1 / c)


def insert(g: OperadPolynomial, occ: Occurrence) -> OperadPolynomial:
    """Put ``g`` in place of the pattern of ``occ`` inside its host."""
    acc: dict = {}
    for m, c in g.items():
        t, s = replace(occ, m)
        acc[t] = acc.get(t, 0) + s * c
    return OperadPolynomial(arity(occ.host), acc)


@dataclass(frozen=True)
class RewriteStep:
    """One reduction step: ``coefficient * g_index`` inserted along ``occurrence``."""

    g_index: int
    occurrence: Occurrence
    coefficient: Fraction


def reduce(
    p: OperadPolynomial,
    G: list,
    ordering: OrderingSpec,
    rng: Optional[random.Random] = None,
    trace: Optional[list] = None,
) -> OperadPolynomial:
    """Normal form of ``p`` modulo ``G``.

    Monomials are rewritten largest first.  By default the first element of
    ``G`` whose leading term divides the monomial is used, along its first
    occurrence; passing ``rng`` picks among all candidates at random
    instead.  ``trace`` collects :class:`RewriteStep` records, which witness
    that ``p - reduce(p)`` lies in the ideal.
    """
    leads = []
    for g in G:
        m, c = leading_term(g, ordering)
        leads.append((m, c))
    by_root: dict = {}
    for idx, (m, _) in enumerate(leads):
        by_root.setdefault(m[0], []).append(idx)

    terms = dict(p.items())
    heap = [(_neg(ordering.key(m)), m) for m in terms]
    heapq.heapify(heap)
    done: dict = {}
    seen = set()
    while heap:
        _, m = heapq.heappop(heap)
        if m in seen:
            continue
        c = terms.get(m, 0)
        if not c:
            continue
        seen.add(m)
        choice = _find_divisor(m, leads, by_root, rng)
        if choice is None:
            done[m] = c
            continue
        idx, occ = choice
        factor = -c / leads[idx][1]
        if trace is not None:
            trace.append(RewriteStep(idx, occ, -factor))
        for t, a in G[idx].items():
            new, s = replace(occ, t)
            val = terms.get(new, 0) + factor * a * s
            terms[new] = val
            if new not in seen and val:
                heapq.heappush(heap, (_neg(ordering.key(new)), new))
        terms[m] = 0
    return OperadPolynomial(p.arity, done)


class _neg:
    """Inverts the order of a key so that heapq pops the largest first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _find_divisor(m, leads, by_root, rng):
    roots = set()
    stack = [m]
    while stack:
        t = stack.pop()
        if isinstance(t, int):
            continue
        roots.add(t[0])
        stack.extend(t[1:])
    candidates = sorted(i for r in roots for i in by_root.get(r, ()))
    if rng is None:
        for idx in candidates:
            occs = divisors(m, leads[idx][0])
            if occs:
                return idx, occs[0]
        return None
    options = [(idx, occ) for idx in candidates for occ in divisors(m, leads[idx][0])]
    if not options:
        return None
    return rng.choice(options)


def interreduce(G: list, ordering: OrderingSpec) -> list:
    """Monic, mutually reduced basis of the same ideal.

    Output is sorted by arity and then by leading term, largest first.
    """
    work = [monic(g, ordering) for g in G if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(work):
            others = work[:i] + work[i + 1:]
            r = reduce(work[i], others, ordering)
            if r.is_zero():
                work.pop(i)
                changed = True
                continue
            r = monic(r, ordering)
            if r != work[i]:
                work[i] = r
                changed = True
            i += 1
    work.sort(key=lambda g: (g.arity, _neg(ordering.key(leading_term(g, ordering)[0]))))
    return work
