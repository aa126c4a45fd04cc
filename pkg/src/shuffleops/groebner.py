"""Truncated Buchberger completion for shuffle operads.

Completion is stratified by arity: every S-polynomial whose ambient has
arity ``a`` is processed before anything of arity ``a + 1``.  New elements
adjoined at arity ``a`` have leading terms that are normal with respect to
everything already present, so they never create further S-polynomials of
ambient arity ``a`` and each stratum finishes in one pass.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import NotQuadratic, OutOfBound, PatternMismatch
from .ordering import OrderingSpec
from .poly import OperadPolynomial, insert, interreduce, leading_term, monic, reduce
from .shuffle_tree import (
    OverlapSite,
    Signature,
    TreeMonomial,
    arity,
    match_at,
    ordered_set_partitions,
    overlaps,
    relabel,
    standardize,
    to_str,
)
from .symmetrize import ShufflePresentation

NO_OVERLAP = "no-overlap"
PAIRS_EXHAUSTED = "critical-pairs-exhausted"
QUADRATIC = "quadratic-certificate"


@dataclass(frozen=True)
class CompletionRecord:
    arity: int
    pair: object
    ambient: Optional[str]
    outcome: str

    def to_dict(self) -> dict:
        return {
            "arity": self.arity,
            "pair": list(self.pair) if isinstance(self.pair, tuple) else self.pair,
            "ambient": self.ambient,
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class TruncatedGB:
    ordering: OrderingSpec
    signature: Signature
    elements: tuple
    arity_bound: int
    complete_through: dict
    log: tuple = ()
    status: str = "complete-to-bound"
    certification: Optional[str] = None
    _normal_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def leading_terms(self) -> list:
        return [leading_term(g, self.ordering)[0] for g in self.elements]

    @property
    def certified(self) -> bool:
        return self.certification is not None

    def is_complete(self, n: int) -> bool:
        return bool(self.complete_through.get(n, False))

    def trace_lines(self) -> list:
        return [json.dumps(r.to_dict(), sort_keys=True) for r in self.log]


def spolynomial(site: OverlapSite, g1: OperadPolynomial, g2: OperadPolynomial, ordering: OrderingSpec) -> OperadPolynomial:
    """``g1/c1`` and ``g2/c2`` inserted along the two occurrences, subtracted."""
    m1, c1 = leading_term(g1, ordering)
    m2, c2 = leading_term(g2, ordering)
    if site.occ1.pattern != m1 or site.occ2.pattern != m2:
        raise PatternMismatch("overlap patterns are not the leading terms of the given elements")
    return insert(g1, site.occ1).scale(1 / c1) - insert(g2, site.occ2).scale(1 / c2)


def _all_sites(i, j, mi, mj, bound):
    sites = overlaps(mi, mj, bound)
    return [(i, j, s) for s in sites]


def buchberger(
    sp: ShufflePresentation,
    ordering: OrderingSpec,
    N: int,
    max_elements: Optional[int] = None,
    time_limit: Optional[float] = None,
    on_record: Optional[Callable[[CompletionRecord], None]] = None,
) -> TruncatedGB:
    """Reduced Gröbner basis of ``sp`` up to arity ``N``.

    ``max_elements`` and ``time_limit`` (seconds) are resource guards; when
    one trips, the result has status ``"truncated"`` and the current and
    higher arities are marked incomplete.
    """
    start = time.monotonic()
    G: list = []
    pending: dict = {}
    log: list = []
    complete: dict = {}
    truncated = False

    def record(rec):
        log.append(rec)
        if on_record is not None:
            on_record(rec)

    def add_element(g):
        idx = len(G)
        G.append(g)
        lt = leading_term(g, ordering)[0]
        for j in range(idx + 1):
            other = leading_term(G[j], ordering)[0]
            for a, b, s in _all_sites(j, idx, other, lt, N):
                pending.setdefault(s.arity, []).append((a, b, s))

    relations = sp.by_arity()
    low = min([2] + list(relations))
    for a in range(low, N + 1):
        if truncated:
            complete[a] = False
            continue
        work = [("input", None, r) for r in relations.get(a, [])]
        for i, j, site in sorted(
            pending.pop(a, []),
            key=lambda t: (t[0], t[1], to_str(t[2].ambient), t[2].occ1.vertex_set, t[2].occ2.vertex_set),
        ):
            work.append(((i, j), site, None))
        for tag, site, rel in work:
            if (max_elements is not None and len(G) >= max_elements) or (
                time_limit is not None and time.monotonic() - start > time_limit
            ):
                truncated = True
                break
            if rel is not None:
                poly, ambient = rel, None
            else:
                i, j = tag
                poly = spolynomial(site, G[i], G[j], ordering)
                ambient = to_str(site.ambient)
            r = reduce(poly, G, ordering)
            if r.is_zero():
                record(CompletionRecord(a, tag, ambient, "reduced-to-zero"))
                continue
            record(CompletionRecord(a, tag, ambient, "adjoined"))
            add_element(monic(r, ordering))
        if truncated:
            complete[a] = False
            continue
        # tails of same-arity elements may contain leading terms adjoined later
        same = [k for k, g in enumerate(G) if g.arity == a]
        for k in same:
            others = G[:k] + G[k + 1:]
            G[k] = monic(reduce_tail(G[k], others, ordering), ordering)
        complete[a] = True
    for a in range(2, low):
        complete.setdefault(a, True)

    elements = interreduce(G, ordering)
    certification = None
    if not truncated and complete.get(N, False):
        lts = [leading_term(g, ordering)[0] for g in elements]
        arities = []
        for i, j in itertools.combinations_with_replacement(range(len(lts)), 2):
            arities.extend(s.arity for s in overlaps(lts[i], lts[j]))
        if not arities:
            certification = NO_OVERLAP
        elif max(arities) <= N:
            certification = PAIRS_EXHAUSTED
    return TruncatedGB(
        ordering,
        sp.signature,
        tuple(elements),
        N,
        dict(sorted(complete.items())),
        tuple(log),
        "truncated" if truncated else "complete-to-bound",
        certification,
    )


def reduce_tail(g: OperadPolynomial, G: list, ordering: OrderingSpec) -> OperadPolynomial:
    """Reduce every monomial of ``g`` except its leading term."""
    m, c = leading_term(g, ordering)
    rest = g - OperadPolynomial.monomial(m, c)
    return OperadPolynomial.monomial(m, c) + reduce(rest, G, ordering)


# ---------------------------------------------------------------------------
# normal monomials and dimensions
# ---------------------------------------------------------------------------


def _blocks_children(signature: Signature, n: int, pool: Callable[[int], tuple]):
    """Trees of arity ``n`` whose children come from ``pool(size)``."""
    for g in signature.generators:
        k = g.arity
        if k > n:
            continue
        for blocks in ordered_set_partitions(range(1, n + 1), k):
            choices = []
            for block in blocks:
                mapping = {i + 1: v for i, v in enumerate(block)}
                choices.append([relabel(t, mapping) for t in pool(len(block))])
            for kids in itertools.product(*choices):
                yield (g.name, *kids)


def normal_monomials(gb: TruncatedGB, n: int) -> list:
    """Arity-n monomials divisible by no leading term, largest first."""
    if n > gb.arity_bound or n < 1:
        raise OutOfBound(f"arity {n} outside 1..{gb.arity_bound}")
    return gb.ordering.sorted_desc(_normal(gb, n))


def _normal(gb: TruncatedGB, n: int) -> tuple:
    cache = gb._normal_cache
    if n in cache:
        return cache[n]
    if n == 1:
        cache[1] = (1,)
        return cache[1]
    by_root: dict = {}
    for m in gb.leading_terms:
        if arity(m) <= n:
            by_root.setdefault(m[0], []).append(m)
    out = []
    for t in _blocks_children(gb.signature, n, lambda k: _normal(gb, k)):
        if any(match_at(t, (), m) is not None for m in by_root.get(t[0], ())):
            continue
        out.append(t)
    cache[n] = tuple(out)
    return cache[n]


@dataclass(frozen=True)
class HilbertSeries:
    dims: tuple
    exact: tuple

    def as_list(self) -> list:
        return list(self.dims)


def hilbert_series(gb: TruncatedGB, N: int) -> HilbertSeries:
    """Normal-monomial counts for arities 1..N; ``exact`` flags arities the
    completion finished (otherwise the count is only an upper bound)."""
    if N > gb.arity_bound:
        raise OutOfBound(f"arity {N} exceeds the completion bound {gb.arity_bound}")
    dims = tuple(len(_normal(gb, n)) for n in range(1, N + 1))
    exact = tuple(n == 1 or gb.is_complete(n) for n in range(1, N + 1))
    return HilbertSeries(dims, exact)


# ---------------------------------------------------------------------------
# quadratic counting certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    passed: bool
    counts: tuple
    expected: tuple
    reason: str = ""

    def describe(self) -> str:
        rows = ", ".join(f"{c}/{e}" for c, e in zip(self.counts, self.expected))
        verdict = "passed" if self.passed else "failed"
        return f"quadratic certificate {verdict} (counted/supplied per arity from 1: {rows}){' ' + self.reason if self.reason else ''}"


def _quadratic_divisor(t: TreeMonomial, child: int) -> TreeMonomial:
    """The two-vertex pattern formed by ``t``'s root and its child ``child``."""
    kids = []
    for i, c in enumerate(t[1:]):
        if i == child:
            kids.append((c[0],) + tuple(_min_leaf(x) for x in c[1:]))
        else:
            kids.append(_min_leaf(c))
    return standardize((t[0], *kids))


def _min_leaf(t):
    while not isinstance(t, int):
        t = t[1]
    return t


def dual_monomials(signature: Signature, leads: set, n: int, _cache=None) -> tuple:
    """Monomials each of whose quadratic divisors is in ``leads``."""
    cache = {} if _cache is None else _cache
    if n in cache:
        return cache[n]
    if n == 1:
        cache[1] = (1,)
        return cache[1]
    out = []
    for t in _blocks_children(signature, n, lambda k: dual_monomials(signature, leads, k, cache)):
        ok = all(
            _quadratic_divisor(t, i) in leads
            for i, c in enumerate(t[1:])
            if not isinstance(c, int)
        )
        if ok:
            out.append(t)
    cache[n] = tuple(out)
    return cache[n]


def quadratic_certificate(gb: TruncatedGB, koszul_dual_dims, N: int) -> CertificateReport:
    """Compare counts of monomials all of whose quadratic divisors are
    leading terms with supplied dimensions of the Koszul dual operad.

    ``koszul_dual_dims[k]`` is the dimension at arity ``k + 1``; the values
    are used verbatim.
    """
    if any(g.arity != 2 for g in gb.signature.generators):
        raise NotQuadratic("the counting certificate needs binary generators")
    expected = tuple(int(x) for x in koszul_dual_dims[:N])
    if len(expected) < N:
        raise NotQuadratic(f"need {N} dual dimensions, got {len(expected)}")
    bad = [g for g in gb.elements if g.arity != 3]
    leads = set(gb.leading_terms)
    cache: dict = {}
    counts = tuple(len(dual_monomials(gb.signature, leads, n, cache)) for n in range(1, N + 1))
    if bad:
        return CertificateReport(
            False, counts, expected, f"completion adjoined {len(bad)} non-quadratic element(s)"
        )
    return CertificateReport(counts == expected, counts, expected)


def free_monomial_count(signature: Signature, n: int) -> int:
    """Number of shuffle monomials of arity n (used for free presentations)."""
    from .shuffle_tree import enumerate_monomials

    return len(enumerate_monomials(signature, n))
