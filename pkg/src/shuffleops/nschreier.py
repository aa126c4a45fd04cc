"""Conditions M1 and M2 on truncated Gröbner bases, and the verdict report.

M1: for the reverse graded path-lexicographic ordering every leading term
has leaf 1 as a child of the root.  M2: for some ordering every leading
term is a left comb in which leaves 1 and 2 share a parent.  Both holding
with certified bases is sufficient for the Nielsen-Schreier property; the
report never claims the converse.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .errors import NotQuadratic, OutOfBound
from .groebner import (
    NO_OVERLAP,
    QUADRATIC,
    TruncatedGB,
    buchberger,
    hilbert_series,
    normal_monomials,
    quadratic_certificate,
)
from .ordering import OrderingSpec, preset
from .presentation import Presentation
from .shuffle_tree import (
    is_left_comb,
    min_leaf_at_root,
    second_min_sibling_of_min,
    to_str,
)
from .symmetrize import ShufflePresentation, present_shuffle

SCHEMA = "shuffleops.nsreport/1"
HOLDS_CERTIFIED = "holds-certified"
HOLDS_UP_TO_BOUND = "holds-up-to-bound"
FAILS = "fails"
NOT_EVALUATED = "not-evaluated"

NS_BY_THEOREM = "NS-by-theorem"
NS_UP_TO_BOUND = "NS-up-to-bound"
CRITERION_FAILS = "criterion-fails"
INCONCLUSIVE = "inconclusive"
NS_BY_CONJECTURE = "NS-by-conjecture"
NS_BY_CONJECTURE_UP_TO_BOUND = "NS-by-conjecture-up-to-bound"

SUFFICIENCY_NOTE = (
    "the criterion is sufficient, not necessary: a failing criterion does not "
    "show that the variety lacks the Nielsen-Schreier property"
)

MAX_VARIANTS_FOR_SEARCH = 4


@dataclass(frozen=True)
class ConditionRun:
    ordering: OrderingSpec
    holds: bool
    certification: Optional[str]
    witness: Optional[tuple]
    gb: TruncatedGB = field(repr=False, compare=False)

    @property
    def certified(self) -> bool:
        return self.certification is not None

    def to_dict(self) -> dict:
        return {
            "ordering": self.ordering.to_dict(),
            "holds": self.holds,
            "certification": self.certification or "none",
            "witness": to_str(self.witness) if self.witness is not None else None,
            "decided_at_arity": self.gb.arity_bound,
            "leading_terms": [to_str(m) for m in self.gb.leading_terms],
        }


@dataclass(frozen=True)
class ConditionResult:
    condition: str
    status: str
    arity_bound: int
    runs: tuple = ()
    chosen: Optional[ConditionRun] = None

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS_CERTIFIED, HOLDS_UP_TO_BOUND)

    @property
    def witness(self):
        if self.status == FAILS and self.runs:
            return self.runs[0].witness
        return None

    @property
    def certification(self) -> Optional[str]:
        return self.chosen.certification if self.chosen is not None else None

    def to_dict(self) -> dict:
        out = {
            "condition": self.condition,
            "status": self.status,
            "arity_bound": self.arity_bound,
            "family": [r.ordering.describe() for r in self.runs],
            "certification": (self.certification or "none"),
            "ordering": self.chosen.ordering.to_dict() if self.chosen else None,
            "witness": to_str(self.witness) if self.witness is not None else None,
        }
        if self.chosen is not None:
            out["leading_terms"] = [to_str(m) for m in self.chosen.gb.leading_terms]
        return out


@dataclass(frozen=True)
class NSReport:
    presentation: str
    arity_bound: int
    m1: ConditionResult
    m2: ConditionResult
    verdict: str
    conjecture_mode: bool = False
    note: str = SUFFICIENCY_NOTE

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "presentation": self.presentation,
            "arity_bound": self.arity_bound,
            "conjecture_mode": self.conjecture_mode,
            "m1": self.m1.to_dict(),
            "m2": self.m2.to_dict(),
            "verdict": self.verdict,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary(self) -> str:
        lines = [f"presentation: {self.presentation or '(unnamed)'}", f"arity bound: {self.arity_bound}"]
        for cond in (self.m1, self.m2):
            line = f"{cond.condition}: {cond.status}"
            if cond.chosen is not None:
                line += f" under {cond.chosen.ordering.describe()}"
                line += f" (certification: {cond.certification or 'none'})"
            if cond.witness is not None:
                line += f"; witness {to_str(cond.witness)}"
            lines.append(line)
            if cond.chosen is not None:
                lines.append("  leading terms: " + ", ".join(to_str(m) for m in cond.chosen.gb.leading_terms))
        lines.append(f"verdict: {self.verdict}" + (" (conjecture mode, M1 only)" if self.conjecture_mode else ""))
        lines.append(f"note: {self.note}")
        return "\n".join(lines)


def _shuffle(p: Union[Presentation, ShufflePresentation]) -> ShufflePresentation:
    return p if isinstance(p, ShufflePresentation) else present_shuffle(p)


def generator_orders(sp: ShufflePresentation, orders: Optional[Sequence[Sequence[str]]] = None) -> list:
    """The declared family, or every permutation of the variants when there
    are at most four of them (declaration order otherwise)."""
    if orders:
        return [tuple(o) for o in orders]
    names = sp.signature.names
    if len(names) <= MAX_VARIANTS_FOR_SEARCH:
        return [tuple(p) for p in itertools.permutations(names)]
    return [tuple(names)]


def _certify(gb: TruncatedGB, dual_dims) -> Optional[str]:
    if dual_dims and len(dual_dims) >= 4 and gb.status != "truncated":
        try:
            rep = quadratic_certificate(gb, dual_dims, len(dual_dims))
        except NotQuadratic:
            rep = None
        if rep is not None and rep.passed:
            return QUADRATIC
    return gb.certification


def _completion(sp, ordering, n, cache) -> TruncatedGB:
    key = (ordering.describe(), n)
    if key not in cache:
        cache[key] = buchberger(sp, ordering, n)
    return cache[key]


def _run(sp, ordering, N, predicate, dual_dims, cache) -> ConditionRun:
    """Complete arity by arity and stop at the first failing leading term.

    Leading terms of arity at most k are final once arity k is complete, so
    a failure seen at a lower bound persists at every higher one.
    """
    start = min(max(sp.max_relation_arity, 3), N)
    for n in range(start, N + 1):
        gb = _completion(sp, ordering, n, cache)
        witness = next((m for m in gb.leading_terms if not predicate(m)), None)
        if witness is not None and gb.is_complete(n):
            return ConditionRun(ordering, False, None, witness, gb)
    holds = witness is None and gb.status != "truncated"
    return ConditionRun(ordering, holds, _certify(gb, dual_dims) if holds else None, witness, gb)


def _summarize(condition: str, runs: list, N: int) -> ConditionResult:
    certified = [r for r in runs if r.holds and r.certified]
    if certified:
        return ConditionResult(condition, HOLDS_CERTIFIED, N, tuple(runs), certified[0])
    holding = [r for r in runs if r.holds]
    if holding:
        return ConditionResult(condition, HOLDS_UP_TO_BOUND, N, tuple(runs), holding[0])
    return ConditionResult(condition, FAILS, N, tuple(runs), None)


def m1_predicate(m) -> bool:
    return min_leaf_at_root(m)


def m2_predicate(m) -> bool:
    return is_left_comb(m) and second_min_sibling_of_min(m)


def _search(sp, family, N, predicate, dual_dims, cache, exhaustive) -> list:
    """Evaluate the family; without ``exhaustive`` the search ends at the
    first certified success, which already settles the condition.

    Orderings whose basis at the relation arity already satisfies the
    predicate and has no overlaps at all are tried first, since their
    completion cannot grow.
    """
    family = list(family)
    if not exhaustive:
        start = min(max(sp.max_relation_arity, 3), N)

        def promising(o) -> bool:
            probe = _completion(sp, o, start, cache)
            return probe.certification == NO_OVERLAP and all(predicate(m) for m in probe.leading_terms)

        family.sort(key=lambda o: not promising(o))
    runs = []
    for ordering in family:
        run = _run(sp, ordering, N, predicate, dual_dims, cache)
        runs.append(run)
        if run.holds and run.certified and not exhaustive:
            break
    return runs


def check_m1(
    p,
    N: int,
    orders: Optional[Sequence[Sequence[str]]] = None,
    dual_dims: Optional[Sequence[int]] = None,
    _cache: Optional[dict] = None,
    exhaustive: bool = False,
) -> ConditionResult:
    sp = _shuffle(p)
    cache = {} if _cache is None else _cache
    family = [preset("rgpl", o) for o in generator_orders(sp, orders)]
    return _summarize("M1", _search(sp, family, N, m1_predicate, dual_dims, cache, exhaustive), N)


def default_m2_family(sp: ShufflePresentation, orders=None) -> list:
    return [
        preset(name, o)
        for name in ("gpl", "permfirst-rev-gpl")
        for o in generator_orders(sp, orders)
    ]


def check_m2(
    p,
    N: int,
    orderings: Optional[Sequence[OrderingSpec]] = None,
    dual_dims: Optional[Sequence[int]] = None,
    _cache: Optional[dict] = None,
    exhaustive: bool = False,
) -> ConditionResult:
    sp = _shuffle(p)
    cache = {} if _cache is None else _cache
    family = list(orderings) if orderings else default_m2_family(sp)
    return _summarize("M2", _search(sp, family, N, m2_predicate, dual_dims, cache, exhaustive), N)


def verdict(
    p,
    N: int,
    orders: Optional[Sequence[Sequence[str]]] = None,
    orderings: Optional[Sequence[OrderingSpec]] = None,
    dual_dims: Optional[Sequence[int]] = None,
    conjecture_mode: bool = False,
    exhaustive: bool = False,
) -> NSReport:
    sp = _shuffle(p)
    name = sp.name
    if N < sp.max_relation_arity:
        raise OutOfBound(f"arity bound {N} is below the relation arity {sp.max_relation_arity}")
    cache: dict = {}
    m1 = check_m1(sp, N, orders, dual_dims, cache, exhaustive)
    if conjecture_mode:
        m2 = ConditionResult("M2", NOT_EVALUATED, N)
        if m1.status == HOLDS_CERTIFIED:
            v = NS_BY_CONJECTURE
        elif m1.status == HOLDS_UP_TO_BOUND:
            v = NS_BY_CONJECTURE_UP_TO_BOUND
        else:
            v = CRITERION_FAILS
        return NSReport(name, N, m1, m2, v, True)
    family = list(orderings) if orderings else default_m2_family(sp, orders)
    m2 = check_m2(sp, N, family, dual_dims, cache, exhaustive)
    if m1.status == HOLDS_CERTIFIED and m2.status == HOLDS_CERTIFIED:
        v = NS_BY_THEOREM
    elif m1.holds and m2.holds:
        v = NS_UP_TO_BOUND
    elif m1.status == FAILS and m2.status == FAILS:
        v = CRITERION_FAILS
    else:
        v = INCONCLUSIVE
    return NSReport(name, N, m1, m2, v, False)


# ---------------------------------------------------------------------------
# counting consequences
# ---------------------------------------------------------------------------


def _check_bound(gb: TruncatedGB, n: int) -> None:
    if n < 1 or n > gb.arity_bound:
        raise OutOfBound(f"arity {n} outside 1..{gb.arity_bound}")


def envelope_generator_count(gb: TruncatedGB, n: int) -> int:
    """Normal monomials of arity n with leaf 1 attached to the root.

    Meaningful for bases computed with the reverse graded ordering.
    """
    _check_bound(gb, n)
    return sum(1 for m in normal_monomials(gb, n) if min_leaf_at_root(m))


def pbw_generator_count(gb: TruncatedGB, n: int) -> int:
    """Normal monomials of arity n that are left combs (graded orderings)."""
    _check_bound(gb, n)
    return sum(1 for m in normal_monomials(gb, n) if n > 1 and is_left_comb(m))


def lower_bound_series(generator_dims: Mapping[int, int], N: int) -> list:
    """Dimensions ``n! [t^n]`` of the integral of ``1/(1 - f_X'(t))`` for n = 1..N.

    ``generator_dims`` maps an arity ``k`` to the dimension of the ordered
    species of generators in that arity.
    """
    c = [Fraction(0)] * N
    fact = [1] * (N + 1)
    for i in range(1, N + 1):
        fact[i] = fact[i - 1] * i
    for k, d in generator_dims.items():
        if 1 <= k - 1 < N:
            c[k - 1] += Fraction(d, fact[k - 1])
    inv = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for m in range(1, N):
        inv[m] = sum((c[j] * inv[m - j] for j in range(1, m + 1)), Fraction(0))
    return [fact[n - 1] * inv[n - 1] for n in range(1, N + 1)]


def dimension_report(gb: TruncatedGB, N: int) -> dict:
    hs = hilbert_series(gb, N)
    return {"dims": list(hs.dims), "exact": list(hs.exact)}
