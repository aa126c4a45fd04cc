"""Acceptance criteria 1-10, one test per criterion.

Each test gathers named checks, prints a single ``CRITERION k PASS/FAIL``
line and then asserts every check.  Run directly with
``python3 tests/test_acceptance.py`` for just these lines.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from fractions import Fraction

import pytest

from shuffleops.groebner import NO_OVERLAP, buchberger, hilbert_series, quadratic_certificate
from shuffleops.nschreier import FAILS, NS_BY_THEOREM, check_m1, lower_bound_series, verdict
from shuffleops.oracle import is_consequence, operad_dims
from shuffleops.ordering import PRESETS, check_admissible, check_total, make_ordering, preset
from shuffleops.poly import OperadPolynomial, parse_polynomial, reduce
from shuffleops.presentation import RawIdentity
from shuffleops.shuffle_tree import divisors, enumerate_monomials, left_comb, overlaps, parse_monomial, right_comb
from shuffleops.symmetrize import present_shuffle

from support import (
    BUNDLED,
    brute_divisor_sets,
    brute_overlaps,
    case_id,
    presentation,
    regression_cases,
    shuffle,
)

STAR, OP = "*", "*^op"


class Checks:
    def __init__(self):
        self.items: list = []

    def add(self, label: str, ok: bool) -> None:
        self.items.append((label, bool(ok)))

    @property
    def failed(self) -> list:
        return [label for label, ok in self.items if not ok]


def conclude(capsys, k: int, title: str, checks: Checks) -> None:
    bad = checks.failed
    status = "PASS" if not bad else "FAIL"
    detail = f"{len(checks.items)} checks" if not bad else "failed: " + "; ".join(bad)
    with capsys.disabled():
        print(f"\nCRITERION {k} {status}: {title} ({detail})")
    assert not bad, bad


def rc(names, labels):
    return right_comb(names, labels)


def lc(names, labels):
    return left_comb(names, labels)


def leads(gb) -> set:
    return set(gb.leading_terms)


# ---------------------------------------------------------------------------


def test_criterion_1_lie(capsys):
    c = Checks()
    t0 = time.perf_counter()
    sp = shuffle("lie")
    j = parse_polynomial("b(b(1,2),3) - b(1,b(2,3)) - b(b(1,3),2)")
    c.add("shuffle presentation is exactly J", list(sp.relations) == [j])
    for name, lead in (("rgpl", rc(["b", "b"], [1, 2, 3])), ("gpl", lc(["b", "b"], [1, 2, 3]))):
        gb = buchberger(sp, preset(name, ["b"]), 6)
        c.add(f"{name}: basis is {{J}}", [g.primitive() in (j, -j) for g in gb.elements] == [True])
        c.add(f"{name}: complete through 6", all(gb.complete_through[n] for n in range(3, 7)))
        c.add(f"{name}: leading term", gb.leading_terms == [lead])
        c.add(f"{name}: dims (n-1)!", hilbert_series(gb, 6).as_list() == [math.factorial(n - 1) for n in range(1, 7)])
    lifted = buchberger(sp, make_ordering("custom:degree,perm,words", ["b"]), 4)
    c.add("an admissible order leads with lc(1,3,2)", lifted.leading_terms == [lc(["b", "b"], [1, 3, 2])])
    gb = buchberger(sp, preset("rgpl", ["b"]), 6)
    c.add("oracle agrees at n <= 4", hilbert_series(gb, 4).as_list() == operad_dims(presentation("lie"), 4))
    c.add("verdict NS-by-theorem", verdict(sp, 6).verdict == NS_BY_THEOREM)
    elapsed = time.perf_counter() - t0
    c.add(f"runtime {elapsed:.1f}s < 10s", elapsed < 10)
    conclude(capsys, 1, "Lie", c)


def test_criterion_2_prelie(capsys):
    c = Checks()
    t0 = time.perf_counter()
    sp = shuffle("prelie")
    a, b = STAR, OP
    displayed = {
        OperadPolynomial(3, {lc([a, a], [1, 2, 3]): 1, rc([a, a], [1, 2, 3]): -1, lc([a, a], [1, 3, 2]): -1,
                             rc([a, b], [1, 2, 3]): 1}),
        OperadPolynomial(3, {lc([a, b], [1, 2, 3]): 1, lc([b, a], [1, 3, 2]): -1, rc([b, a], [1, 2, 3]): -1,
                             lc([b, b], [1, 3, 2]): 1}),
        OperadPolynomial(3, {lc([a, b], [1, 3, 2]): 1, lc([b, a], [1, 2, 3]): -1, rc([b, b], [1, 2, 3]): -1,
                             lc([b, b], [1, 2, 3]): 1}),
    }
    c.add("three displayed relations", {r.primitive() for r in sp.relations} == {d.primitive() for d in displayed}
          or set(sp.relations) == displayed)
    g_r = buchberger(sp, preset("rgpl", [a, b]), 6)
    c.add("rgpl(a>b) leading terms", leads(g_r) == {rc([a, a], [1, 2, 3]), rc([b, a], [1, 2, 3]), rc([b, b], [1, 2, 3])})
    g_l = buchberger(sp, preset("permfirst-rev-gpl", [b, a]), 6)
    c.add("permfirst-rev-gpl(b>a) leading terms",
          leads(g_l) == {lc([a, a], [1, 2, 3]), lc([a, b], [1, 2, 3]), lc([b, b], [1, 2, 3])})
    perm = list(range(1, 7))
    for name, gb in (("rgpl", g_r), ("permfirst-rev-gpl", g_l)):
        c.add(f"{name}: Perm certificate through 6", quadratic_certificate(gb, perm, 6).passed)
        c.add(f"{name}: no elements adjoined", len(gb.elements) == 3)
    c.add("dims n^(n-1) through 5", hilbert_series(g_r, 5).as_list() == [n ** (n - 1) for n in range(1, 6)])
    c.add("oracle agrees at n <= 4", hilbert_series(g_r, 4).as_list() == operad_dims(presentation("prelie"), 4))
    c.add("verdict NS-by-theorem", verdict(sp, 5, dual_dims=perm).verdict == NS_BY_THEOREM)
    elapsed = time.perf_counter() - t0
    c.add(f"runtime {elapsed:.1f}s < 60s", elapsed < 60)
    conclude(capsys, 2, "pre-Lie", c)


def test_criterion_3_compatible_brackets(capsys):
    c = Checks()
    t0 = time.perf_counter()
    sp = shuffle("compatible-lie")
    g_r = buchberger(sp, preset("rgpl", ["b", "c"]), 5)
    g_l = buchberger(sp, preset("gpl", ["b", "c"]), 5)
    c.add("rgpl leading terms", leads(g_r) == {rc(["b", "b"], [1, 2, 3]), rc(["c", "c"], [1, 2, 3]), rc(["b", "c"], [1, 2, 3])})
    c.add("gpl leading terms", leads(g_l) == {lc(["b", "b"], [1, 2, 3]), lc(["c", "c"], [1, 2, 3]), lc(["b", "c"], [1, 2, 3])})
    c.add("dims n^(n-1) through 4", hilbert_series(g_r, 4).as_list() == [1, 2, 9, 64])
    c.add("oracle agrees at n <= 4", operad_dims(presentation("compatible-lie"), 4) == [1, 2, 9, 64])
    c.add("verdict NS-by-theorem", verdict(sp, 5).verdict == NS_BY_THEOREM)
    elapsed = time.perf_counter() - t0
    c.add(f"runtime {elapsed:.1f}s < 120s", elapsed < 120)
    conclude(capsys, 3, "two compatible Lie brackets", c)


def test_criterion_4_mock_lie(capsys):
    c = Checks()
    sp = shuffle("mock-lie")
    six = {lc(["m", "m", "m"], [1, *p]) for p in itertools.permutations([2, 3, 4])}
    adjoined, matched = False, False
    for name in PRESETS:
        gb = buchberger(sp, preset(name, ["m"]), 4)
        new = [g for g in gb.elements if g.arity == 4]
        adjoined |= bool(new)
        matched |= any(set(g.monomials()) == six for g in new)
    c.add("some preset adjoins an arity-4 element", adjoined)
    c.add("support is the six displayed left combs", matched)
    c.add("verdict is not NS-by-theorem", verdict(sp, 4).verdict != NS_BY_THEOREM)
    gb = buchberger(sp, preset("rgpl", ["m"]), 4)
    c.add("oracle agrees at n <= 4", hilbert_series(gb, 4).as_list() == operad_dims(presentation("mock-lie"), 4))
    conclude(capsys, 4, "mock-Lie", c)


def test_criterion_5_leibniz(capsys):
    c = Checks()
    p = presentation("leibniz")
    m = lambda x, y: ("*", x, y)  # noqa: E731
    consequence = RawIdentity.of([(1, m(m("a1", "a2"), "a3")), (1, m(m("a2", "a1"), "a3"))])
    c.add("oracle confirms the degree-3 consequence", is_consequence(p, consequence).member)
    m1 = check_m1(shuffle("leibniz"), 4)
    c.add("M1 fails", m1.status == FAILS)
    c.add("witness recorded", m1.witness is not None)
    c.add("verdict is not NS-by-theorem", verdict(shuffle("leibniz"), 4).verdict != NS_BY_THEOREM)
    conclude(capsys, 5, "Leibniz", c)


def test_criterion_6_right_nil(capsys):
    c = Checks()
    t0 = time.perf_counter()
    for n, name in ((3, "right-nil-3"), (4, "right-nil-4")):
        sp = shuffle(name)
        top = ["c"] * (n - 2) + ["o"]
        for order, lead in (("rgpl", rc(top, list(range(1, n + 1)))),
                            ("gpl", lc(top, list(range(1, n + 1))))):
            gb = buchberger(sp, preset(order, ["c", "o"]), 6)
            c.add(f"n={n} {order}: single relation", len(gb.elements) == 1)
            c.add(f"n={n} {order}: no self-overlaps", gb.certification == NO_OVERLAP)
            c.add(f"n={n} {order}: leading term", gb.leading_terms == [lead])
        c.add(f"n={n}: verdict NS-by-theorem", verdict(sp, 6).verdict == NS_BY_THEOREM)
    elapsed = time.perf_counter() - t0
    c.add(f"runtime {elapsed:.1f}s < 30s", elapsed < 30)
    conclude(capsys, 6, "right-nil family", c)


def test_criterion_7_degree_three_scan(capsys):
    c = Checks()
    for point in ((1, 0), (1, -1), (2, 1)):
        c.add(f"{point} NS-by-theorem", verdict(shuffle("degree3", point), 5).verdict == NS_BY_THEOREM)
    c.add("(1, 1) not NS-by-theorem", verdict(shuffle("degree3", (1, 1)), 5).verdict != NS_BY_THEOREM)
    conclude(capsys, 7, "degree-3 parameter scan", c)


def test_criterion_8_alia(capsys):
    c = Checks()
    for alpha in (0, 1, 2):
        sp = shuffle("alia", (alpha,))
        g_r = buchberger(sp, preset("rgpl", ["o", "c"]), 5)
        g_l = buchberger(sp, preset("gpl", ["o", "c"]), 5)
        c.add(f"alpha={alpha}: rgpl right comb", g_r.leading_terms == [parse_monomial("o(1,c(2,3))")])
        c.add(f"alpha={alpha}: gpl left comb", g_l.leading_terms == [parse_monomial("o(c(1,2),3)")])
        c.add(f"alpha={alpha}: verdict", verdict(sp, 5).verdict == NS_BY_THEOREM)
    sp = shuffle("alia", (-1,))
    jacobi = parse_polynomial("c(c(1,2),3) - c(1,c(2,3)) - c(c(1,3),2)")
    c.add("alpha=-1: Jacobi only", [r.primitive() for r in sp.relations] in ([jacobi], [-jacobi]))
    c.add("alpha=-1: verdict", verdict(sp, 5).verdict == NS_BY_THEOREM)
    conclude(capsys, 8, "alia family", c)


def test_criterion_9_lower_bound(capsys):
    c = Checks()
    c.add("k=1 gives (n-1)!", lower_bound_series({2: 1}, 6) == [1, 1, 2, 6, 24, 120])
    c.add("k=2 gives 2^(n-1)(n-1)!", lower_bound_series({2: 2}, 5) == [1, 2, 8, 48, 384])
    for case in regression_cases():
        sp = shuffle(*case)
        rep = verdict(sp, 5)
        if rep.verdict != NS_BY_THEOREM:
            continue
        gens: dict = {}
        for g in sp.signature.generators:
            gens[g.arity] = gens.get(g.arity, 0) + 1
        gb = rep.m1.chosen.gb
        dims = hilbert_series(gb, gb.arity_bound).as_list()
        bound = lower_bound_series(gens, len(dims))
        c.add(f"{case_id(case)} meets the bound", all(Fraction(d) >= b for d, b in zip(dims, bound)))
    conclude(capsys, 9, "lower bound series", c)


def test_criterion_10_properties(capsys):
    c = Checks()
    rng = random.Random(10)
    # orderings
    for case in ("lie", "prelie", "compatible-lie", "mock-lie"):
        sig = shuffle(case).signature
        for name in PRESETS:
            spec = preset(name, sig.names)
            c.add(f"{case}/{name} total", all(check_total(spec, sig, n) for n in range(2, 6)))
            c.add(f"{case}/{name} admissible", check_admissible(spec, sig, 5, samples=300, seed=rng.randrange(10**6)).passed)
    # reduction after completion
    for case in ("lie", "prelie", "mock-lie"):
        sp = shuffle(case)
        gb = buchberger(sp, preset("rgpl", sp.signature.names), 4)
        G = list(gb.elements)
        mons = enumerate_monomials(sp.signature, 4)
        ok_proj = ok_strat = True
        for _ in range(30):
            p = OperadPolynomial(4, {m: Fraction(rng.randint(-3, 3) or 1) for m in rng.sample(mons, min(5, len(mons)))})
            nf = reduce(p, G, gb.ordering)
            ok_proj &= reduce(nf, G, gb.ordering) == nf
            ok_strat &= reduce(p, G, gb.ordering, rng=random.Random(rng.random())) == nf
        c.add(f"{case}: reduce is a projection", ok_proj)
        c.add(f"{case}: reduce is strategy-independent", ok_strat)
    # divisors and overlaps against brute force
    sig = shuffle("lie").signature
    hosts = [m for n in range(2, 6) for m in enumerate_monomials(sig, n)]
    pats = [m for n in (2, 3) for m in enumerate_monomials(sig, n)]
    c.add("divisors match brute force", all(
        {o.vertex_set for o in divisors(h, p)} == brute_divisor_sets(h, p) for h in hosts for p in pats
    ))
    amb = [m for n in range(3, 6) for m in enumerate_monomials(sig, n)]
    trip = enumerate_monomials(sig, 3)
    c.add("overlaps match brute force", all(
        {(s.ambient, s.occ1.vertex_set, s.occ2.vertex_set) for s in overlaps(a, b, 5)} == brute_overlaps(a, b, amb)
        for a, b in itertools.product(trip, repeat=2)
    ))
    # oracle and Gröbner dimensions on every bundled presentation and preset
    for case in regression_cases():
        sp = shuffle(*case)
        truth = operad_dims(presentation(*case), 4)
        for name in PRESETS:
            gb = buchberger(sp, preset(name, sp.signature.names), 4)
            c.add(f"{case_id(case)}/{name} dims match oracle", hilbert_series(gb, 4).as_list() == truth)
    # reruns
    for name in BUNDLED:
        a = verdict(present_shuffle(presentation(name)), 4).to_json()
        b = verdict(present_shuffle(presentation(name)), 4).to_json()
        c.add(f"{name} rerun identical", a == b)
    conclude(capsys, 10, "property suites", c)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
