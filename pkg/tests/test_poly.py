from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shuffleops.errors import ZeroPolynomial
from shuffleops.groebner import buchberger, spolynomial
from shuffleops.ordering import make_ordering, preset
from shuffleops.poly import (
    OperadPolynomial,
    insert,
    interreduce,
    leading_term,
    monic,
    parse_polynomial,
    reduce,
)
from shuffleops.shuffle_tree import divides, enumerate_monomials, left_comb, overlaps, right_comb

from support import shuffle

STAR, OP = "*", "*^op"


def poly_strategy(monomials, max_terms=5):
    return st.dictionaries(
        st.sampled_from(monomials),
        st.fractions(min_value=-5, max_value=5, max_denominator=3).filter(bool),
        min_size=1,
        max_size=max_terms,
    ).map(lambda d: OperadPolynomial(4, d))


LIE = shuffle("lie")
PRELIE = shuffle("prelie")
J = LIE.relations[0]
LIE4 = enumerate_monomials(LIE.signature, 4)
PRELIE4 = enumerate_monomials(PRELIE.signature, 4)
LIE_GB = buchberger(LIE, preset("rgpl", ["b"]), 5)
PRELIE_GB = buchberger(PRELIE, preset("rgpl", [STAR, OP]), 5)


def test_leading_term_of_a_monomial():
    m = ("b", ("b", 1, 2), 3)
    assert leading_term(OperadPolynomial.monomial(m, Fraction(3, 2)), preset("gpl", ["b"])) == (m, Fraction(3, 2))


def test_jacobi_leading_coefficient():
    assert J == parse_polynomial("b(b(1,2),3) - b(1,b(2,3)) - b(b(1,3),2)")
    assert leading_term(J, preset("rgpl", ["b"])) == (right_comb(["b", "b"], [1, 2, 3]), -1)


def test_prelie_relation_with_mixed_right_comb_lead():
    spec = preset("rgpl", [STAR, OP])
    leads = [leading_term(r, spec)[0] for r in PRELIE.relations]
    assert right_comb([OP, STAR], [1, 2, 3]) in leads


def test_zero_has_no_leading_term():
    with pytest.raises(ZeroPolynomial):
        leading_term(OperadPolynomial(3, {}), preset("gpl", ["b"]))


def test_reducing_an_element_by_itself():
    for r in PRELIE.relations:
        assert reduce(r, [r], preset("gpl", [STAR, OP])).is_zero()


@pytest.mark.parametrize("order", ["rgpl", "gpl", "custom:degree,perm,words"])
def test_jacobi_self_overlaps_reduce_to_zero(order):
    spec = make_ordering(order, ["b"])
    m = leading_term(J, spec)[0]
    sites = overlaps(m, m, 4)
    assert sites
    for site in sites:
        s = spolynomial(site, J, J, spec)
        assert s.coefficient(site.ambient) == 0
        assert reduce(s, [J], spec).is_zero()


def test_interreduce_collapses_multiples():
    spec = preset("rgpl", ["b"])
    assert interreduce([J, J.scale(2)], spec) == [monic(J, spec)]


def test_prelie_relations_are_already_interreduced():
    spec = preset("rgpl", [STAR, OP])
    got = interreduce(list(PRELIE.relations), spec)
    assert set(got) == {monic(r, spec) for r in PRELIE.relations}


def test_text_round_trip():
    p = parse_polynomial("3/2 *(*(1,2),3) - *^op(1,*(2,3)) + 2 *(1,*^op(2,3))")
    assert parse_polynomial(p.to_str()) == p
    assert p.coefficient(("*", ("*", 1, 2), 3)) == Fraction(3, 2)
    assert (p - p).is_zero()
    assert p + p == p.scale(2)


def _check_witness(p, G, spec):
    trace = []
    nf = reduce(p, G, spec, trace=trace)
    acc = OperadPolynomial(p.arity, {})
    for step in trace:
        acc = acc + insert(G[step.g_index], step.occurrence).scale(step.coefficient)
    assert p - nf == acc
    return nf


@settings(max_examples=60, deadline=None)
@given(poly_strategy(LIE4))
def test_reduction_is_a_witnessed_projection(p):
    spec = LIE_GB.ordering
    G = list(LIE_GB.elements)
    nf = _check_witness(p, G, spec)
    assert reduce(nf, G, spec) == nf
    leads = LIE_GB.leading_terms
    assert not any(divides(lt, m) for m in nf.monomials() for lt in leads)


@settings(max_examples=40, deadline=None)
@given(poly_strategy(PRELIE4), st.integers(0, 10_000))
def test_strategy_independent_after_completion(p, seed):
    spec = PRELIE_GB.ordering
    G = list(PRELIE_GB.elements)
    base = reduce(p, G, spec)
    assert reduce(p, G, spec, rng=random.Random(seed)) == base
    assert reduce(p, list(reversed(G)), spec) == base


def test_strategy_independence_at_arity_five():
    spec = LIE_GB.ordering
    G = list(LIE_GB.elements)
    mons = enumerate_monomials(LIE.signature, 5)
    rng = random.Random(5)
    for _ in range(40):
        p = OperadPolynomial(5, {m: Fraction(rng.randint(-3, 3) or 1) for m in rng.sample(mons, 6)})
        base = reduce(p, G, spec)
        for seed in range(3):
            assert reduce(p, G, spec, rng=random.Random(seed)) == base


def test_lie_left_combs_are_normal_for_rgpl():
    spec = preset("rgpl", ["b"])
    m = left_comb(["b", "b", "b"], [1, 2, 3, 4])
    assert reduce(OperadPolynomial.monomial(m), [J], spec) == OperadPolynomial.monomial(m)
