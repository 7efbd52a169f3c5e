import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_digit_sum, teichmuller_mod_pk
from partialzeta.cyclotomic import CycloNumber
from partialzeta.errors import PrecisionError, ValidationError
from partialzeta.finite_fields import TowerSpec, galois_field
from partialzeta.padic_estimates import (INF, PadicRing, cyclo_valuation, digit_sum,
                                         gauss_coefficient, newton_polygon, newton_slopes,
                                         omega_bound, p_weight, pi_adic_valuation,
                                         teichmuller_lift, verify_divisibility,
                                         zeta_slope_bound)
from partialzeta.point_counting import MultiPoly, PolySystem


def test_digit_sums():
    assert digit_sum(5, 2) == 2
    assert digit_sum(8, 3) == 4
    assert digit_sum(0, 7) == 0


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_digit_sum_properties(a, b, p):
    assert digit_sum(a, p) == brute_digit_sum(a, p)
    assert digit_sum(a + b, p) <= digit_sum(a, p) + digit_sum(b, p)
    assert digit_sum(a * b, p) <= digit_sum(a, p) * digit_sum(b, p)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(1, 50))
def test_digit_sum_of_multiples(p, f, k):
    assert digit_sum(k * (p**f - 1), p) >= f * (p - 1)


def test_p_weight():
    assert p_weight(MultiPoly(1, (((2,), 1),)), 5) == 2
    assert p_weight(MultiPoly(1, (((2,), 1),)), 2) == 1
    assert p_weight(MultiPoly(2, (((1, 2), 1),)), 3) == 3
    assert p_weight(MultiPoly(2, (((0, 0), 1),)), 3) == 0
    with pytest.raises(ValidationError):
        p_weight(MultiPoly(2, ()), 3)


def lin(n=2):
    return MultiPoly(n, (((1, 0), 1), ((0, 1), 1)))


@pytest.mark.parametrize("a", [1, 2, 3])
def test_omega_examples(a):
    assert omega_bound(PolySystem(TowerSpec(2, a, (1, 1)), (lin(),))) == a
    assert omega_bound(PolySystem(TowerSpec(3, a, (1, 2)), (lin(),))) == a


def test_omega_clamped_and_rejected():
    f = MultiPoly(1, (((3,), 1),))
    s = PolySystem(TowerSpec(2, 1, (1,)), (f, f))
    assert zeta_slope_bound(s) < 0 and omega_bound(s) == 0
    with pytest.raises(ValidationError):
        omega_bound(PolySystem(TowerSpec(2, 1, (1,)), (MultiPoly(1, (((0,), 1),)),)))


def test_verify_divisibility_examples():
    rep = verify_divisibility(PolySystem(TowerSpec(2, 2, (1, 1)), (lin(),)))
    assert rep.to_json() == {"bound": 2, "value": 2, "pass": True, "vacuous": False,
                             "omega": 2, "N1": 4}
    empty = verify_divisibility(PolySystem(TowerSpec(3, 1, (1,)), (MultiPoly(1, (((0,), 1),)),)))
    assert empty.passed and empty.extra["N1"] == 0


def test_pi_adic_examples():
    for p in (2, 3, 5, 7):
        assert pi_adic_valuation(CycloNumber(p, [p])) == 1
        assert pi_adic_valuation(CycloNumber(p, [1, -1])) == (Fraction(1, p - 1) if p > 2 else 1)
    g = CycloNumber(5, [0])
    for x in range(5):
        g = g + CycloNumber.zeta_power(5, x * x)
    assert pi_adic_valuation(g) == Fraction(1, 2)
    assert pi_adic_valuation(CycloNumber(5, [0])) == INF
    assert cyclo_valuation(CycloNumber(3, [Fraction(1, 3)]), 3) == -1


@given(st.sampled_from([3, 5, 7]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(-200, 200), min_size=p - 1, max_size=p - 1))))
def test_two_valuation_routes_agree(data):
    p, coords = data
    z = CycloNumber(p, coords)
    ring = PadicRing(galois_field(p, 1), 12)
    elt = ring.from_cyclo(z)
    exact = pi_adic_valuation(z)
    if exact == INF:
        assert elt.is_zero()
    else:
        assert elt.valuation() == exact


@given(st.sampled_from([3, 5, 7]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1),
                        st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1))))
def test_padic_multiplication_matches_exact(data):
    p, a, b = data
    x, y = CycloNumber(p, a), CycloNumber(p, b)
    ring = PadicRing(galois_field(p, 1), 8)
    assert (ring.from_cyclo(x) * ring.from_cyclo(y)).coeffs == ring.from_cyclo(x * y).coeffs


def test_precision_error_when_undetermined():
    ring = PadicRing(galois_field(3, 1), 2)
    with pytest.raises(PrecisionError):
        ring.from_int(9).valuation()
    with pytest.raises(PrecisionError):
        ring.element().valuation()


@pytest.mark.parametrize("p,D", [(3, 1), (5, 1), (2, 2), (3, 2), (2, 3)])
def test_teichmuller_lift(p, D):
    F = galois_field(p, D)
    K = 6
    ring = PadicRing(F, K)
    assert teichmuller_lift(F, 0, K) == ring.w_zero()
    assert teichmuller_lift(F, 1, K) == ring.w_one()
    rng = random.Random(p * 10 + D)
    for x in rng.sample(range(1, F.order), min(8, F.order - 1)):
        t = teichmuller_lift(F, x, K)
        assert ring.w_pow(t, F.order) == t
        assert tuple(c % p for c in t) == tuple(F.digits(x))
        if D == 1:
            assert t[0] == teichmuller_mod_pk(x, p, K)


@pytest.mark.parametrize("p,a", [(3, 1), (5, 1), (2, 2), (7, 1), (2, 3), (3, 2)])
def test_stickelberger(p, a):
    F = galois_field(p, a)
    for m in range(F.order):
        res = gauss_coefficient(m, F, a)
        assert res.ord_q == Fraction(digit_sum(m, p), a * (p - 1))


def test_gauss_examples():
    assert gauss_coefficient(0, galois_field(3, 1), 1).ord_q == 0
    assert gauss_coefficient(1, galois_field(3, 1), 1).ord_q == Fraction(1, 2)
    F5 = galois_field(5, 1)
    assert [gauss_coefficient(m, F5, 1).ord_q for m in range(5)] == [Fraction(m, 4) for m in range(5)]
    # precision escalation from a deliberately low start
    assert gauss_coefficient(4, F5, 1, K=1).ord_q == 1
    with pytest.raises(ValidationError):
        gauss_coefficient(5, F5, 1)


def test_gauss_sum_for_prime_field_matches_exact_jacobi_route():
    # for q = p, g_{(p-1)/2} is the quadratic Gauss sum; its exact value is known
    p = 5
    F = galois_field(p, 1)
    res = gauss_coefficient(2, F, 1)
    quad = CycloNumber(p, [0])
    for x in range(p):
        quad = quad + CycloNumber.zeta_power(p, x * x)
    assert res.ord_q == pi_adic_valuation(quad)


def test_newton_polygon_examples():
    assert newton_slopes([1, -3], 3) == [(1, 1)]
    assert newton_slopes([1, -10, 9], 3) == [(0, 1), (2, 1)]
    assert newton_slopes([1, -6, 9], 3) == [(1, 2)]
    assert newton_slopes([1, -4, 4], 2, a=2) == [(Fraction(1, 2), 2)]
    with pytest.raises(ValidationError):
        newton_polygon([INF, 1])


@given(st.lists(st.integers(-4, 6), min_size=1, max_size=6), st.sampled_from([2, 3, 5]))
def test_newton_slopes_of_products(exps, p):
    # prod (1 - p^e T) has slopes exactly the e's (when e >= 0)
    exps = [abs(e) for e in exps]
    poly = [Fraction(1)]
    for e in exps:
        poly = [a - Fraction(p**e) * b for a, b in zip(poly + [0], [0] + poly)]
    slopes = newton_slopes(poly, p)
    flat = sorted(s for s, m in slopes for _ in range(m))
    assert flat == sorted(exps)
