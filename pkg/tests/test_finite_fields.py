import pytest
from hypothesis import given, strategies as st

from oracles import naive_field, sympy_irreducible
from partialzeta.errors import SizeError, ValidationError
from partialzeta.finite_fields import (GF, TowerSpec, build_tower, defining_polynomial,
                                       factorize, galois_field, is_prime, monic_irreducibles)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)]


def test_primality_and_factorization():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducible_count_matches_necklace_formula(p, k):
    # number of monic irreducibles of degree k: (1/k) sum_{j | k} mu(j) p^{k/j}
    from sympy import mobius
    expected = sum(mobius(j) * p ** (k // j) for j in range(1, k + 1) if k % j == 0) // k
    assert len(monic_irreducibles(p, k)) == expected


@pytest.mark.parametrize("p,k", SMALL_FIELDS + [(2, 8), (3, 5), (11, 2)])
def test_defining_polynomial_is_irreducible(p, k):
    f = defining_polynomial(p, k)
    assert len(f) == k + 1 and f[-1] == 1
    if k > 1:
        assert sympy_irreducible(f, p)


def test_f9_presentation():
    F = galois_field(3, 2)
    assert F.modulus == (1, 0, 1)
    assert F.generator == 4
    T = build_tower(TowerSpec(3, 1, (1, 2)))
    assert T.indices == (4, 1)


def test_f2_generator():
    assert galois_field(2, 1).generator == 1


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_generator_has_full_order(p, k):
    F = galois_field(p, k)
    seen = {F.exp(i) for i in range(F.group_order)}
    assert len(seen) == F.group_order and 0 not in seen


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_table_arithmetic_matches_naive_polynomials(p, k):
    F, N = galois_field(p, k), naive_field(p, k)
    for x in range(F.order):
        for y in range(0, F.order, max(1, F.order // 7)):
            nx, ny = N.from_code(x), N.from_code(y)
            assert F.mul(x, y) == N.to_code(N.mul(nx, ny))
            assert F.add(x, y) == N.to_code(N.add(nx, ny))
        assert F.trace(x) == N.trace(N.from_code(x))


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pk, data):
    F = galois_field(*pk)
    el = st.integers(0, F.order - 1)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(x, F.neg(x)) == 0
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    if x:
        assert F.mul(x, F.inv(x)) == 1
    assert F.sub(F.add(x, y), y) == x
    # Frobenius is additive and trace is F_p-linear
    assert F.frobenius(F.add(x, y)) == F.add(F.frobenius(x), F.frobenius(y))
    assert F.trace(F.add(x, y)) == (F.trace(x) + F.trace(y)) % F.p
    assert F.pow(x, F.order) == x


@given(st.sampled_from([(3, 1, (1, 2)), (2, 1, (2, 3)), (2, 2, (1, 2)), (5, 1, (2, 1))]),
       st.integers(1, 2), st.data())
def test_tower_subfields_and_embedding(params, m, data):
    p, a, d = params
    spec = TowerSpec(p, a, d, m)
    T = build_tower(spec)
    for i in range(spec.n):
        els = list(T.subfield_elements(i))
        assert len(els) == len(set(els)) == spec.q_i(i) ** m
        k = a * d[i] * m
        assert all(T.is_in_subfield(x, k) for x in els)
    base = T.base
    x = data.draw(st.integers(0, base.order - 1))
    y = data.draw(st.integers(0, base.order - 1))
    # embedding is a field homomorphism
    assert T.embed(base.mul(x, y)) == T.field.mul(T.embed(x), T.embed(y))
    assert T.embed(base.add(x, y)) == T.field.add(T.embed(x), T.embed(y))


def test_trace_to_base_lands_in_subfield():
    T = build_tower(TowerSpec(2, 1, (2, 3)))
    F = T.field
    for x in range(F.order):
        t = T.trace_to_base(x, 6, 2)
        assert T.is_in_subfield(t, 2)


def test_caps_and_validation():
    with pytest.raises(SizeError):
        build_tower(TowerSpec(2, 1, (23,)))
    with pytest.raises(SizeError):
        build_tower(TowerSpec(3, 1, (2, 3)), enum_cap=100)
    with pytest.raises(ValidationError):
        TowerSpec(4, 1, (1,))
    with pytest.raises(ValidationError):
        TowerSpec(2, 1, ())
    with pytest.raises(ValidationError):
        GF(6, 1)
    with pytest.raises(ValidationError):
        galois_field(3, 2).log(0)


def test_large_field_builds():
    F = galois_field(2, 16)
    assert F.mul(F.generator, F.inv(F.generator)) == 1
