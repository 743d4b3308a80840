import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmvmisp.poly import (
    ONE,
    ZERO,
    Z,
    NotDivisibleError,
    Polynomial,
    RationalFunction,
    RootFindingError,
    divide,
    divide_exact,
    evaluate,
    poly_from_json,
    poly_to_json,
    roots,
    star,
)

complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
coeff_lists = st.lists(complexes, min_size=1, max_size=8)


def test_canonical_trim_and_degree():
    p = Polynomial([1, 2, 1e-14])
    assert p.degree == 1
    assert Polynomial([0, 0]).is_zero
    assert ZERO.degree == -math.inf
    assert Polynomial([3]).degree == 0


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        Polynomial([1, np.nan])


def test_add_examples():
    assert (Polynomial([1, 1]) + Polynomial([0, -1])) == ONE
    p = Polynomial([1, 2, 3])
    assert p + ZERO == p
    x = y = 0.5
    got = (Z * Z + y) + x * (1 + Z * Z * y)
    assert got.allclose(Polynomial([1.0, 0, 1.25]), 1e-15)


def test_mul_examples():
    assert (Z - 1) * (Z + 1) == Polynomial([-1, 0, 1])
    assert ((Z * Z - 1) * (Z * Z + 1)).allclose(Polynomial([-1, 0, 0, 0, 1]))
    assert (ZERO * Polynomial([1, 2])).is_zero


def test_evaluate_examples():
    b = 0.5
    phi = (Z * Z - 1) * (Z * Z + b * Z + 1)
    assert evaluate(Z * Z - 1, 1) == 0
    assert abs(phi(-b / 2 + 1j * math.sqrt(1 - b * b / 4))) < 1e-12


def test_evaluate_matches_power_sum():
    rng = np.random.default_rng(3)
    c = rng.normal(size=7) + 1j * rng.normal(size=7)
    z = rng.normal() + 1j * rng.normal()
    naive = sum(ck * z**k for k, ck in enumerate(c))
    assert abs(evaluate(Polynomial(c), z) - naive) <= 1e-12 * max(1, abs(naive))
    zs = np.array([z, 2 * z])
    assert np.allclose(evaluate(Polynomial(c), zs), [naive, sum(ck * (2 * z) ** k for k, ck in enumerate(c))])


def test_star_examples():
    a = 0.3 - 0.2j
    assert star(Z - a, 1).allclose(Polynomial([1, -np.conj(a)]), 1e-15)
    b = 0.7
    assert star(Z**3 - b, 3).allclose(Polynomial([1, 0, 0, -b]), 1e-15)
    assert star(ONE, 0) == ONE
    # nominal degree above the actual one shifts the reversal
    assert star(ONE, 2) == Polynomial([0, 0, 1])
    with pytest.raises(ValueError):
        star(Z * Z, 1)


@given(coeff_lists, st.integers(0, 3))
def test_star_is_involution(c, extra):
    p = Polynomial(c)
    k = max(0, int(p.degree)) + extra if not p.is_zero else extra
    # exact up to the canonical trim of negligible coefficients
    assert star(star(p, k), k).allclose(p, 1e-11 * max(p.norm(), 1e-300))


@given(st.lists(complexes, min_size=1, max_size=6))
def test_star_of_monic_has_unit_constant(c):
    p = Polynomial(list(c) + [1])
    assert star(p, int(p.degree)).coeff(0) == 1


def test_divide_examples():
    q, rel = divide_exact(Z * Z - 1, Z - 1)
    assert q.allclose(Z + 1) and rel < 1e-15
    q, _ = divide_exact(Polynomial([-1, 0, 0, 0, 1]), Polynomial([1, 0, 1]))
    assert q.allclose(Polynomial([-1, 0, 1]))
    q, _ = divide_exact(Polynomial([-1, 1e-14, 1]), Z - 1, tol=1e-10)
    assert q.allclose(Z + 1, 1e-12)
    with pytest.raises(NotDivisibleError):
        divide_exact(Z * Z + 1, Z - 1)
    with pytest.raises(ZeroDivisionError):
        divide(Z, ZERO)


@given(coeff_lists, coeff_lists)
def test_long_division_identity(a, b):
    p, d = Polynomial(a), Polynomial(b)
    if d.is_zero or d.norm() < 1e-3 or abs(d.lead) < 1e-3 * d.norm():
        return
    q, r = divide(p, d)
    assert r.is_zero or r.degree < d.degree
    assert (q * d + r).allclose(p, 1e-8 * max(1.0, p.norm(), (q * d).norm()))


def test_roots_examples():
    got = roots(Polynomial([-1, 0, 0, 0, 1]))
    want = np.array([1, 1j, -1, -1j])
    assert np.max(np.min(np.abs(got[:, None] - want[None, :]), axis=1)) < 1e-12
    b = 0.5
    got = roots((Z * Z - 1) * (Z * Z + b * Z + 1))
    want = np.array([1, -1, -0.25 + 0.9682458365518543j, -0.25 - 0.9682458365518543j])
    assert np.max(np.min(np.abs(got[:, None] - want[None, :]), axis=1)) < 1e-12
    with pytest.raises(RootFindingError):
        roots(ONE)


def test_roots_against_numpy_oracle():
    rng = np.random.default_rng(11)
    for _ in range(50):
        deg = int(rng.integers(2, 13))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        p = Polynomial(c)
        got = roots(p)
        ref = np.roots(c[::-1])
        assert np.max(np.min(np.abs(got[:, None] - ref[None, :]), axis=1)) < 1e-7
        assert np.max(np.abs(evaluate(p, got))) <= 1e-9 * p.norm() * max(1, np.max(np.abs(got)) ** deg)


@settings(max_examples=60)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=2, max_size=5))
def test_roots_recover_construction(rs):
    rs = np.array(rs)
    d = np.abs(rs[:, None] - rs[None, :]) + np.eye(len(rs))
    if d.min() < 0.1:
        return
    got = roots(Polynomial.from_roots(rs))
    assert np.max(np.min(np.abs(got[:, None] - rs[None, :]), axis=1)) < 1e-9
    rebuilt = Polynomial.from_roots(got)
    assert rebuilt.allclose(Polynomial.from_roots(rs), 1e-8 * max(1, Polynomial.from_roots(rs).norm()))


def test_rational_function():
    f = RationalFunction(Z * Z - 1, Z)
    assert abs(f(2) - 1.5) < 1e-15
    assert f.reciprocal().numerator == Z
    with pytest.raises(ZeroDivisionError):
        RationalFunction(Z, ZERO)


def test_json_round_trip():
    p = Polynomial([1 + 2j, -0.5, 3j])
    assert poly_from_json(poly_to_json(p)) == p
    assert poly_to_json(ZERO) == []


def test_monic_and_immutability():
    p = Polynomial([2, 4])
    assert p.monic() == Polynomial([0.5, 1])
    with pytest.raises(ValueError):
        p.coeffs[0] = 5
