import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmvmisp.poly import ONE, ZERO, Z, Polynomial
from cmvmisp.vecpoly import (
    NEG_INF,
    VectorPolynomial,
    basis_e,
    expand_in_basis,
    from_coords,
    height,
    reduce_height_pair,
    scalar_poly_mul,
    transform,
)

small = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


@st.composite
def vecpolys(draw, max_height=10):
    h = draw(st.integers(0, max_height))
    coords = draw(st.lists(small, min_size=h + 1, max_size=h + 1))
    coords[-1] = coords[-1] if abs(coords[-1]) > 0.1 else 1.0
    return from_coords(coords)


def VP(a, b):
    return VectorPolynomial(Polynomial(a) if not isinstance(a, Polynomial) else a, Polynomial(b) if not isinstance(b, Polynomial) else b)


def test_height_examples():
    assert height(VP([1], [])) == 0
    assert height(VP([], [1])) == 1
    assert height(VectorPolynomial(Z * Z + 1, Z)) == 4
    assert height(VP([], [])) == NEG_INF
    assert NEG_INF < 0


def test_basis():
    assert basis_e(0) == VectorPolynomial(ONE, ZERO)
    assert basis_e(3) == VectorPolynomial(ZERO, Z)
    assert basis_e(6) == VectorPolynomial(Polynomial.monomial(3), ZERO)
    assert all(basis_e(k).height == k for k in range(41))
    with pytest.raises(ValueError):
        basis_e(-1)


def test_expand_examples():
    assert np.array_equal(expand_in_basis(VectorPolynomial(Z, Polynomial([2]))), [0, 2, 1])
    for k in range(9):
        c = expand_in_basis(basis_e(k))
        assert np.array_equal(c, np.eye(k + 1)[k])
    assert expand_in_basis(VP([], [])).size == 0
    with pytest.raises(ValueError):
        expand_in_basis(basis_e(5), 3)


@given(vecpolys())
def test_expand_round_trip(p):
    c = expand_in_basis(p)
    assert from_coords(c) == p
    rebuilt = VP([], [])
    for k, ck in enumerate(c):
        rebuilt = rebuilt + basis_e(k).scale(ck)
    assert rebuilt.allclose(p, 1e-12)


def test_module_action_examples():
    p = scalar_poly_mul(Z * Z, VP([], [1]))
    assert p == VectorPolynomial(ZERO, Z * Z) and p.height == 5
    q = VP([0, 1], [1])
    assert scalar_poly_mul(ONE, q) == q
    r = scalar_poly_mul(Z - 1, q)
    assert r.height == 4 and r.p1 == (Z - 1) * Z


@given(st.lists(small, min_size=1, max_size=6), vecpolys())
def test_module_height_law(s, p):
    S = Polynomial(s)
    if S.is_zero:
        return
    assert scalar_poly_mul(S, p).height == p.height + 2 * S.degree


@given(vecpolys(), vecpolys(), small, small)
def test_height_of_combinations(p, q, a, b):
    # scalars far below the trim tolerance legitimately erase a component
    if min(abs(a), abs(b)) < 1e-3:
        return
    combo = p.scale(a) + q.scale(b)
    if p.height != q.height:
        assert combo.height == max(p.height, q.height)
    else:
        assert combo.height <= p.height


@given(vecpolys(), small)
def test_bracket_implications(p, a):
    h = p.height
    k = math.ceil((h - 1) / 2)
    if h <= 2 * k + 1:
        assert VectorPolynomial((Z - a) * p.p1, p.p2).height <= 2 * k + 2
    k = math.ceil(h / 2)
    assert VectorPolynomial(p.p1, (Z - a) * p.p2).height <= 2 * k + 1


def test_transform_examples():
    p = VP([0, 1], [2])
    assert transform(np.eye(2), p) == p
    t = transform([[1, 1], [0, 1]], VectorPolynomial(ZERO, Z))
    assert t == VectorPolynomial(Z, Z) and t.height == 3
    t = transform([[0, 1], [1, 0]], VectorPolynomial(Z * Z, ZERO))
    assert t == VectorPolynomial(ZERO, Z * Z) and t.height == 5
    with pytest.raises(ValueError):
        transform(np.eye(3), p)


def test_reduce_examples():
    c, r = reduce_height_pair(VectorPolynomial(Z, ZERO), VectorPolynomial(2 * Z, ZERO))
    assert c == -0.5 and r.height <= 1
    c, r = reduce_height_pair(VP([], [1]), VP([], [1]))
    assert c == -1 and r.is_zero
    with pytest.raises(ValueError):
        reduce_height_pair(basis_e(2), basis_e(3))


@given(st.integers(0, 12), st.data())
def test_reduce_drops_height(h, data):
    p = from_coords(data.draw(st.lists(small, min_size=h, max_size=h)) + [1 + 1j])
    q = from_coords(data.draw(st.lists(small, min_size=h, max_size=h)) + [-2.0])
    c, r = reduce_height_pair(p, q)
    assert r.height < h
    assert r.allclose(p + q.scale(c), 1e-10 * max(1, p.norm(), q.norm() * abs(c)))


def test_normalized_and_json():
    p = VP([0, 0, 3], [1])
    n = p.normalized()
    assert n.leading() == 1 and n.height == 4
    assert VectorPolynomial.from_json(p.to_json()) == p
    with pytest.raises(ZeroDivisionError):
        VP([], []).normalized()


def test_any_graded_sequence_is_a_basis():
    """Coordinates of g_0..g_N with h(g_k) = k form an invertible triangular matrix."""
    rng = np.random.default_rng(2)
    N = 9
    G = np.zeros((N + 1, N + 1), dtype=complex)
    for k in range(N + 1):
        c = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
        G[: k + 1, k] = expand_in_basis(from_coords(c), k + 1)
    assert np.allclose(np.tril(G, -1), 0)
    target = rng.normal(size=N + 1)
    assert np.allclose(G @ np.linalg.solve(G, target), target)
