"""Two-component vector polynomials graded by height.

The height of ``(P1, P2)`` is ``max(2 deg P1, 2 deg P2 + 1)``. It plays the
role of a degree: the vectors ``e_{2k} = (z^k, 0)`` and ``e_{2k+1} = (0, z^k)``
have height ``k`` and form a basis, so a vector polynomial of height ``h`` is
the same thing as a coordinate vector of length ``h + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import ZERO, Polynomial, evaluate, mul, poly_from_json, poly_to_json

NEG_INF = -math.inf


@dataclass(frozen=True)
class VectorPolynomial:
    p1: Polynomial
    p2: Polynomial

    def __post_init__(self):
        if not isinstance(self.p1, Polynomial):
            object.__setattr__(self, "p1", Polynomial(self.p1))
        if not isinstance(self.p2, Polynomial):
            object.__setattr__(self, "p2", Polynomial(self.p2))

    @property
    def is_zero(self) -> bool:
        return self.p1.is_zero and self.p2.is_zero

    @property
    def height(self) -> int | float:
        return max(2 * self.p1.degree, 2 * self.p2.degree + 1)

    def leading(self) -> complex:
        """Coefficient of the basis vector that fixes the height."""
        h = self.height
        if h == NEG_INF:
            return 0j
        return self.p1.coeff(h // 2) if h % 2 == 0 else self.p2.coeff(h // 2)

    def normalized(self) -> "VectorPolynomial":
        """Scaled so the height-determining coefficient is 1."""
        c = self.leading()
        if c == 0:
            raise ZeroDivisionError("cannot normalise the zero vector")
        return self.scale(1 / c)

    def scale(self, c: complex) -> "VectorPolynomial":
        return VectorPolynomial(self.p1 * c, self.p2 * c)

    def __call__(self, z):
        return evaluate(self.p1, z), evaluate(self.p2, z)

    def __add__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        return VectorPolynomial(self.p1 + other.p1, self.p2 + other.p2)

    def __sub__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        return VectorPolynomial(self.p1 - other.p1, self.p2 - other.p2)

    def __neg__(self):
        return VectorPolynomial(-self.p1, -self.p2)

    def norm(self) -> float:
        return max(self.p1.norm(), self.p2.norm())

    def allclose(self, other: "VectorPolynomial", atol: float = 1e-10) -> bool:
        return self.p1.allclose(other.p1, atol) and self.p2.allclose(other.p2, atol)

    def to_json(self) -> dict:
        return {"p1": poly_to_json(self.p1), "p2": poly_to_json(self.p2)}

    @classmethod
    def from_json(cls, data: dict) -> "VectorPolynomial":
        return cls(poly_from_json(data["p1"]), poly_from_json(data["p2"]))


def height(p: VectorPolynomial) -> int | float:
    """``max(2 deg P1, 2 deg P2 + 1)``; ``-inf`` for the zero vector."""
    return p.height


def basis_e(k: int) -> VectorPolynomial:
    if k < 0:
        raise ValueError("basis index must be non-negative")
    mono = Polynomial.monomial(k // 2)
    return VectorPolynomial(mono, ZERO) if k % 2 == 0 else VectorPolynomial(ZERO, mono)


def expand_in_basis(p: VectorPolynomial, length: int | None = None) -> np.ndarray:
    """Coordinates ``c_0..c_h`` with ``p = sum c_k e_k``.

    ``length`` pads the result (it must be at least ``height + 1``).
    """
    h = p.height
    size = 0 if h == NEG_INF else int(h) + 1
    if length is None:
        length = size
    elif length < size:
        raise ValueError(f"height {h} needs at least {size} coordinates")
    out = np.zeros(length, dtype=complex)
    a, b = p.p1.coeffs, p.p2.coeffs
    out[0 : 2 * a.size : 2] = a
    out[1 : 2 * b.size + 1 : 2] = b
    return out


def from_coords(c) -> VectorPolynomial:
    c = np.asarray(c, dtype=complex)
    return VectorPolynomial(Polynomial(c[0::2]), Polynomial(c[1::2]))


def scalar_poly_mul(S: Polynomial, p: VectorPolynomial) -> VectorPolynomial:
    return VectorPolynomial(mul(S, p.p1), mul(S, p.p2))


def transform(A, p: VectorPolynomial) -> VectorPolynomial:
    """Apply a constant 2x2 matrix to the pair ``(P1, P2)``."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (2, 2):
        raise ValueError("transform needs a 2x2 matrix")
    (a, b), (c, d) = A
    return VectorPolynomial(p.p1 * a + p.p2 * b, p.p1 * c + p.p2 * d)


def reduce_height_pair(p: VectorPolynomial, q: VectorPolynomial) -> tuple[complex, VectorPolynomial]:
    """Return ``c`` and ``p + c q`` whose height is below the common height."""
    if p.height != q.height or p.height == NEG_INF:
        raise ValueError(f"heights differ or vanish: {p.height} vs {q.height}")
    n = int(p.height)
    c = -p.leading() / q.leading()
    # subtract in coordinates so the cancelled slot is exactly zero
    coords = expand_in_basis(p, n + 1) + c * expand_in_basis(q, n + 1)
    coords[n] = 0
    return c, from_coords(coords)
