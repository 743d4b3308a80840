"""Complex polynomials with ascending coefficients.

Every polynomial is kept in canonical form: trailing coefficients that are
negligible relative to the largest one are trimmed, so ``degree`` is what the
height and constraint logic downstream can rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TRIM_RTOL = 1e-11
TRIM_ATOL = 1e-300


class NotDivisibleError(ArithmeticError):
    """Raised by :func:`divide_exact` when the remainder is too large."""

    def __init__(self, residual: float):
        super().__init__(f"not divisible: remainder norm {residual:.3e}")
        self.residual = residual


class RootFindingError(ArithmeticError):
    pass


def _canonical(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex).ravel()
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    cut = max(TRIM_RTOL * scale, TRIM_ATOL)
    k = c.size
    while k > 0 and abs(c[k - 1]) <= cut:
        k -= 1
    return c[:k].copy()


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Immutable polynomial ``sum(coeffs[k] * z**k)``; empty coeffs is zero."""

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = ()):
        c = _canonical(np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @property
    def degree(self) -> int | float:
        """Degree, or ``-inf`` for the zero polynomial."""
        return self.coeffs.size - 1 if self.coeffs.size else -math.inf

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1]) if self.coeffs.size else 0j

    def coeff(self, k: int) -> complex:
        return complex(self.coeffs[k]) if 0 <= k < self.coeffs.size else 0j

    def padded(self, length: int) -> np.ndarray:
        """Coefficients zero-padded (or checked) to ``length`` entries."""
        if self.coeffs.size > length:
            raise ValueError(f"degree {self.degree} does not fit in {length} coefficients")
        out = np.zeros(length, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return Polynomial(self.coeffs / self.coeffs[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        return add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return add(self, -_as_poly(other))

    def __rsub__(self, other):
        return add(_as_poly(other), -self)

    def __mul__(self, other):
        return mul(self, _as_poly(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = ONE
        for _ in range(k):
            out = mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"Polynomial({np.round(self.coeffs, 12).tolist()})"

    def allclose(self, other: "Polynomial", atol: float = 1e-10) -> bool:
        n = max(self.coeffs.size, other.coeffs.size)
        return bool(np.allclose(self.padded(n), other.padded(n), rtol=0, atol=atol))


Z = Polynomial([0, 1])
ONE = Polynomial([1])
ZERO = Polynomial()


@dataclass(frozen=True)
class RationalFunction:
    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")

    def __call__(self, z):
        return evaluate(self.numerator, z) / evaluate(self.denominator, z)

    def reciprocal(self) -> "RationalFunction":
        return RationalFunction(self.denominator, self.numerator)


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([complex(x)])


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    n = max(p.coeffs.size, q.coeffs.size)
    return Polynomial(p.padded(n) + q.padded(n))


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero or q.is_zero:
        return ZERO
    return Polynomial(np.convolve(p.coeffs, q.coeffs))


def scale(p: Polynomial, c: complex) -> Polynomial:
    return Polynomial(p.coeffs * c)


def evaluate(p: Polynomial, z):
    """Horner evaluation; accepts a scalar or an array of points."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def star(p: Polynomial, k: int) -> Polynomial:
    """Reversed conjugate ``z**k * conj(p(1/conj(z)))`` at nominal degree ``k``."""
    if p.degree > k:
        raise ValueError(f"nominal degree {k} is below the actual degree {p.degree}")
    return Polynomial(np.conj(p.padded(k + 1))[::-1])


def divide(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Long division ``p = q*d + r`` with ``deg r < deg d``."""
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    num = p.coeffs.astype(complex).copy()
    dd = d.coeffs
    m = dd.size - 1
    if num.size - 1 < m:
        return ZERO, p
    quot = np.zeros(num.size - m, dtype=complex)
    for i in range(num.size - 1, m - 1, -1):
        c = num[i] / dd[-1]
        quot[i - m] = c
        num[i - m : i + 1] -= c * dd
    # the remainder is not canonicalised against p's scale on purpose
    rem = num[:m]
    return Polynomial(quot), Polynomial(rem) if np.any(rem) else ZERO


def divide_exact(p: Polynomial, d: Polynomial, tol: float = 1e-10) -> tuple[Polynomial, float]:
    """Quotient of an (almost) exact division and the relative remainder norm."""
    q, _ = divide(p, d)
    rnorm = (p - q * d).norm()
    pnorm = p.norm()
    rel = rnorm / pnorm if pnorm > 0 else rnorm
    if rel > tol:
        raise NotDivisibleError(rel)
    return q, rel


def cauchy_bound(p: Polynomial) -> float:
    c = p.coeffs
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))


def roots(p: Polynomial, maxiter: int = 200, steptol: float = 1e-13) -> np.ndarray:
    """All roots of ``p`` by Aberth-Ehrlich simultaneous iteration.

    Starting points sit on a circle whose radius is the Cauchy bound, with a
    small angular offset so symmetric polynomials do not stall.
    """
    if p.degree < 1:
        raise RootFindingError("roots of a zero or constant polynomial are undefined")
    c = p.coeffs / p.coeffs[-1]
    deg = c.size - 1
    if deg == 1:
        return np.array([-c[0]])
    dc = c[1:] * np.arange(1, deg + 1)
    radius = cauchy_bound(p)
    ang = 2 * np.pi * np.arange(deg) / deg + 0.4
    z = radius * np.exp(1j * ang)

    def horner(coefs, x):
        acc = np.zeros_like(x)
        for a in coefs[::-1]:
            acc = acc * x + a
        return acc

    converged = False
    for _ in range(maxiter):
        f = horner(c, z)
        fp = horner(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(f == 0, 0, f / fp)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.max(np.abs(step)) < steptol * max(1.0, float(np.max(np.abs(z)))):
            converged = True
            break
    if not converged:
        # clustered/multiple roots converge linearly; accept if residuals are small
        resid = np.abs(horner(c, z)) / np.max(np.abs(c))
        if not np.all(np.isfinite(z)) or np.max(resid) > 1e-8:
            raise RootFindingError("Aberth iteration did not converge")
    return z


def poly_from_json(data) -> Polynomial:
    return Polynomial([complex(re, im) for re, im in data])


def poly_to_json(p: Polynomial) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in p.coeffs]
