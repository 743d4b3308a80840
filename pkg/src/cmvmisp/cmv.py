"""Finite CMV matrices and their Szegő polynomials (terminal coefficient 1)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import ONE, Z, Polynomial, RationalFunction, divide_exact, evaluate, roots, star

ALPHA_MARGIN = 1e-12


class CmvError(ValueError):
    pass


class NotSchurError(CmvError):
    """The polynomial handed to the inverse recurrence is not Schur-stable."""


@dataclass(frozen=True)
class VerblunskyParams:
    """Verblunsky coefficients ``alphas[0..n-2]`` plus the terminal ``beta``."""

    alphas: tuple[complex, ...]
    beta: complex = 1.0

    def __init__(self, alphas: Sequence[complex], beta: complex = 1.0):
        a = tuple(complex(x) for x in alphas)
        for j, x in enumerate(a):
            if not (math.isfinite(x.real) and math.isfinite(x.imag)):
                raise CmvError(f"alpha[{j}] is not finite")
            if abs(x) >= 1 - ALPHA_MARGIN:
                raise CmvError(f"|alpha[{j}]| = {abs(x):.6g} is not inside the unit disk")
        b = complex(beta)
        if abs(abs(b) - 1) > 1e-12:
            raise CmvError("beta must be unimodular")
        if b != 1:
            raise CmvError("only beta = 1 is supported")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "beta", b)

    @property
    def n(self) -> int:
        return len(self.alphas) + 1

    def rho(self, j: int) -> float:
        return math.sqrt(1 - abs(self.alphas[j]) ** 2)

    def kappa(self, m: int) -> float:
        """``prod_{j<m} (1-|alpha_j|^2)^(-1/2)``; ``kappa(0) == 1``."""
        out = 1.0
        for j in range(m):
            out /= self.rho(j)
        return out

    def to_json(self) -> dict:
        return {"alphas": [[a.real, a.imag] for a in self.alphas], "beta": [self.beta.real, self.beta.imag]}

    @classmethod
    def from_json(cls, data: dict) -> "VerblunskyParams":
        beta = data.get("beta", [1.0, 0.0])
        return cls([complex(*a) for a in data["alphas"]], complex(*beta))


@dataclass(frozen=True)
class SzegoSystem:
    phis: tuple[Polynomial, ...]
    phi_tilde: Polynomial

    @property
    def n(self) -> int:
        return len(self.phis)


# ``W = numerator / denominator``; the classical Weyl function is its reciprocal.
WeylData = RationalFunction


def szego_step(phi: Polynomial, k: int, alpha: complex) -> Polynomial:
    """One forward step ``z*phi - conj(alpha) * star(phi, k)``, ``k = deg phi``."""
    return Z * phi - np.conj(alpha) * star(phi, k)


def szego_polys(alphas: Sequence[complex]) -> list[Polynomial]:
    """``[Phi_0, ..., Phi_len(alphas)]`` from the recurrence."""
    phis = [ONE]
    for k, a in enumerate(alphas):
        phis.append(szego_step(phis[-1], k, a))
    return phis


def closing_poly(alphas: Sequence[complex]) -> Polynomial:
    """Terminal polynomial of degree ``len(alphas)+1`` with beta = 1."""
    phis = szego_polys(alphas)
    return szego_step(phis[-1], len(alphas), 1.0)


def szego_forward(params: VerblunskyParams) -> SzegoSystem:
    phis = szego_polys(params.alphas)
    tilde = szego_step(phis[-1], params.n - 1, params.beta)
    for k, p in enumerate(phis):
        if p.degree != k or abs(p.lead - 1) > 1e-12:
            raise CmvError(f"Phi_{k} is not monic of degree {k}")
    if abs(tilde.coeff(0) + np.conj(params.beta)) > 1e-10:
        raise CmvError("terminal polynomial does not satisfy Phi~(0) = -conj(beta)")
    return SzegoSystem(tuple(phis), tilde)


def szego_inverse(phi: Polynomial, k: int | None = None) -> tuple[list[complex], list[Polynomial]]:
    """Recover ``alpha_0..alpha_{k-1}`` from a monic Schur polynomial of degree k.

    Returns the coefficients in ascending order and the chain
    ``[Phi_{k-1}, ..., Phi_0]`` obtained on the way down.
    """
    if k is None:
        k = int(phi.degree)
    if phi.degree != k or k < 1:
        raise CmvError(f"expected a polynomial of degree {k} >= 1")
    cur = phi.monic()
    alphas: list[complex] = [0j] * k
    trail: list[Polynomial] = []
    for j in range(k, 0, -1):
        a = -np.conj(cur.coeff(0))
        if abs(a) >= 1 - 1e-10:
            raise NotSchurError(f"|alpha_{j - 1}| = {abs(a):.6g}; not a Schur-stable Szegő polynomial")
        alphas[j - 1] = complex(a)
        zprev = (cur + np.conj(a) * star(cur, j)) * (1.0 / (1 - abs(a) ** 2))
        try:
            prev, _ = divide_exact(zprev, Z, tol=1e-9)
        except ArithmeticError as exc:
            raise CmvError(f"inverse Szegő step {j} failed: {exc}") from exc
        if prev.degree != j - 1:
            raise CmvError("inverse recurrence lost a degree")
        cur = prev.monic()
        trail.append(cur)
    return alphas, trail


def assemble_cmv(params: VerblunskyParams) -> np.ndarray:
    """Dense ``L @ M`` for an even-size CMV matrix."""
    n = params.n
    if n % 2:
        raise CmvError("sieving not supported; n must be even")

    def theta(a: complex) -> np.ndarray:
        r = math.sqrt(1 - abs(a) ** 2)
        return np.array([[np.conj(a), r], [r, -a]])

    L = np.zeros((n, n), dtype=complex)
    M = np.eye(n, dtype=complex)
    for j in range(0, n - 1, 2):
        L[j : j + 2, j : j + 2] = theta(params.alphas[j])
    for j in range(1, n - 2, 2):
        M[j : j + 2, j : j + 2] = theta(params.alphas[j])
    return L @ M


def reflect(params: VerblunskyParams) -> VerblunskyParams:
    """Reversed parameters ``lambda_k = -conj(alpha_{n-2-k})``."""
    if params.n % 2:
        raise CmvError("sieving not supported; n must be even")
    a = params.alphas
    return VerblunskyParams([-np.conj(a[len(a) - 1 - k]) for k in range(len(a))], params.beta)


def sort_by_argument(zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    return zs[np.argsort(np.mod(np.angle(zs), 2 * np.pi), kind="stable")]


def min_separation(zs) -> float:
    zs = np.asarray(zs, dtype=complex)
    if zs.size < 2:
        return math.inf
    d = np.abs(zs[:, None] - zs[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def spectrum(params: VerblunskyParams) -> np.ndarray:
    """Eigenvalues as the roots of the terminal polynomial, sorted by argument."""
    zs = sort_by_argument(roots(szego_forward(params).phi_tilde))
    if np.max(np.abs(np.abs(zs) - 1)) > 1e-8:
        raise CmvError("spectrum is not on the unit circle")
    sep = min_separation(zs)
    if sep < 1e-8:
        warnings.warn(f"eigenvalues nearly coincide (separation {sep:.2e})", RuntimeWarning, stacklevel=2)
    return zs


def eigenvector(params: VerblunskyParams, zeta: complex, system: SzegoSystem | None = None) -> np.ndarray:
    """``[x_0(zeta), ..., x_{n-1}(zeta)]`` from the Szegő polynomials.

    For ``zeta`` in the spectrum this is an eigenvector of ``assemble_cmv``;
    elsewhere ``||(zeta - C) X||`` equals
    ``|zeta|^(-n//2) * kappa_{n-1} * |Phi~_n(zeta)|``.
    """
    if zeta == 0:
        raise CmvError("eigenvector functions are undefined at z = 0")
    sysm = system or szego_forward(params)
    out = np.empty(params.n, dtype=complex)
    for i, phi in enumerate(sysm.phis):
        k = i // 2
        if i % 2 == 0:
            out[i] = zeta ** (-k) * params.kappa(i) * evaluate(phi, zeta)
        else:
            out[i] = zeta ** (-k - 1) * params.kappa(i) * evaluate(star(phi, i), zeta)
    return out


def eigenvector_residual_bound(params: VerblunskyParams, zeta: complex) -> float:
    sysm = szego_forward(params)
    return abs(zeta) ** (-(params.n // 2)) * params.kappa(params.n - 1) * abs(evaluate(sysm.phi_tilde, zeta))


def weyl(prefix: Sequence[complex]) -> WeylData:
    """``W = Phi~_{k+1} / Phi_k`` for the known prefix ``alpha_0..alpha_{k-1}``."""
    for j, a in enumerate(prefix):
        if abs(a) >= 1 - ALPHA_MARGIN:
            raise CmvError(f"|alpha[{j}]| is not inside the unit disk")
    phis = szego_polys(prefix)
    k = len(prefix)
    return WeylData(szego_step(phis[-1], k, 1.0), phis[-1])


def weyl_for(params: VerblunskyParams, m: int) -> WeylData:
    """Weyl data of the left block used when the last ``m`` coefficients are unknown."""
    n = params.n
    if not 1 <= m <= n // 2:
        raise CmvError(f"m = {m} must lie in [1, n/2]")
    k = n - m - 2
    if k < 0 or k > len(params.alphas):
        raise CmvError("not enough coefficients for this m")
    return weyl(params.alphas[:k])


@dataclass
class SimpleOutcome:
    kind: str  # "unique" | "infinitely_many" | "no_solution"
    alpha: complex | None = None
    reason: str = ""
    taus: tuple[complex, complex] = field(default=(0j, 0j))


def last_alpha_simple(known: Sequence[complex], zeta1: complex, zeta2: complex, tol: float = 1e-10) -> SimpleOutcome:
    """Find ``alpha_{n-2}`` from ``alpha_0..alpha_{n-3}`` and two eigenvalues.

    The unknown enters through the disk automorphism
    ``b(z) = (z + alpha) / (1 + z*conj(alpha))`` which must map each
    ``zeta_j`` to ``tau_j = Phi*_{n-2}(zeta_j) / (zeta_j Phi_{n-2}(zeta_j))``.
    """
    zeta1, zeta2 = complex(zeta1), complex(zeta2)
    if abs(zeta1 - zeta2) < 1e-8:
        raise CmvError("the two eigenvalues must be distinct")
    if abs(abs(zeta1) - 1) > 1e-8 or abs(abs(zeta2) - 1) > 1e-8:
        raise CmvError("eigenvalues must lie on the unit circle")
    k = len(known)
    phi = szego_polys(known)[-1]
    phis = star(phi, k)
    taus = []
    for z in (zeta1, zeta2):
        den = z * evaluate(phi, z)
        if abs(den) < 1e-14:
            raise CmvError("Phi_{n-2} vanishes at an eigenvalue; tau is undefined")
        taus.append(evaluate(phis, z) / den)
    t1, t2 = taus
    s1, s2 = t1 * zeta1, t2 * zeta2
    # alpha - tau_j zeta_j conj(alpha) = tau_j - zeta_j, solved for (alpha, conj(alpha))
    if abs(s1 - s2) > tol:
        v = ((t1 - zeta1) - (t2 - zeta2)) / (s2 - s1)
        u = (t1 - zeta1) + s1 * v
        if abs(u - np.conj(v)) > 1e-8 * max(1.0, abs(u)):
            return SimpleOutcome("no_solution", None, "inconsistent conjugate pair", (t1, t2))
        if abs(u) >= 1:
            return SimpleOutcome("no_solution", complex(u), "outside disk", (t1, t2))
        return SimpleOutcome("unique", complex(u), "", (t1, t2))
    if abs(t2 + zeta1) <= tol and abs(t1 + zeta2) <= tol:
        return SimpleOutcome("infinitely_many", None, "", (t1, t2))
    return SimpleOutcome("no_solution", None, "degenerate pair", (t1, t2))
