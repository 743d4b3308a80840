"""Mixed inverse spectral problem for CMV matrices with terminal coefficient 1.

Given ``alpha_0..alpha_{n-m-2}`` and ``2m`` eigenvalues, the trailing ``m``
coefficients are recovered through the reflected matrix: the values of its
reciprocal Weyl function ``W_r`` at the eigenvalues are computable from the
known block, so ``W_r`` solves an interpolation problem on ``2m`` nodes.
Among the solutions ``(a z + b) r + c q`` the right one has a monic numerator
of degree ``m+1`` with constant term ``-1`` and a monic denominator of degree
``m``; ``b`` is pinned down exactly when ``R1(0) != 0``. Otherwise the family
is parameterised by ``t = Lambda_m(0)``, which equals ``alpha_{n-m-1}`` and so
must lie in the unit disk for a valid member.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cmv import CmvError, VerblunskyParams, closing_poly, reflect, sort_by_argument, spectrum, szego_inverse, weyl
from .interp import GeneratorPair, RankAmbiguityError, from_values, generators, residual
from .poly import Z, Polynomial, evaluate, roots, star
from .vecpoly import VectorPolynomial

DEGEN_RTOL = 1e-6
VERIFY_TOL = 1e-7
CLOSING_TOL = 1e-8
WEYL_DENOM_TOL = 1e-12
CONSISTENCY_TOL = 1e-8

REAL_GRID = np.linspace(-0.95, 0.95, 41)[1:-1]
COMPLEX_GRID = np.array(
    [0.95 * (i + 0.5) / 8 * np.exp(2j * np.pi * (j + 0.5) / 8) for i in range(8) for j in range(8)]
)


class MispInputError(ValueError):
    pass


class Infeasible(Exception):
    """A pipeline stage found the data inconsistent with any admissible matrix."""

    def __init__(self, stage: str, reason: str, check: str = ""):
        super().__init__(f"[{stage}] {reason}")
        self.stage = stage
        self.reason = reason
        self.check = check or reason


@dataclass(frozen=True)
class MispInput:
    n: int
    m: int
    known_alphas: tuple[complex, ...]
    zetas: tuple[complex, ...]

    def __init__(self, n: int, m: int, known_alphas: Sequence[complex], zetas: Sequence[complex]):
        known = tuple(complex(a) for a in known_alphas)
        zs = tuple(complex(z) for z in zetas)
        if n < 2 or n % 2:
            raise MispInputError("n must be even and at least 2 (odd sizes need the unimplemented sieving step)")
        if not 1 <= m <= n // 2:
            raise MispInputError(f"m = {m} must satisfy 1 <= m <= n/2")
        if len(known) != n - m - 1:
            raise MispInputError(f"expected {n - m - 1} known coefficients, got {len(known)}")
        if len(zs) != 2 * m:
            raise MispInputError(f"expected {2 * m} eigenvalues, got {len(zs)}")
        for j, a in enumerate(known):
            if not abs(a) < 1:
                raise MispInputError(f"|alpha_{j}| must be < 1")
        for j, z in enumerate(zs):
            if not math.isfinite(abs(z)) or abs(abs(z) - 1) > 1e-8:
                raise MispInputError(f"eigenvalue {j} is not on the unit circle")
        for i, j in itertools.combinations(range(len(zs)), 2):
            if abs(zs[i] - zs[j]) <= 1e-8:
                raise MispInputError("eigenvalues must be distinct")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "known_alphas", known)
        object.__setattr__(self, "zetas", zs)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "known_alphas": [_cj(a) for a in self.known_alphas],
            "zetas": [_cj(z) for z in self.zetas],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MispInput":
        try:
            return cls(
                int(data["n"]),
                int(data["m"]),
                [complex(*a) for a in data["known_alphas"]],
                [complex(*z) for z in data["zetas"]],
            )
        except (KeyError, TypeError) as exc:
            raise MispInputError(f"malformed MISP input: {exc}") from exc


def _cj(c) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


@dataclass
class FamilySample:
    t: complex
    b: complex
    valid: bool
    alphas: list[complex] | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"t": _cj(self.t), "b": _cj(self.b), "valid": self.valid}
        if self.alphas is not None:
            out["alphas"] = [_cj(a) for a in self.alphas]
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class ConstrainedSolution:
    """``Lambda = (a z + b) r + c q``; ``b is None`` means ``b`` is free."""

    a: complex
    b: complex | None
    c: complex
    pair: GeneratorPair
    m: int

    @property
    def unique(self) -> bool:
        return self.b is not None

    def b_for(self, t: complex) -> complex:
        """The ``b`` giving ``Lambda_m(0) = t``; ``R2(0) != 0`` whenever ``b`` is free."""
        return (t - self.c * self.pair.q.p2.coeff(0)) / self.pair.r.p2.coeff(0)

    def lambdas(self, b: complex | None = None) -> tuple[Polynomial, Polynomial]:
        b = self.b if b is None else b
        if b is None:
            raise ValueError("b is free; pass a value")
        S = Polynomial([b, self.a])
        r, q = self.pair.r, self.pair.q
        return S * r.p1 + self.c * q.p1, S * r.p2 + self.c * q.p2


@dataclass
class MispOutcome:
    tag: str  # "unique" | "family" | "infeasible"
    alphas: list[complex] | None = None
    diagnostics: dict = field(default_factory=dict)
    solution: ConstrainedSolution | None = None
    samples: list[FamilySample] = field(default_factory=list)
    reason: str = ""
    stage: str = ""
    check: str = ""

    @property
    def member(self) -> FamilySample | None:
        return next((s for s in self.samples if s.valid), None)

    def to_json(self) -> dict:
        out: dict = {"tag": self.tag, "alphas": None if self.alphas is None else [_cj(a) for a in self.alphas]}
        out["diagnostics"] = self.diagnostics
        if self.tag == "family" and self.solution is not None:
            sol = self.solution
            member = self.member
            out["family"] = {
                "a": _cj(sol.a),
                "c": _cj(sol.c),
                "free_parameter": "t = Lambda_m(0) = alpha_{n-m-1}; Lambda = (a*z + b)*r + c*q with b = (t - c*Q2(0)) / R2(0)",
                "r": sol.pair.r.to_json(),
                "q": sol.pair.q.to_json(),
                "samples": [s.to_json() for s in self.samples],
                "member": None if member is None else member.to_json(),
            }
        if self.tag == "infeasible":
            out["reason"] = self.reason
            out["stage"] = self.stage
            out["check"] = self.check
        return out


def compute_omegas(inp: MispInput) -> np.ndarray:
    """Values of ``W_r`` at the given eigenvalues, computed from the known block."""
    zs = np.array(inp.zetas)
    if len(inp.known_alphas) == 0:
        # n = 2, m = 1: the unknown block is the whole matrix, so W_r vanishes on
        # the spectrum (the formula below with alpha_{-1} = -1 gives the same)
        return np.zeros_like(zs)
    alpha = inp.known_alphas[-1]
    W = weyl(inp.known_alphas[:-1])
    out = np.empty_like(zs)
    for j, z in enumerate(zs):
        d = 1 - alpha - np.conj(z) * W(z)
        if abs(d) <= WEYL_DENOM_TOL:
            raise Infeasible("omegas", f"Weyl denominator vanishes at node {j}", "weyl_denominator")
        out[j] = z * ((1 + np.conj(alpha)) * d - (1 - abs(alpha) ** 2)) / d
    if not np.all(np.isfinite(out)):
        raise Infeasible("omegas", "non-finite interpolation value", "omega_finite")
    return out


def r1_at_zero(pair: GeneratorPair) -> complex:
    return pair.r.p1.coeff(0)


def generator_scale(pair: GeneratorPair) -> float:
    return pair.r.norm()


def solve_constrained(pair: GeneratorPair, m: int, degen_rtol: float = DEGEN_RTOL) -> ConstrainedSolution:
    """Pick ``(a, b, c)`` so that ``(a z + b) r + c q`` meets the degree and free-term constraints."""
    if pair.h_min not in (2 * m - 1, 2 * m):
        raise Infeasible("constrain", f"inconsistent spectral data: generator height {pair.h_min} not in {{{2 * m - 1}, {2 * m}}}", "h_min_window")
    R1, R2 = pair.r.p1, pair.r.p2
    Q1, Q2 = pair.q.p1, pair.q.p2
    # unknowns (a, b, c): Lambda1[m+1] = 1, Lambda2[m] = 1, Lambda1(0) = -1
    A = np.array(
        [
            [R1.coeff(m), R1.coeff(m + 1), Q1.coeff(m + 1)],
            [R2.coeff(m - 1), R2.coeff(m), Q2.coeff(m)],
            [0.0, R1.coeff(0), Q1.coeff(0)],
        ],
        dtype=complex,
    )
    rhs = np.array([1.0, 1.0, -1.0], dtype=complex)
    if abs(R1.coeff(0)) > degen_rtol * generator_scale(pair):
        a, b, c = np.linalg.solve(A, rhs)
        return ConstrainedSolution(complex(a), complex(b), complex(c), pair, m)
    A2 = A[:, [0, 2]]
    A2[2, :] = [0.0, Q1.coeff(0)]
    sol, *_ = np.linalg.lstsq(A2, rhs, rcond=None)
    defect = np.max(np.abs(A2 @ sol - rhs))
    if defect > CONSISTENCY_TOL * max(1.0, float(np.max(np.abs(sol)))):
        raise Infeasible("constrain", "no Schur completion: degree and free-term constraints are inconsistent", "constraint_system")
    return ConstrainedSolution(complex(sol[0]), None, complex(sol[1]), pair, m)


def recover_alphas(lambda1: Polynomial, lambda2: Polynomial, inp: MispInput) -> list[complex]:
    """Turn ``(Lambda~_{m+1}, Lambda_m)`` into ``alpha_{n-m-1}..alpha_{n-2}``."""
    m = inp.m
    if lambda2.degree != m or abs(lambda2.lead - 1) > 1e-8:
        raise Infeasible("recover", f"denominator is not monic of degree {m}", "denominator_shape")
    closing = Z * lambda2 - star(lambda2, m)
    if (lambda1 - closing).norm() > CLOSING_TOL * max(1.0, closing.norm()):
        raise Infeasible("recover", "β=1 closing relation violated", "closing_relation")
    if np.max(np.abs(roots(lambda2))) >= 1:
        raise Infeasible("recover", "reconstructed polynomial not Schur", "schur_roots")
    try:
        lams, _ = szego_inverse(lambda2, m)
    except CmvError as exc:
        raise Infeasible("recover", f"reconstructed polynomial not Schur ({exc})", "schur_roots") from exc
    # alpha_{n-2-k} = -conj(lambda_k); return in ascending alpha index
    return [-np.conj(lams[m - 1 - i]) for i in range(m)]


def verify(inp: MispInput, alphas: Sequence[complex]) -> float:
    """Largest distance from a given eigenvalue to the rebuilt spectrum."""
    try:
        params = VerblunskyParams(list(inp.known_alphas) + list(alphas))
        sigma = spectrum(params)
    except (CmvError, ArithmeticError) as exc:
        raise Infeasible("verify", f"rebuilt matrix is invalid ({exc})", "rebuild") from exc
    return float(max(np.min(np.abs(sigma - z)) for z in inp.zetas))


def _try_member(sol: ConstrainedSolution, t: complex, inp: MispInput) -> FamilySample:
    b = sol.b_for(t)
    lam1, lam2 = sol.lambdas(b)
    try:
        alphas = recover_alphas(lam1, lam2, inp)
        err = verify(inp, alphas)
    except Infeasible as exc:
        return FamilySample(t, b, False, None, exc.check)
    if err > VERIFY_TOL:
        return FamilySample(t, b, False, alphas, "spectrum_mismatch")
    return FamilySample(t, b, True, [complex(a) for a in alphas])


def fit_free_parameter(sol: ConstrainedSolution, lambda2: Polynomial) -> complex:
    """Least-squares ``b`` matching a given denominator within the family.

    For a family member the residual is zero and ``lambdas(b)`` returns it.
    """
    base = sol.lambdas(0)[1]
    R2 = sol.pair.r.p2
    size = max(base.coeffs.size, R2.coeffs.size, lambda2.coeffs.size)
    x = R2.padded(size)
    y = lambda2.padded(size) - base.padded(size)
    return complex(np.vdot(x, y) / np.vdot(x, x))


def solve_misp(inp: MispInput, degen_rtol: float = DEGEN_RTOL, rank_rtol: float | None = None) -> MispOutcome:
    diag: dict = {"n": inp.n, "m": inp.m}
    try:
        omegas = compute_omegas(inp)
        diag["omegas"] = [_cj(w) for w in omegas]
        problem = from_values(inp.zetas, omegas)
        try:
            pair = generators(problem) if rank_rtol is None else generators(problem, rank_rtol)
        except RankAmbiguityError as exc:
            raise Infeasible("generators", str(exc), "rank") from exc
        r10 = r1_at_zero(pair)
        diag.update(
            h_min=pair.h_min,
            h_second=pair.h_second,
            r1_at_0=_cj(r10),
            r1_at_0_rel=abs(r10) / generator_scale(pair),
            residuals=dict(pair.residuals),
        )
        sol = solve_constrained(pair, inp.m, degen_rtol)
        diag["case"] = "h_min=2m" if pair.h_min == 2 * inp.m else "h_min=2m-1"
        if sol.unique:
            lam1, lam2 = sol.lambdas()
            alphas = recover_alphas(lam1, lam2, inp)
            err = verify(inp, alphas)
            diag["residuals"]["spectrum"] = err
            diag["residuals"]["lambda"] = residual(problem, VectorPolynomial(lam1, lam2))
            if err > VERIFY_TOL:
                raise Infeasible("verify", f"given eigenvalues not reproduced (max distance {err:.2e})", "spectrum_match")
            return MispOutcome("unique", [complex(a) for a in alphas], diag, sol)
        samples = [_try_member(sol, t, inp) for t in np.concatenate([REAL_GRID, COMPLEX_GRID])]
        diag["valid_samples"] = sum(s.valid for s in samples)
        member = next((s for s in samples if s.valid), None)
        return MispOutcome("family", None if member is None else member.alphas, diag, sol, samples)
    except Infeasible as exc:
        return MispOutcome("infeasible", None, diag, None, reason=exc.reason, stage=exc.stage, check=exc.check)


def admissible_subsets(params_or_zetas, inp_known: Sequence[complex], n: int, m: int, degen_rtol: float = DEGEN_RTOL) -> list[tuple[tuple[int, ...], bool]]:
    """For every ``2m``-subset of the eigenvalues, whether it passes the uniqueness gate."""
    zs = list(params_or_zetas)
    out = []
    for idx in itertools.combinations(range(len(zs)), 2 * m):
        inp = MispInput(n, m, inp_known, [zs[i] for i in idx])
        try:
            omegas = compute_omegas(inp)
            pair = generators(from_values(inp.zetas, omegas))
            ok = abs(r1_at_zero(pair)) > degen_rtol * generator_scale(pair)
        except (Infeasible, RankAmbiguityError):
            ok = False
        out.append((idx, ok))
    return out


def random_alphas(rng: np.random.Generator, count: int, radius: float = 0.8) -> np.ndarray:
    """Uniform samples from the disk of the given radius."""
    r = radius * np.sqrt(rng.random(count))
    return r * np.exp(2j * np.pi * rng.random(count))


def roundtrip_experiment(n: int, m: int, seed: int = 0, trials: int = 100, radius: float = 0.8) -> dict:
    """Forward-model round trips; every trial runs two eigenvalue selections.

    The per-trial generator is seeded from ``(seed, trial)`` so the report does
    not depend on evaluation order.
    """
    if n % 2 or not 1 <= m <= n // 2:
        raise MispInputError("need even n and 1 <= m <= n/2")
    rows = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        alphas = random_alphas(rng, n - 1, radius)
        zs = spectrum(VerblunskyParams(alphas))
        truth = alphas[n - m - 1 :]
        picks = {"first": list(range(2 * m)), "random": sorted(rng.choice(n, size=2 * m, replace=False).tolist())}
        for selection, idx in picks.items():
            inp = MispInput(n, m, alphas[: n - m - 1], zs[idx])
            out = solve_misp(inp)
            err = None
            if out.tag == "unique":
                err = float(np.max(np.abs(np.array(out.alphas) - truth)))
            rows.append(
                {
                    "trial": t,
                    "selection": selection,
                    "outcome": out.tag,
                    "max_error": err,
                    "r1_at_0_modulus": out.diagnostics.get("r1_at_0_rel"),
                    "stage": out.stage,
                }
            )
    counts = {tag: sum(r["outcome"] == tag for r in rows) for tag in ("unique", "family", "infeasible")}
    errs = [r["max_error"] for r in rows if r["max_error"] is not None]
    gate = [r for r in rows if r["r1_at_0_modulus"] is not None and r["r1_at_0_modulus"] > DEGEN_RTOL]
    r1s = [r["r1_at_0_modulus"] for r in rows if r["r1_at_0_modulus"] is not None]
    return {
        "n": n,
        "m": m,
        "seed": seed,
        "trials": trials,
        "runs": len(rows),
        "counts": counts,
        "unique_rate": counts["unique"] / len(rows) if rows else None,
        "gate_rate": len(gate) / len(rows) if rows else None,
        "max_unique_error": max(errs) if errs else None,
        "min_r1_at_0": min(r1s) if r1s else None,
        "rows": rows,
    }
