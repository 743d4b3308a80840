"""Vector-polynomial interpolation problems and their two generators.

A problem is a list of nodes ``(z_j, a1_j, a2_j)`` with conditions
``a1_j P1(z_j) + a2_j P2(z_j) = 0``. Its solutions form a module over the
polynomials generated by a minimal generator ``r`` and a second generator
``q`` whose heights add up to ``2n + 1``.

Generators are computed from nullspaces of the linear condition map written
in basis coordinates, so height ``h`` corresponds to an ``n x (h+1)`` matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import ONE, ZERO, Polynomial, RationalFunction, evaluate, roots
from .vecpoly import VectorPolynomial, expand_in_basis, from_coords

RANK_RTOL = 1e-9
DEFLATION_TOL = 1e-6
MIN_NODE_SEPARATION = 1e-10
DECOMPOSE_TOL = 1e-8


class ProblemError(ValueError):
    """Invalid interpolation data (duplicate nodes, zero coefficient pairs...)."""


class RankAmbiguityError(ArithmeticError):
    def __init__(self, message: str, singular_values):
        super().__init__(f"{message}; singular values {np.array2string(np.asarray(singular_values), precision=3)}")
        self.singular_values = np.asarray(singular_values)


class NotASolutionError(ValueError):
    pass


@dataclass(frozen=True)
class InterpolationNode:
    z: complex
    a1: complex
    a2: complex

    def __post_init__(self):
        if abs(self.a1) + abs(self.a2) == 0:
            raise ProblemError("node coefficients (a1, a2) must not both vanish")

    def unit(self) -> tuple[complex, complex]:
        s = math.hypot(abs(self.a1), abs(self.a2))
        return self.a1 / s, self.a2 / s


@dataclass(frozen=True)
class InterpolationProblem:
    nodes: tuple[InterpolationNode, ...]

    def __init__(self, nodes: Sequence[InterpolationNode]):
        nodes = tuple(nodes)
        if not nodes:
            raise ProblemError("an interpolation problem needs at least one node")
        zs = np.array([nd.z for nd in nodes], dtype=complex)
        if not np.all(np.isfinite(zs)):
            raise ProblemError("node abscissas must be finite")
        d = np.abs(zs[:, None] - zs[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min(initial=np.inf) <= MIN_NODE_SEPARATION:
            raise ProblemError("duplicate (or nearly coincident) interpolation nodes")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def zs(self) -> np.ndarray:
        return np.array([nd.z for nd in self.nodes], dtype=complex)

    def unit_coefficients(self) -> np.ndarray:
        """``n x 2`` array of the node pairs scaled to unit length."""
        return np.array([nd.unit() for nd in self.nodes], dtype=complex)

    def condition_matrix(self, h: int) -> np.ndarray:
        """Matrix of the node conditions acting on coordinates ``c_0..c_h``."""
        zs = self.zs
        a = self.unit_coefficients()
        k = np.arange(h + 1)
        powers = zs[:, None] ** (k // 2)[None, :]
        weights = np.where(k % 2 == 0, a[:, [0]], a[:, [1]])
        return weights * powers

    def to_json(self) -> dict:
        return {"nodes": [{"z": _cj(nd.z), "a1": _cj(nd.a1), "a2": _cj(nd.a2)} for nd in self.nodes]}

    @classmethod
    def from_json(cls, data: dict) -> "InterpolationProblem":
        if "nodes" in data:
            return cls([InterpolationNode(complex(*nd["z"]), complex(*nd["a1"]), complex(*nd["a2"])) for nd in data["nodes"]])
        if "z" in data and "omega" in data:
            zs = [complex(*z) for z in data["z"]]
            omegas = [math.inf if w == "inf" else complex(*w) for w in data["omega"]]
            return from_values(zs, omegas)
        raise ProblemError("problem JSON needs 'nodes' or 'z'/'omega'")


def _cj(c: complex) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def _is_infinite(w) -> bool:
    if w is None:
        return True
    if isinstance(w, str):
        return w == "inf"
    w = complex(w)
    return math.isinf(w.real) or math.isinf(w.imag)


def from_values(zs: Sequence[complex], omegas: Sequence) -> InterpolationProblem:
    """Problem for ``P1/P2 = omega_j`` at ``z_j``; ``omega = inf`` demands a pole."""
    if len(zs) != len(omegas):
        raise ProblemError("zs and omegas differ in length")
    nodes = []
    for z, w in zip(zs, omegas):
        if _is_infinite(w):
            nodes.append(InterpolationNode(complex(z), 0j, 1 + 0j))
        else:
            nodes.append(InterpolationNode(complex(z), 1 + 0j, -complex(w)))
    return InterpolationProblem(nodes)


def residual(problem: InterpolationProblem, p: VectorPolynomial) -> float:
    """Largest node defect, relative to the largest coefficient of ``p``."""
    scale = p.norm()
    if scale == 0:
        return 0.0
    a = problem.unit_coefficients()
    zs = problem.zs
    vals = a[:, 0] * evaluate(p.p1, zs) + a[:, 1] * evaluate(p.p2, zs)
    return float(np.max(np.abs(vals))) / scale


def _nullspace(A: np.ndarray, rtol: float = RANK_RTOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal nullspace basis (columns) and the singular values."""
    m, k = A.shape
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T, s


def minimal_generator(problem: InterpolationProblem, rank_rtol: float = RANK_RTOL) -> tuple[VectorPolynomial, int]:
    """Least-height nonzero solution, normalised to a unit leading coefficient.

    Heights are tried upward from 0; the first height whose condition matrix
    has a numerically nontrivial nullspace wins. The sweep cannot pass ``n``
    because an ``n x (n+1)`` matrix always has a kernel.
    """
    n = problem.n
    for h in range(0, n + 1):
        ns, s = _nullspace(problem.condition_matrix(h), rank_rtol)
        if ns.shape[1] == 0:
            continue
        # at the first feasible height the kernel is one-dimensional
        v = ns[:, -1]
        if abs(v[h]) <= rank_rtol * np.max(np.abs(v)):
            raise RankAmbiguityError(f"kernel vector at height {h} has a vanishing top coordinate", s)
        return from_coords(v / v[h]), h
    raise RankAmbiguityError(f"no solution of height <= {n} found", s)


def inductive_solution(problem: InterpolationProblem, degenerate_tol: float = 1e-12) -> VectorPolynomial:
    """A solution of height at most ``n`` built by peeling off one node at a time.

    Each step multiplies out a triangular 2x2 change of variables that makes
    the peeled node's condition trivial and folds a factor ``(z_last - z)``
    into one component; the remaining nodes are transformed accordingly and
    solved recursively. The result need not be minimal.
    """
    a = problem.unit_coefficients()
    return _peel(list(problem.zs), list(a[:, 0]), list(a[:, 1]), degenerate_tol)


def _unit_rows(x1: list, x2: list) -> tuple[list, list]:
    out1, out2 = [], []
    for u, v in zip(x1, x2):
        s = math.hypot(abs(u), abs(v))
        out1.append(u / s)
        out2.append(v / s)
    return out1, out2


def _peel(zs: list, a1: list, a2: list, tol: float) -> VectorPolynomial:
    N = len(zs)
    if N == 0:
        return VectorPolynomial(ONE, ZERO)
    if N == 1:
        return VectorPolynomial(Polynomial([-a2[0]]), Polynomial([a1[0]]))
    if N % 2 == 0:
        # upper-triangular step; needs a node with a1 != 0
        if max(abs(x) for x in a1) <= tol:
            return VectorPolynomial(ONE, ZERO)
        i = int(np.argmax(np.abs(a1)))
        A1, A2, zl = a1[i], a2[i], zs[i]
        rest = [j for j in range(N) if j != i]
        b1 = [(zl - zs[j]) * a1[j] / A1 for j in rest]
        b2 = [a2[j] - a1[j] * A2 / A1 for j in rest]
        b1, b2 = _unit_rows(b1, b2)
        q = _peel([zs[j] for j in rest], b1, b2, tol)
        shift = Polynomial([zl, -1])
        return VectorPolynomial(shift * q.p1 * (1 / A1) - q.p2 * (A2 / A1), q.p2)
    # lower-triangular step; needs a node with a2 != 0
    if max(abs(x) for x in a2) <= tol:
        return VectorPolynomial(ZERO, ONE)
    i = int(np.argmax(np.abs(a2)))
    A1, A2, zl = a1[i], a2[i], zs[i]
    rest = [j for j in range(N) if j != i]
    d1 = [a1[j] - a2[j] * A1 / A2 for j in rest]
    d2 = [(zl - zs[j]) * a2[j] / A2 for j in rest]
    d1, d2 = _unit_rows(d1, d2)
    q = _peel([zs[j] for j in rest], d1, d2, tol)
    shift = Polynomial([zl, -1])
    return VectorPolynomial(q.p1, q.p1 * (-A1 / A2) + shift * q.p2 * (1 / A2))


def _multiple_coords(r: VectorPolynomial, j: int, length: int) -> np.ndarray:
    """Coordinates of ``z**j * r`` padded to ``length``."""
    c = expand_in_basis(r)
    out = np.zeros(length, dtype=complex)
    out[2 * j : 2 * j + c.size] = c
    return out


def second_generator(
    problem: InterpolationProblem,
    r: VectorPolynomial,
    h_min: int,
    rank_rtol: float = RANK_RTOL,
    deflation_tol: float = DEFLATION_TOL,
) -> VectorPolynomial:
    """Solution of height ``2n + 1 - h_min`` that is not a multiple of ``r``.

    The kernel at that height contains every ``z**j r`` that fits; projecting
    those out leaves a single direction.
    """
    n = problem.n
    H = 2 * n + 1 - h_min
    ns, s = _nullspace(problem.condition_matrix(H), rank_rtol)
    count = (H - h_min) // 2 + 1
    B = np.column_stack([_multiple_coords(r, j, H + 1) for j in range(count)])
    Q, _ = np.linalg.qr(B)
    rest = ns - Q @ (Q.conj().T @ ns)
    if rest.shape[1] == 0:
        raise RankAmbiguityError("kernel at the second-generator height is empty", s)
    u, sv, _ = np.linalg.svd(rest, full_matrices=False)
    if sv[0] <= deflation_tol:
        raise RankAmbiguityError("kernel is spanned by multiples of the minimal generator", sv)
    if sv.size > 1 and sv[1] > deflation_tol:
        raise RankAmbiguityError("more than one direction survives deflation", sv)
    v = u[:, 0]
    if abs(v[H]) <= deflation_tol * np.max(np.abs(v)):
        raise RankAmbiguityError("deflated direction does not reach the expected height", sv)
    return from_coords(v / v[H])


@dataclass(frozen=True)
class GeneratorPair:
    r: VectorPolynomial
    q: VectorPolynomial
    h_min: int
    h_second: int
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "h_min": self.h_min,
            "r": self.r.to_json(),
            "h_second": self.h_second,
            "q": self.q.to_json(),
            "residuals": dict(self.residuals),
        }


def generators(problem: InterpolationProblem, rank_rtol: float = RANK_RTOL) -> GeneratorPair:
    r, h = minimal_generator(problem, rank_rtol)
    q = second_generator(problem, r, h, rank_rtol)
    return GeneratorPair(r, q, h, int(q.height), {"r": residual(problem, r), "q": residual(problem, q)})


def decompose(problem: InterpolationProblem, pair: GeneratorPair, p: VectorPolynomial, tol: float = DECOMPOSE_TOL) -> tuple[Polynomial, Polynomial]:
    """Find ``S, T`` with ``p = S r + T q``.

    Works top-down in basis coordinates: heights of the parity of ``h(r)``
    from ``h(r)`` on belong to ``z**j r``, those of the other parity from
    ``h(q)`` on belong to ``z**j q``. Whatever lands on the remaining slots is
    the part of ``p`` outside the solution module and must vanish.
    """
    if p.is_zero:
        return ZERO, ZERO
    hr, hq = pair.h_min, pair.h_second
    length = max(int(p.height), hr, hq) + 1
    c = expand_in_basis(p, length)
    pscale = np.max(np.abs(c))
    rl, ql = pair.r.leading(), pair.q.leading()
    S = np.zeros(max((length - 1 - hr) // 2 + 1, 1), dtype=complex)
    T = np.zeros(max((length - 1 - hq) // 2 + 1, 1), dtype=complex)
    for t in range(length - 1, -1, -1):
        if t >= hr and (t - hr) % 2 == 0:
            j = (t - hr) // 2
            S[j] = c[t] / rl
            c -= S[j] * _multiple_coords(pair.r, j, length)
        elif t >= hq and (t - hq) % 2 == 0:
            j = (t - hq) // 2
            T[j] = c[t] / ql
            c -= T[j] * _multiple_coords(pair.q, j, length)
    leftover = float(np.max(np.abs(c))) / pscale
    if leftover > tol:
        raise NotASolutionError(f"p is not in the solution module (leftover {leftover:.2e})")
    return Polynomial(S), Polynomial(T)


@dataclass(frozen=True)
class FamilyMember:
    value: RationalFunction
    common_root: bool


def family_eval(pair: GeneratorPair, S: Polynomial, T: Polynomial, root_tol: float = 1e-8) -> FamilyMember:
    """``(S R1 + T Q1) / (S R2 + T Q2)`` with a flag for shared zeros."""
    num = S * pair.r.p1 + T * pair.q.p1
    den = S * pair.r.p2 + T * pair.q.p2
    if den.is_zero:
        raise ZeroDivisionError("family member has a zero denominator")
    shared = False
    if num.degree >= 1 and den.degree >= 1:
        for rho in roots(num):
            mag = np.abs(den.coeffs) @ (abs(rho) ** np.arange(den.coeffs.size))
            if abs(evaluate(den, rho)) <= root_tol * mag:
                shared = True
                break
    return FamilyMember(RationalFunction(num, den), shared)
