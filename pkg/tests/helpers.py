"""Random instance generators and brute-force oracles shared by the tests."""

import numpy as np
import scipy.linalg

from cmvmisp.interp import InterpolationNode, InterpolationProblem


def random_problem(rng, n, p_inf=0.2, unimodular=None):
    """Random problem with mixed finite and infinite values and varied node layouts."""
    if unimodular is None:
        unimodular = rng.random() < 0.5
    if unimodular:
        zs = np.exp(1j * np.sort(rng.choice(4096, size=n, replace=False)) * 2 * np.pi / 4096)
    else:
        zs = rng.normal(size=n) + 1j * rng.normal(size=n)
    nodes = []
    for z in zs:
        if rng.random() < p_inf:
            nodes.append(InterpolationNode(z, 0, 1))
        else:
            w = rng.normal() + 1j * rng.normal()
            nodes.append(InterpolationNode(z, 1, -w))
    return InterpolationProblem(nodes)


def brute_force_height(problem, rtol=1e-9):
    """Smallest h with a nontrivial nullspace, from a full sweep with an independent nullspace routine."""
    n = problem.n
    A = problem.unit_coefficients()
    zs = problem.zs
    found = []
    for h in range(0, 2 * n + 2):
        # column t: e_t evaluated against each node, built without the package's helper
        cols = []
        for t in range(h + 1):
            k = t // 2
            coef = A[:, 0] if t % 2 == 0 else A[:, 1]
            cols.append(coef * zs**k)
        M = np.column_stack(cols)
        if scipy.linalg.null_space(M, rcond=rtol).shape[1] > 0:
            found.append(h)
    return min(found)


def dense_eigvals(C):
    from cmvmisp.cmv import sort_by_argument

    return sort_by_argument(np.linalg.eigvals(C))


def set_distance(a, b):
    """Hausdorff distance between two finite point sets."""
    a, b = np.asarray(a), np.asarray(b)
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())
