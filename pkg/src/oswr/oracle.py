"""Monolithic reference solve on the undecomposed grid.

The global backward-Euler solution serves as the reference u in every error
functional, so iteration error is measured free of discretization error.
It deliberately reuses the same assembly path as the subdomain solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FaceClosure, SpaceTimeGrid, march
from .problem import ParabolicProblem


@dataclass(frozen=True)
class GlobalSolution:
    values: np.ndarray  # (nt+1, nx_axis, nx_cross)


def solve_global(problem: ParabolicProblem, grid: SpaceTimeGrid) -> GlobalSolution:
    """Backward-Euler march with Dirichlet closures (data g) on every face."""
    n = problem.domain.n
    cross = grid.cross_nodes()
    alpha, beta = problem.domain.alpha, problem.domain.beta

    def face_values(t, xn):
        if n == 1:
            return np.atleast_1d(np.asarray(problem.g(t, xn), dtype=float))
        vals = np.asarray(problem.g(t, cross, xn), dtype=float)
        return np.broadcast_to(vals, (grid.nx_cross,))

    def closures(k, t_next):
        low = FaceClosure(kind="dirichlet", values=face_values(t_next, alpha))
        high = FaceClosure(kind="dirichlet", values=face_values(t_next, beta))
        return low, high

    return GlobalSolution(values=march(problem, grid, closures))
