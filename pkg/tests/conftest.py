"""Shared fixtures: small problems, grids, and reusable solver runs."""

import numpy as np
import pytest

from oswr import (DecompositionSpec, ParabolicProblem, build_grid,
                  problem_preset, snap, solve_global)


@pytest.fixture(scope="session")
def heat1d_problem():
    return problem_preset("heat1d")


@pytest.fixture(scope="session")
def heat1d_grid(heat1d_problem):
    return build_grid(heat1d_problem.domain, 41, 20)


@pytest.fixture(scope="session")
def heat1d_oracle(heat1d_problem, heat1d_grid):
    return solve_global(heat1d_problem, heat1d_grid)


@pytest.fixture(scope="session")
def heat1d_layout(heat1d_problem, heat1d_grid):
    spec = DecompositionSpec.uniform(heat1d_problem.domain, 2, 0.2)
    return snap(spec, heat1d_grid)


def make_zero_problem(base: ParabolicProblem) -> ParabolicProblem:
    """Same domain/coefficients, but homogeneous data (zero fixed point)."""
    zero = lambda t, *x: np.zeros(np.broadcast(t, *x).shape)
    return ParabolicProblem(domain=base.domain, coeffs=base.coeffs,
                            f=zero, g=zero)


@pytest.fixture(scope="session")
def zero_problem(heat1d_problem):
    return make_zero_problem(heat1d_problem)
