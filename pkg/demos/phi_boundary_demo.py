"""Where does the weighted error functional Phi peak?

For each sweep the error e = u_l^k - u is transformed to
eps = e exp(p x), differentiated along the axis (nu), and weighted:
Phi = nu^2 exp(-gamma x) varphi(t).  With a decaying time weight
varphi(t) = exp(-theta t) the maximum of Phi sits on the parabolic
boundary of every strip (interface planes or the t=0 slice); with
varphi = 1 small interior maxima can appear.  This script tabulates the
worst interior/boundary ratio over the first 20 sweeps for several theta.
"""

import warnings

import numpy as np

from oswr import (DecompositionSpec, InitialGuess, RobinParameter, WeightSpec,
                  build_grid, compute_error_fields, exchange, initial_traces,
                  phi_boundary_check, problem_preset, snap, solve_global,
                  sweep_once)

warnings.filterwarnings("ignore", message=".*snapped.*")


def worst_ratio(preset, count, theta, sweeps=20):
    problem = problem_preset(preset)
    grid = build_grid(problem.domain, 101, 50)
    oracle = solve_global(problem, grid)
    layout = snap(DecompositionSpec.uniform(problem.domain, count, 0.2), grid)
    p = RobinParameter(1.0)
    weights = WeightSpec(gamma=5.0, varphi=np.exp(-theta * grid.times()))
    traces = initial_traces(InitialGuess(), layout, grid, problem)
    worst = 0.0
    for _ in range(sweeps):
        sols = sweep_once(problem, grid, layout, traces, p)
        for sol in sols:
            fields = compute_error_fields(sol, oracle, p, weights, grid)
            res = phi_boundary_check(fields)
            if res.boundary_max > 0:
                worst = max(worst, res.interior_max / res.boundary_max)
        traces = exchange(sols, layout, grid, p, traces)
    return worst


if __name__ == "__main__":
    print("worst interior/boundary Phi ratio over 20 sweeps "
          "(< 1 means the boundary-maximum property holds)\n")
    print(f"{'case':>12} {'theta=0':>9} {'theta=6':>9} {'theta=10':>9}")
    for preset, count in (("heat1d", 2), ("heat1d", 3),
                          ("tvar1d", 2), ("tvar1d", 3)):
        ratios = [worst_ratio(preset, count, th) for th in (0.0, 6.0, 10.0)]
        print(f"{preset + ' I=' + str(count):>12} "
              + " ".join(f"{r:9.4f}" for r in ratios))
