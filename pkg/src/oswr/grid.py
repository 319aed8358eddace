"""Uniform space-time grid and backward-Euler step assembly.

One implicit step solves  (I/dt + L_h(t_next)) u_next = u_prev/dt + f(t_next)
with L_h the centered second-order discretization of
-sum a_ij d2/dx_i dx_j + sum b_i d/dx_i + c.  The mixed derivative (n=2)
uses the four-corner centered cross stencil.  Robin faces along the
decomposed axis are closed by ghost-node elimination, which keeps the
boundary rows second-order accurate.

Unknowns are all nodes of the (local) box, ordered axis-major
(index = i_axis * ncross + j_cross); Dirichlet nodes carry identity rows so
the band structure is uniform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import BadResolution, SingularSystem
from .problem import CoefficientSet, DomainSpec, ParabolicProblem


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Tensor grid on Omega x (0, T); nx_cross is 1 for n=1."""

    domain: DomainSpec
    nx_axis: int
    nt: int
    nx_cross: int = 1

    @property
    def hx_axis(self) -> float:
        return (self.domain.beta - self.domain.alpha) / (self.nx_axis - 1)

    @property
    def hx_cross(self) -> float:
        if self.domain.n == 1:
            return 0.0
        lo, hi = self.domain.cross
        return (hi - lo) / (self.nx_cross - 1)

    @property
    def dt(self) -> float:
        return self.domain.T / self.nt

    def axis_nodes(self) -> np.ndarray:
        return self.domain.alpha + self.hx_axis * np.arange(self.nx_axis)

    def cross_nodes(self) -> np.ndarray:
        if self.domain.n == 1:
            return np.zeros(1)
        return self.domain.cross[0] + self.hx_cross * np.arange(self.nx_cross)

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.nt + 1)


def build_grid(domain: DomainSpec, nx_axis: int, nt: int,
               nx_cross: Optional[int] = None) -> SpaceTimeGrid:
    if nx_axis < 3:
        raise BadResolution("nx_axis must be at least 3")
    if nt < 1:
        raise BadResolution("nt must be at least 1")
    if domain.n == 2:
        if nx_cross is None or nx_cross < 3:
            raise BadResolution("nx_cross must be at least 3 for n=2")
    else:
        nx_cross = 1
    return SpaceTimeGrid(domain=domain, nx_axis=nx_axis, nt=nt, nx_cross=nx_cross)


def eval_nodes(fn, n: int, t: float, axis: np.ndarray, cross: np.ndarray) -> np.ndarray:
    """Evaluate a space-time callable on a node box, returning (m, ncross)."""
    m, J = len(axis), len(cross)
    if n == 1:
        vals = np.asarray(fn(t, axis), dtype=float)
        return np.broadcast_to(vals, (m,)).reshape(m, 1).copy()
    vals = np.asarray(fn(t, cross[None, :], axis[:, None]), dtype=float)
    return np.broadcast_to(vals, (m, J)).copy()


@dataclass(frozen=True)
class FaceClosure:
    """Closure of one axis face for a single time step.

    kind 'dirichlet': values are prescribed solution values over the cross
    nodes.  kind 'robin': values are the data of  sign * du/dx_n + p u = data.
    """

    kind: str
    values: np.ndarray
    p: float = 0.0
    sign: float = 1.0


@dataclass(frozen=True)
class BoundaryClosure:
    low: FaceClosure
    high: FaceClosure
    lateral_low: Optional[np.ndarray] = None   # (m,) Dirichlet values at j=0
    lateral_high: Optional[np.ndarray] = None  # (m,) Dirichlet values at j=J-1


@dataclass
class BandedSystem:
    """Banded matrix in scipy solve_banded layout plus right-hand side."""

    bandwidth: int
    ab: np.ndarray
    rhs: np.ndarray

    def solve(self) -> np.ndarray:
        try:
            return scipy.linalg.solve_banded(
                (self.bandwidth, self.bandwidth), self.ab, self.rhs,
                check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from exc

    def to_dense(self) -> np.ndarray:
        n = self.rhs.size
        bw = self.bandwidth
        dense = np.zeros((n, n))
        for o in range(-bw, bw + 1):
            lo, hi = max(0, o), n + min(0, o)
            for c in range(lo, hi):
                dense[c - o, c] = self.ab[bw + o, c]
        return dense


def _clear_row(ab: np.ndarray, bw: int, r: int, n: int) -> None:
    for c in range(max(0, r - bw), min(n, r + bw + 1)):
        ab[bw + r - c, c] = 0.0


def _set(ab: np.ndarray, bw: int, r: int, c: int, v: float) -> None:
    ab[bw + r - c, c] = v


def assemble_step(coeffs: CoefficientSet, grid: SpaceTimeGrid, t_next: float,
                  bc: BoundaryClosure, u_prev: np.ndarray, f_vals: np.ndarray,
                  axis_lo: int = 0, axis_hi: Optional[int] = None) -> BandedSystem:
    """Assemble one implicit step on axis nodes [axis_lo, axis_hi].

    u_prev and f_vals have shape (m, ncross) over the local box; the
    returned system's solution is u_next flattened axis-major.
    """
    n = coeffs.n
    if axis_hi is None:
        axis_hi = grid.nx_axis - 1
    m = axis_hi - axis_lo + 1
    J = grid.nx_cross
    N = m * J
    h = grid.hx_axis
    dt = grid.dt

    a_ax = float(coeffs.a[n - 1][n - 1](t_next))
    b_ax = float(coeffs.b[n - 1](t_next))
    cc = float(coeffs.c(t_next))
    if n == 2:
        hc = grid.hx_cross
        a_cr = float(coeffs.a[0][0](t_next))
        a_mx = float(coeffs.a[0][1](t_next))
        b_cr = float(coeffs.b[0](t_next))
        bw = J + 1
    else:
        hc = np.inf  # cross terms vanish below
        a_cr = a_mx = b_cr = 0.0
        bw = 1

    diag = 1.0 / dt + cc + 2.0 * a_ax / h ** 2 + (2.0 * a_cr / hc ** 2 if n == 2 else 0.0)
    up_ax = -a_ax / h ** 2 + b_ax / (2.0 * h)
    dn_ax = -a_ax / h ** 2 - b_ax / (2.0 * h)
    if n == 2:
        up_cr = -a_cr / hc ** 2 + b_cr / (2.0 * hc)
        dn_cr = -a_cr / hc ** 2 - b_cr / (2.0 * hc)
        corner = -a_mx / (2.0 * h * hc)  # sign for (i+1,j+1) and (i-1,j-1)
    else:
        up_cr = dn_cr = corner = 0.0

    ab = np.zeros((2 * bw + 1, N))
    rhs = (u_prev / dt + f_vals).reshape(N).astype(float)

    # Constant diagonals (boundary rows are overwritten afterwards).
    ab[bw, :] = diag
    ab[bw - J, J:] = up_ax
    ab[bw + J, :-J] = dn_ax
    if n == 2:
        ab[bw - 1, 1:] = up_cr
        ab[bw + 1, :-1] = dn_cr
        ab[bw - (J + 1), J + 1:] = corner
        ab[bw + (J + 1), :-(J + 1)] = corner
        ab[bw - (J - 1), J - 1:] = -corner
        ab[bw + (J - 1), :-(J - 1)] = -corner

    def patch_dirichlet(r: int, value: float) -> None:
        _clear_row(ab, bw, r, N)
        _set(ab, bw, r, r, 1.0)
        rhs[r] = value

    # Lateral faces (n=2): Dirichlet along the whole axis range, corners
    # included (lateral data wins at corners).
    j_interior = range(1, J - 1) if n == 2 else range(J)
    if n == 2:
        for i in range(m):
            patch_dirichlet(i * J, float(bc.lateral_low[i]))
            patch_dirichlet(i * J + J - 1, float(bc.lateral_high[i]))

    def patch_axis_face(face: FaceClosure, low: bool) -> None:
        i0 = 0 if low else m - 1
        inner = 1 if low else m - 2  # axis neighbor kept in the stencil
        vals = np.atleast_1d(np.asarray(face.values, dtype=float))
        if vals.shape != (J,):
            raise ValueError("face closure values must have one entry per cross node")
        if face.kind == "dirichlet":
            for j in j_interior:
                patch_dirichlet(i0 * J + j, vals[j])
            return
        if face.kind != "robin":
            raise ValueError(f"unknown face closure kind '{face.kind}'")
        p, s = face.p, face.sign
        # Ghost elimination: s*(u_inner - u_ghost)/(2h) + p*u_face = data
        # (low face; mirrored for the high face).
        drift = -2.0 * a_ax * p / (s * h) if low else 2.0 * a_ax * p / (s * h)
        face_diag = diag + drift - b_ax * p / s
        for j in j_interior:
            r = i0 * J + j
            _clear_row(ab, bw, r, N)
            _set(ab, bw, r, r, face_diag)
            _set(ab, bw, r, inner * J + j, -2.0 * a_ax / h ** 2)
            if n == 2:
                _set(ab, bw, r, r + 1, up_cr + a_mx * p / (s * hc))
                _set(ab, bw, r, r - 1, dn_cr - a_mx * p / (s * hc))
            data_coef = (2.0 * a_ax / (s * h) + b_ax / s) if low else \
                        (2.0 * a_ax / (s * h) - b_ax / s)
            rhs[r] = (u_prev.reshape(m, J)[i0, j] / dt + f_vals.reshape(m, J)[i0, j]
                      + (-data_coef if low else data_coef) * vals[j])
            if n == 2:
                rhs[r] += (a_mx / (s * hc)) * (vals[j + 1] - vals[j - 1])

    patch_axis_face(bc.low, low=True)
    patch_axis_face(bc.high, low=False)

    return BandedSystem(bandwidth=bw, ab=ab, rhs=rhs)


def march(problem: ParabolicProblem, grid: SpaceTimeGrid,
          closures: Callable[[int, float], Tuple[FaceClosure, FaceClosure]],
          axis_lo: int = 0, axis_hi: Optional[int] = None) -> np.ndarray:
    """Backward-Euler march on an axis node range; returns (nt+1, m, ncross).

    `closures(k, t_next)` supplies the low/high axis-face closures for step
    k; lateral faces (n=2) always carry Dirichlet data g.
    """
    n = problem.domain.n
    if axis_hi is None:
        axis_hi = grid.nx_axis - 1
    axis = grid.axis_nodes()[axis_lo:axis_hi + 1]
    cross = grid.cross_nodes()
    m, J = len(axis), len(cross)
    times = grid.times()

    u = np.empty((grid.nt + 1, m, J))
    u[0] = eval_nodes(problem.g, n, 0.0, axis, cross)
    for k in range(1, grid.nt + 1):
        t = times[k]
        f_vals = eval_nodes(problem.f, n, t, axis, cross)
        low, high = closures(k, t)
        if n == 2:
            lat_lo = np.asarray(problem.g(t, cross[0], axis), dtype=float)
            lat_hi = np.asarray(problem.g(t, cross[-1], axis), dtype=float)
            lat_lo = np.broadcast_to(lat_lo, (m,))
            lat_hi = np.broadcast_to(lat_hi, (m,))
        else:
            lat_lo = lat_hi = None
        bc = BoundaryClosure(low=low, high=high, lateral_low=lat_lo, lateral_high=lat_hi)
        system = assemble_step(problem.coeffs, grid, t, bc, u[k - 1], f_vals,
                               axis_lo=axis_lo, axis_hi=axis_hi)
        u[k] = system.solve().reshape(m, J)
    return u
