"""Finite-difference cross-check for the N = 2 dynamical-boundary problems.

The bulk heat equation is discretised with the standard 5-point stencil on
a uniform rectangle [-Lx, Lx] x [0, Lz]; homogeneous Dirichlet conditions
close the far sides, so domains must be large enough that the exact
solution's tails are negligible there.  The dynamical boundary line is
advanced together with the bulk.

Two one-sided second-order discretisations of the wall flux are provided:

* ``compact`` (default): the ghost-free form obtained by eliminating the
  O(h) error of the two-point flux with the interior equation itself.
  It shifts the wall capacity by eps*h/2 (the trapezoidal half-cell) and
  the surface diffusivity by h/2, couples only the first interior row,
  and conserves the discrete total mass to round-off.
* ``wide``: the plain three-point formula (-3u0 + 4u1 - u2)/(2h).  Same
  formal order, but the flux does not telescope against the bulk stencil
  and the discrete mass drifts at O(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import solve_banded

from .data import InitialData, boundary_value, interior_value
from .kernels import Params

__all__ = ["FdGrid", "FdResult", "SchemeError", "fd_solve", "discrete_mass", "compare"]


class SchemeError(RuntimeError):
    """Time stepping became unstable."""


@dataclass(frozen=True)
class FdGrid:
    """Discretisation of the truncated half-plane."""

    Lx: float = 8.0
    Lz: float = 8.0
    nx: int = 256
    nz: int = 256
    dt: float = 1e-3
    scheme: str = "crank_nicolson"
    flux: str = "compact"

    def __post_init__(self):
        if self.Lx <= 0 or self.Lz <= 0 or self.nx < 4 or self.nz < 4:
            raise ValueError("degenerate grid")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.scheme not in ("crank_nicolson", "imex_euler"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.flux not in ("compact", "wide"):
            raise ValueError(f"unknown flux {self.flux!r}")

    @property
    def hx(self) -> float:
        return 2.0 * self.Lx / self.nx

    @property
    def hz(self) -> float:
        return self.Lz / self.nz

    def x_nodes(self) -> np.ndarray:
        return -self.Lx + self.hx * np.arange(self.nx + 1)

    def z_nodes(self) -> np.ndarray:
        return self.hz * np.arange(self.nz + 1)


@dataclass
class FdResult:
    grid: FdGrid
    params: Params
    times: list
    fields: list          # full (nz+1, nx+1) arrays, row 0 = boundary line
    masses: list = field(default_factory=list)

    def field_at(self, t: float) -> np.ndarray:
        for tt, f in zip(self.times, self.fields):
            if abs(tt - t) < 1e-12:
                return f
        raise KeyError(f"no snapshot stored at t={t}")


def _capacities(p: Params, grid: FdGrid):
    """(boundary capacity, boundary tangential diffusivity) per flux mode."""
    if grid.flux == "compact":
        return p.delta + p.epsilon * grid.hz / 2.0, p.kappa + grid.hz / 2.0
    return p.delta, p.kappa


def _assemble(p: Params, grid: FdGrid):
    """Sparse operator L and capacity diagonal M for M du/dt = L u.

    Unknowns: interior columns j = 1..nx-1 at rows i = 0..nz-1 (row 0 is
    the boundary line; i = nz and j in {0, nx} are clamped to zero).
    """
    nx, nz = grid.nx, grid.nz
    hx2, hz = grid.hx**2, grid.hz
    hz2 = hz * hz
    ncol = nx - 1
    n = nz * ncol

    def k(i, j):
        return i * ncol + (j - 1)

    rows, cols, vals = [], [], []
    mdiag = np.empty(n)
    cap0, kap0 = _capacities(p, grid)

    def add(a, b, v):
        rows.append(a)
        cols.append(b)
        vals.append(v)

    for j in range(1, nx):
        # boundary line row
        a = k(0, j)
        mdiag[a] = cap0
        if grid.flux == "compact":
            add(a, a, -2.0 * kap0 / hx2 - 1.0 / hz)  # face flux (u1-u0)/hz
            add(a, k(1, j), 1.0 / hz)
        else:
            add(a, a, -2.0 * kap0 / hx2 - 3.0 / (2.0 * hz))
            add(a, k(1, j), 4.0 / (2.0 * hz))
            add(a, k(2, j), -1.0 / (2.0 * hz))
        if j > 1:
            add(a, k(0, j - 1), kap0 / hx2)
        if j < nx - 1:
            add(a, k(0, j + 1), kap0 / hx2)
        # bulk rows
        for i in range(1, nz):
            a = k(i, j)
            mdiag[a] = p.epsilon
            add(a, a, -2.0 / hx2 - 2.0 / hz2)
            if j > 1:
                add(a, k(i, j - 1), 1.0 / hx2)
            if j < nx - 1:
                add(a, k(i, j + 1), 1.0 / hx2)
            add(a, k(i - 1, j), 1.0 / hz2)
            if i < nz - 1:
                add(a, k(i + 1, j), 1.0 / hz2)
    L = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return L, mdiag


def _initial_state(p: Params, data: InitialData, grid: FdGrid) -> np.ndarray:
    xs = grid.x_nodes()
    zs = grid.z_nodes()
    u = np.zeros((grid.nz + 1, grid.nx + 1))
    off = np.abs(xs[None, 1:-1] - data.interior.center)
    if data.interior.kind != "zero":
        u[1:-1, 1:-1] = interior_value(data.interior, off, zs[1:-1, None], p.dim)
    offb = np.abs(xs[1:-1] - data.boundary.center)
    u[0, 1:-1] = boundary_value(data.boundary, offb, p.dim)
    return u


def discrete_mass(p: Params, grid: FdGrid, u: np.ndarray) -> float:
    """eps-weighted bulk mass plus capacity-weighted boundary mass (the
    discrete counterpart of the conservation identity; bulk sum uses the
    trapezoidal half-cell at the wall, which is where the compact flux
    stores it)."""
    cap0, _ = _capacities(p, grid)
    bulk = p.epsilon * grid.hx * grid.hz * float(np.sum(u[1:-1, 1:-1]))
    line = cap0 * grid.hx * float(np.sum(u[0, 1:-1]))
    return bulk + line


def _step_imex(p, grid, u):
    """One IMEX step: normal direction implicit, tangential explicit."""
    nx, nz = grid.nx, grid.nz
    hx2, hz = grid.hx**2, grid.hz
    hz2 = hz * hz
    dt = grid.dt
    cap0, kap0 = _capacities(p, grid)
    un = u.copy()
    # explicit tangential pieces
    dxx = np.zeros_like(u)
    dxx[:, 1:-1] = (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / hx2
    nrow = nz  # rows 0..nz-1 unknown per column
    if grid.flux == "compact":
        ab = np.zeros((3, nrow))
        rhs = np.empty(nrow)
        for j in range(1, nx):
            # row 0: cap0/dt u0+ + (u0+ - u1+)/hz2*hz = cap0/dt u0 + kap0 dxx
            ab[:] = 0.0
            ab[1, 0] = cap0 / dt + 1.0 / hz
            ab[0, 1] = -1.0 / hz
            rhs[0] = cap0 / dt * u[0, j] + kap0 * dxx[0, j]
            ab[1, 1:] = p.epsilon / dt + 2.0 / hz2
            ab[0, 2:] = -1.0 / hz2
            ab[2, 0:nrow - 1] = -1.0 / hz2
            rhs[1:] = p.epsilon / dt * u[1:nz, j] + dxx[1:nz, j]
            # clamped top row (i = nz) contributes nothing
            sol = solve_banded((1, 1), ab, rhs, overwrite_ab=True, overwrite_b=True)
            un[:nz, j] = sol
    else:
        # wide flux couples rows 0..2: bandwidth (1, 2)
        ab = np.zeros((4, nrow))
        rhs = np.empty(nrow)
        for j in range(1, nx):
            ab[:] = 0.0
            ab[2, 0] = cap0 / dt + 3.0 / (2.0 * hz)
            ab[1, 1] = -4.0 / (2.0 * hz)
            ab[0, 2] = 1.0 / (2.0 * hz)
            rhs[0] = cap0 / dt * u[0, j] + kap0 * dxx[0, j]
            ab[2, 1:] = p.epsilon / dt + 2.0 / hz2
            ab[1, 2:] = -1.0 / hz2
            ab[3, 0:nrow - 1] = -1.0 / hz2
            rhs[1:] = p.epsilon / dt * u[1:nz, j] + dxx[1:nz, j]
            sol = solve_banded((1, 2), ab, rhs, overwrite_ab=True, overwrite_b=True)
            un[:nz, j] = sol
    un[nz, :] = 0.0
    un[:, 0] = 0.0
    un[:, -1] = 0.0
    return un


def fd_solve(p: Params, data: InitialData, grid: FdGrid, t_end: float,
             snapshots=None) -> FdResult:
    """March the coupled bulk/boundary system to ``t_end``.

    ``snapshots`` is a list of times at which fields are stored (always
    includes ``t_end``); each must be a multiple of dt.
    """
    if p.dim != 2:
        raise ValueError("the finite-difference oracle is two-dimensional")
    nsteps = int(round(t_end / grid.dt))
    if abs(nsteps * grid.dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError("t_end must be a multiple of dt")
    want = sorted(set([round(t / grid.dt) for t in (snapshots or [])] + [nsteps]))
    for w in want:
        if w < 0 or w > nsteps:
            raise ValueError("snapshot outside [0, t_end]")
    u = _initial_state(p, data, grid)
    res = FdResult(grid, p, [], [])
    limit = 10.0 * max(1.0, float(np.max(np.abs(u))))

    if grid.scheme == "crank_nicolson":
        L, mdiag = _assemble(p, grid)
        M = sp.diags(mdiag / grid.dt)
        lhs = (M - 0.5 * L).tocsc()
        rhs_op = (M + 0.5 * L).tocsr()
        lu = spla.splu(lhs)
        vec = u[:grid.nz, 1:-1].reshape(-1)
        for step in range(1, nsteps + 1):
            vec = lu.solve(rhs_op @ vec)
            if step % 50 == 0 or step == nsteps:
                mx = float(np.max(np.abs(vec)))
                if not np.isfinite(mx) or mx > limit:
                    raise SchemeError(f"instability detected at step {step}")
            if step in want:
                u = np.zeros_like(u)
                u[:grid.nz, 1:-1] = vec.reshape(grid.nz, grid.nx - 1)
                res.times.append(step * grid.dt)
                res.fields.append(u.copy())
                res.masses.append(discrete_mass(p, grid, u))
    else:
        for step in range(1, nsteps + 1):
            u = _step_imex(p, grid, u)
            if step % 50 == 0 or step == nsteps:
                mx = float(np.max(np.abs(u)))
                if not np.isfinite(mx) or mx > limit:
                    raise SchemeError(f"instability detected at step {step}")
            if step in want:
                res.times.append(step * grid.dt)
                res.fields.append(u.copy())
                res.masses.append(discrete_mass(p, grid, u))
    return res


def compare(kernel_values: np.ndarray, fd_values: np.ndarray, scale: float | None = None):
    """Sup and L2 relative discrepancies between two fields on the same
    probe window; ``scale`` defaults to the sup of the kernel values."""
    kernel_values = np.asarray(kernel_values, dtype=float)
    fd_values = np.asarray(fd_values, dtype=float)
    if kernel_values.shape != fd_values.shape:
        raise ValueError("mismatched probe windows")
    if scale is None:
        scale = float(np.max(np.abs(kernel_values)))
    if scale == 0.0:
        scale = 1.0
    diff = kernel_values - fd_values
    sup = float(np.max(np.abs(diff))) / scale
    l2 = float(np.sqrt(np.mean(diff**2))) / scale
    return sup, l2
