"""Solution operators for the dynamical-boundary problems and their limits.

Tags name the problem being solved:

========  ==========================================================
HDD       heat flow, diffusive dynamical boundary condition
HD        heat flow, non-diffusive dynamical condition (kappa = 0)
LDD       Laplace equation, diffusive dynamical condition
LD        Laplace equation, non-diffusive dynamical condition
HDN       heat flow, diffusive Neumann condition
HhN       heat flow, homogeneous Neumann condition
HD0       heat flow, homogeneous Dirichlet condition
HDpsi     heat flow, fixed Dirichlet boundary data
HDPsi     heat flow, Dirichlet data diffusing with capacity theta
LDpsi     harmonic extension of fixed boundary data
LDPsi     harmonic extension of diffusing boundary data
========  ==========================================================

Tangential integrals are eliminated in closed form through the data
family; what remains is one 1-D time integral for boundary data, a 2-D
(time x normal) integral for interior data against the exchange kernel,
and a 1-D normal integral for the reflected/absorbed part.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .data import (
    Boundary,
    InitialData,
    Interior,
    NormalProfile,
    UnsupportedDataError,
    boundary_value,
    tan_conv,
)
from .dynamic import (
    dirichlet_layer_batch,
    exchange_log_grid,
    exchange_weighted,
    gauss_layer_batch,
    hdn_batch,
)
from .kernels import (
    HalfSpacePoint,
    Params,
    exp_flush,
    dirichlet_radial,
    free_heat_radial,
)
from .quadrature import DEFAULT_SPEC, QuadResult, QuadSpec, integrate, tail_exponent

__all__ = [
    "PROBLEM_TAGS",
    "solve",
    "solve_grid",
    "boundary_trace",
    "witness_phi",
    "witness_response",
]

PROBLEM_TAGS = ("HDD", "HD", "LDD", "LD", "HDN", "HhN", "HD0",
                "HDpsi", "HDPsi", "LDpsi", "LDPsi")

_NEEDS_THETA = ("HDPsi", "LDPsi")
_BOUNDARY_ONLY = ("LDD", "LD", "LDpsi", "LDPsi")
_INTERIOR_ONLY = ("HDN", "HhN", "HD0")


class _Acc:
    """Error/convergence accumulator across the terms of one solve."""

    def __init__(self):
        self.err = 0.0
        self.converged = True
        self.nsub = 0

    def add(self, err, converged, nsub=0, weight=1.0):
        self.err += weight * float(np.max(err))
        self.converged = self.converged and converged
        self.nsub += nsub


def _tan_factory(data, offsets, dim):
    """tan_fn(T, idx) evaluating the closed tangential convolution of
    ``data`` at per-component offsets."""
    offsets = np.asarray(offsets, dtype=float)

    def fn(T, idx):
        return tan_conv(data, offsets[idx][None, :], T, dim)

    return fn


def _reflected_term(eps, dim, phi: Interior, off, xn, t, spec, sign, acc: _Acc):
    """Interior data against the absorbing (sign=-1) or reflecting
    (sign=+1) half-space kernel; tangential part closed, 1-D normal
    quadrature."""
    m = off.size
    if phi.kind == "zero":
        return np.zeros(m)
    T = t / eps
    lc = tail_exponent(spec)
    cut_kernel = float(np.max(xn)) + math.sqrt(4.0 * T * lc) + 1.0
    prof = phi.normal if phi.kind == "heat_gaussian" else None
    ycut = cut_kernel if prof is None else min(prof.support_cut(lc), cut_kernel)
    tanfac = np.asarray(tan_conv(phi, off, T, dim), dtype=float)

    def f(ys):
        k = free_heat_radial(1, xn[None, :] - ys[:, None], T) \
            + sign * free_heat_radial(1, xn[None, :] + ys[:, None], T)
        if prof is not None:
            k = k * prof.value(ys)[:, None]
        return k

    res = integrate(f, 0.0, ycut, spec)
    vals = np.atleast_1d(np.asarray(res.value))
    acc.add(np.abs(tanfac) * np.max(res.error_estimate), res.converged,
            res.subdivisions_used)
    return tanfac * vals


def _exchange_boundary_term(p, psi: Boundary, off, xn, t, spec, acc: _Acc):
    """Boundary data against the exchange kernel (no 1/eps weight)."""
    if psi.kind == "zero":
        return np.zeros(off.size)
    vals, errs, nsub, conv = exchange_weighted(
        p, xn, t, spec, _tan_factory(psi, off, p.dim))
    acc.add(errs, conv, nsub)
    return vals


def _profile_weight(phi: Interior):
    if phi.kind == "heat_gaussian":
        return phi.normal
    return None


def _exchange_interior_term(p, phi: Interior, off, xn, t, spec, acc: _Acc):
    """Interior data against the exchange kernel: 2-D (normal x time)
    quadrature with the tangential factor closed inside the time
    integral (no 1/delta weight)."""
    m = off.size
    if phi.kind == "zero":
        return np.zeros(m)
    lc = tail_exponent(spec)
    cut_kernel = float(np.max(xn)) + math.sqrt(4.0 * t * lc / p.epsilon) + 1.0
    prof = _profile_weight(phi)
    ycut = cut_kernel if prof is None else min(prof.support_cut(lc), cut_kernel)

    def outer(ys):
        n = ys.size
        s = (xn[None, :] + ys[:, None]).ravel()
        off_flat = np.broadcast_to(off[None, :], (n, m)).ravel()
        vals, errs, nsub, conv = exchange_weighted(
            p, s, t, spec, _tan_factory(phi, off_flat, p.dim))
        acc.add(errs, conv, nsub)
        h = vals.reshape(n, m)
        if prof is not None:
            h = h * prof.value(ys)[:, None]
        return h

    res = integrate(outer, 0.0, ycut, spec)
    acc.add(res.error_estimate, res.converged, res.subdivisions_used)
    return np.atleast_1d(np.asarray(res.value))


def _hdn_interior_term(p, phi: Interior, off, xn, t, spec, acc: _Acc):
    """Interior data against the diffusive-Neumann exchange part."""
    m = off.size
    if phi.kind == "zero":
        return np.zeros(m)
    lc = tail_exponent(spec)
    cut_kernel = float(np.max(xn)) + math.sqrt(4.0 * (t / p.epsilon) * lc) + 1.0
    prof = _profile_weight(phi)
    ycut = cut_kernel if prof is None else min(prof.support_cut(lc), cut_kernel)

    def outer(ys):
        n = ys.size
        s = (xn[None, :] + ys[:, None]).ravel()
        off_flat = np.broadcast_to(off[None, :], (n, m)).ravel()
        vals, errs, nsub, conv = hdn_batch(
            p.epsilon, p.kappa, p.dim, s, t, spec,
            _tan_factory(phi, off_flat, p.dim))
        acc.add(errs, conv, nsub)
        h = vals.reshape(n, m)
        if prof is not None:
            h = h * prof.value(ys)[:, None]
        return h

    res = integrate(outer, 0.0, ycut, spec)
    acc.add(res.error_estimate, res.converged, res.subdivisions_used)
    return np.atleast_1d(np.asarray(res.value))


def _dirichlet_layer_term(p, psi: Boundary, off, xn, t, theta, spec, acc: _Acc):
    """Boundary data carried into the bulk by the Dirichlet boundary
    layer; on the boundary itself the trace value is returned (times
    eps, cancelling the caller's 1/eps weight)."""
    m = off.size
    if psi.kind == "zero":
        return np.zeros(m)
    out = np.empty(m)
    on_bdry = xn <= 0.0
    if on_bdry.any():
        offb = off[on_bdry]
        if theta is None:
            trace = boundary_value(psi, offb, p.dim)
        else:
            trace = tan_conv(psi, offb, t / theta, p.dim)
        out[on_bdry] = p.epsilon * np.asarray(trace, dtype=float)
    if (~on_bdry).any():
        idx = np.nonzero(~on_bdry)[0]
        vals, errs, nsub, conv = dirichlet_layer_batch(
            p.epsilon, p.dim, xn[idx], t, theta, spec,
            _tan_factory(psi, off[idx], p.dim))
        acc.add(errs, conv, nsub)
        out[idx] = vals
    return out


def _harmonic_layer_term(dim, psi: Boundary, off, z, smoothing, spec, acc: _Acc):
    """Harmonic-extension layer with tangential pre-smoothing; at z = 0
    the trace of the (smoothed) data is returned."""
    m = off.size
    if psi.kind == "zero":
        return np.zeros(m)
    out = np.empty(m)
    at_bdry = z <= 0.0
    if at_bdry.any():
        offb = off[at_bdry]
        if smoothing > 0.0:
            out[at_bdry] = np.asarray(tan_conv(psi, offb, smoothing, dim), dtype=float)
        else:
            out[at_bdry] = np.asarray(boundary_value(psi, offb, dim), dtype=float)
    if (~at_bdry).any():
        idx = np.nonzero(~at_bdry)[0]
        vals, errs, nsub, conv = gauss_layer_batch(
            dim, z[idx], smoothing, spec, _tan_factory(psi, off[idx], dim))
        acc.add(errs, conv, nsub)
        out[idx] = vals
    return out


def _power_cutoff_term(p, phi: Interior, xp, xn, t, spec, acc: _Acc):
    """Interior data with radial power-law cutoff profile
    |y|^(-alpha) chi_{|y|<1} times the tangential Gaussian factor
    (N = 2): direct polar quadrature of the full kernel."""
    m = xp.size
    alpha = phi.normal.alpha

    def outer(thetas):
        n = thetas.size
        ct = np.cos(thetas)
        st = np.sin(thetas)

        def inner(rhos):
            kk = rhos.size
            y1 = rhos[:, None, None] * ct[None, :, None]
            yn = rhos[:, None, None] * st[None, :, None]
            off = np.abs(xp[None, None, :] - y1)
            s = xn[None, None, :] + yn
            logh, rel, _, conv = exchange_log_grid(
                p, off.reshape(kk, -1).ravel(), s.reshape(kk, -1).ravel(), t, spec)
            h = exp_flush(logh).reshape(kk, n, m)
            acc.add(0.0, conv)
            g0 = dirichlet_radial(off, xn[None, None, :], yn, t / p.epsilon, p.dim)
            tang = free_heat_radial(1, y1 - phi.center, phi.a)
            w = tang * rhos[:, None, None] ** (1.0 - alpha)
            return ((g0 + h / p.delta) * w).reshape(kk, n * m)

        res = integrate(inner, 0.0, 1.0, spec)
        acc.add(res.error_estimate, res.converged, res.subdivisions_used)
        return np.asarray(res.value).reshape(n, m)

    res = integrate(outer, 0.0, math.pi, spec)
    acc.add(res.error_estimate, res.converged, res.subdivisions_used)
    return np.atleast_1d(np.asarray(res.value))


def _validate(tag, p: Params, data: InitialData, theta):
    if tag not in PROBLEM_TAGS:
        raise ValueError(f"unknown problem tag {tag!r}")
    if tag in _NEEDS_THETA and (theta is None or theta <= 0):
        raise ValueError(f"{tag} requires theta > 0")
    if tag in _BOUNDARY_ONLY and data.interior.kind != "zero":
        raise UnsupportedDataError(f"{tag} admits boundary data only")
    if tag in _INTERIOR_ONLY and data.boundary.kind != "zero":
        raise UnsupportedDataError(f"{tag} admits interior data only")
    if data.interior.kind == "heat_gaussian" and data.interior.is_power_cutoff:
        if tag not in ("HDD", "HD") or p.dim != 2:
            raise UnsupportedDataError(
                "power-cutoff data is supported for HDD/HD with N = 2 only")
        if data.boundary.kind != "zero":
            raise UnsupportedDataError(
                "power-cutoff data requires zero boundary data")


def solve_grid(tag: str, p: Params, data: InitialData, xp, xn, t: float,
               spec: QuadSpec = DEFAULT_SPEC, theta: float | None = None):
    """Solution values on a grid of probe points at one time.

    ``xp`` are signed first-axis tangential coordinates, ``xn`` normal
    coordinates (arrays of equal length).  Returns (values, error,
    converged).
    """
    _validate(tag, p, data, theta)
    if t <= 0:
        raise ValueError("time must be positive")
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    xn = np.atleast_1d(np.asarray(xn, dtype=float))
    if xp.shape != xn.shape:
        raise ValueError("xp and xn must have matching shapes")
    if np.any(xn < 0):
        raise ValueError("normal coordinates must be nonnegative")
    phi, psi = data.interior, data.boundary
    off_i = np.abs(xp - phi.center) if phi.kind != "zero" else xp
    off_b = np.abs(xp - psi.center) if psi.kind != "zero" else xp
    acc = _Acc()

    if tag == "HD":
        return solve_grid("HDD", replace(p, kappa=0.0), data, xp, xn, t, spec)

    if tag in ("HDD",):
        if phi.kind == "heat_gaussian" and phi.is_power_cutoff:
            u = _power_cutoff_term(p, phi, xp, xn, t, spec, acc)
        else:
            u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, -1.0, acc)
            u = u + _exchange_interior_term(p, phi, off_i, xn, t, spec, acc) / p.delta
        u = u + _exchange_boundary_term(p, psi, off_b, xn, t, spec, acc) / p.epsilon
    elif tag == "HD0":
        u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, -1.0, acc)
    elif tag == "HhN":
        u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, +1.0, acc)
    elif tag == "HDN":
        u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, -1.0, acc)
        u = u + _hdn_interior_term(p, phi, off_i, xn, t, spec, acc)
    elif tag == "HDpsi":
        u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, -1.0, acc)
        u = u + _dirichlet_layer_term(p, psi, off_b, xn, t, None, spec, acc) / p.epsilon
    elif tag == "HDPsi":
        u = _reflected_term(p.epsilon, p.dim, phi, off_i, xn, t, spec, -1.0, acc)
        u = u + _dirichlet_layer_term(p, psi, off_b, xn, t, theta, spec, acc) / p.epsilon
    elif tag == "LDD":
        u = _harmonic_layer_term(p.dim, psi, off_b, xn + t / p.delta,
                                 p.kappa * t / p.delta, spec, acc)
    elif tag == "LD":
        u = _harmonic_layer_term(p.dim, psi, off_b, xn + t / p.delta, 0.0, spec, acc)
    elif tag == "LDpsi":
        u = _harmonic_layer_term(p.dim, psi, off_b, xn, 0.0, spec, acc)
    elif tag == "LDPsi":
        u = _harmonic_layer_term(p.dim, psi, off_b, xn, t / theta, spec, acc)
    else:  # pragma: no cover
        raise ValueError(tag)
    return u, acc.err, acc.converged


def solve(tag: str, p: Params, data: InitialData, x: HalfSpacePoint, t: float,
          spec: QuadSpec = DEFAULT_SPEC, theta: float | None = None) -> QuadResult:
    """Solution of the tagged problem at one space-time point."""
    xv = x.tangential_vector(p.dim)
    if p.dim > 2 and np.any(xv[1:] != 0.0):
        raise ValueError("probe points must lie on the first tangential axis")
    vals, err, conv = solve_grid(tag, p, data, [float(xv[0])], [x.normal], t,
                                 spec, theta)
    return QuadResult(float(vals[0]), err, 0, conv)


def boundary_trace(tag: str, p: Params, data: InitialData, xp, t: float,
                   spec: QuadSpec = DEFAULT_SPEC, theta: float | None = None):
    """Solution restricted to the boundary (normal coordinate zero)."""
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    return solve_grid(tag, p, data, xp, np.zeros_like(xp), t, spec, theta)


def witness_phi(epsilon: float, x: HalfSpacePoint, t: float, dim: int = 2) -> float:
    """Normal-derivative witness profile whose Lebesgue norms are known
    in closed form; vanishes on the boundary."""
    if t <= 0:
        raise ValueError("time must be positive")
    xv = x.tangential_vector(dim)
    rho2 = float(xv @ xv) + x.normal**2
    return float(epsilon * x.normal / (2.0 * t)
                 * free_heat_radial(dim, math.sqrt(rho2), t / epsilon))


def witness_response(p: Params, xp, xn, t: float,
                     spec: QuadSpec = DEFAULT_SPEC):
    """Action of the solution operator on the witness profile at time t
    (with zero boundary component).

    The absorbed part propagates the witness exactly (time shift t -> 2t);
    the exchange part is a 2-D quadrature against the witness profile,
    whose tangential factor is a Gaussian of parameter t/epsilon and whose
    normal factor is the Gaussian slope profile.
    """
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    xn = np.atleast_1d(np.asarray(xn, dtype=float))
    T = t / p.epsilon
    acc = _Acc()
    rho = np.hypot(xp, xn)
    direct = p.epsilon * xn / (4.0 * t) * free_heat_radial(p.dim, rho, 2.0 * T)
    phi_w = Interior("heat_gaussian", a=T,
                     normal=NormalProfile("gaussian_slope", b=T))
    ex = _exchange_interior_term(p, phi_w, np.abs(xp), xn, t, spec, acc)
    return direct + ex / p.delta, acc.err, acc.converged
