"""Closed-form elementary kernels on the half-space.

All kernels depend on the tangential variables only through the offset
|x' - y'|, so every function here accepts plain radii (or signed first-axis
coordinates) next to full vectors.  Exponentials are evaluated in log space
and flushed to exact zero below exp(-745) to keep ratio-based checks free
of NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LOG_FLUSH",
    "Params",
    "HalfSpacePoint",
    "exp_flush",
    "free_heat_kernel",
    "free_heat_radial",
    "dirichlet_kernel",
    "neumann_kernel",
    "poisson_kernel",
    "gaussian_interval_mass",
    "sphere_area",
]

LOG_FLUSH = -745.0


@dataclass(frozen=True)
class Params:
    """Model parameters: bulk time scale, boundary capacity, surface
    diffusivity and space dimension."""

    epsilon: float
    delta: float
    kappa: float = 0.0
    dim: int = 2

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.dim < 2:
            raise ValueError("dim must be at least 2")


@dataclass(frozen=True)
class HalfSpacePoint:
    """Point of the closed half-space.

    ``tangential`` is either a full (N-1) vector or a signed coordinate on
    the first tangential axis (lossless for kernel evaluation because every
    kernel sees only |x' - y'|).  ``normal`` is the distance to the
    boundary and must be nonnegative.
    """

    tangential: float | tuple | np.ndarray
    normal: float

    def __post_init__(self):
        if self.normal < 0:
            raise ValueError("normal coordinate must be nonnegative")

    def tangential_vector(self, dim: int) -> np.ndarray:
        v = np.atleast_1d(np.asarray(self.tangential, dtype=float))
        if v.size == dim - 1:
            return v
        if v.size == 1:
            out = np.zeros(dim - 1)
            out[0] = v[0]
            return out
        raise ValueError(f"tangential part has size {v.size}, expected {dim - 1}")


def tangential_offset(x: HalfSpacePoint, y: HalfSpacePoint, dim: int) -> float:
    return float(np.linalg.norm(x.tangential_vector(dim) - y.tangential_vector(dim)))


def exp_flush(logv):
    """exp with hard flush to zero below the double-precision floor."""
    logv = np.asarray(logv, dtype=float)
    out = np.zeros_like(logv)
    mask = logv >= LOG_FLUSH
    np.exp(logv, out=out, where=mask)
    bad = np.isnan(logv)
    if bad.any():
        out = np.where(bad, np.nan, out)
    if out.ndim == 0:
        return float(out)
    return out


def free_heat_radial(d: int, r, t):
    """Whole-space heat kernel of R^d at radius ``r`` and time ``t``.

    Vectorized over ``r`` and ``t`` (broadcast).  t must be positive.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("time must be positive")
    r = np.asarray(r, dtype=float)
    logv = -(d / 2.0) * np.log(4.0 * np.pi * t) - r * r / (4.0 * t)
    return exp_flush(logv)


def free_heat_kernel(d: int, x, t: float):
    """Whole-space heat kernel (4 pi t)^(-d/2) exp(-|x|^2 / 4t).

    ``x`` is a scalar radius or a length-d vector.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    xv = np.asarray(x, dtype=float)
    if xv.ndim == 1 and xv.size == d and d > 1:
        r = float(np.linalg.norm(xv))
    else:
        r = xv
    return free_heat_radial(d, r, t)


def dirichlet_kernel(x: HalfSpacePoint, y: HalfSpacePoint, t: float, dim: int):
    """Half-space heat kernel with absorbing boundary (reflection difference).

    Computed in the factored form: tangential Gaussian times the difference
    of the two 1-D normal Gaussians, which vanishes when either point sits
    on the boundary.
    """
    r = tangential_offset(x, y, dim)
    return dirichlet_radial(r, x.normal, y.normal, t, dim)


def dirichlet_radial(r, xn, yn, t, dim: int):
    tang = free_heat_radial(dim - 1, r, t)
    return tang * (free_heat_radial(1, np.asarray(xn) - yn, t)
                   - free_heat_radial(1, np.asarray(xn) + yn, t))


def neumann_kernel(x: HalfSpacePoint, y: HalfSpacePoint, t: float, dim: int):
    """Half-space heat kernel with reflecting boundary (reflection sum)."""
    r = tangential_offset(x, y, dim)
    return neumann_radial(r, x.normal, y.normal, t, dim)


def neumann_radial(r, xn, yn, t, dim: int):
    tang = free_heat_radial(dim - 1, r, t)
    return tang * (free_heat_radial(1, np.asarray(xn) - yn, t)
                   + free_heat_radial(1, np.asarray(xn) + yn, t))


def poisson_kernel(offset, height, dim: int):
    """Harmonic-extension kernel of the half-space.

    ``offset`` is the tangential offset |x' - y'| (scalar or array) and
    ``height`` the normal coordinate, which must be positive.
    """
    height = np.asarray(height, dtype=float)
    if np.any(height <= 0):
        raise ValueError("height must be positive")
    r = np.asarray(offset, dtype=float)
    c = math.pi ** (-dim / 2.0) * math.gamma(dim / 2.0)
    out = c * height * (r * r + height * height) ** (-dim / 2.0)
    if out.ndim == 0:
        return float(out)
    return out


def gaussian_interval_mass(x, lo, hi, t):
    """Integral of the 1-D heat kernel centred at ``x`` over [lo, hi]."""
    from scipy.special import erf

    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("time must be positive")
    s = 2.0 * np.sqrt(t)
    out = 0.5 * (erf((np.asarray(x) - lo) / s) - erf((np.asarray(x) - hi) / s))
    if np.ndim(out) == 0:
        return float(out)
    return out


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^(d+1): |S^d|."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)
