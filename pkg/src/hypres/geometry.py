"""Warped-product geometry of hyperbolic space H^n_kappa.

The metric is ``dr^2 + s_kappa(r)^2 h`` with ``s_kappa(r) = sinh(kappa r)/kappa``
and ``h`` the round metric on S^{n-1}; ``kappa = 0`` is flat space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# below this value of kappa*r the warp is evaluated from its Taylor series
_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class HyperbolicModel:
    """Hyperbolic space of curvature ``-kappa**2`` and dimension ``dim``."""

    kappa: float
    dim: int = 3

    def __post_init__(self):
        if not math.isfinite(self.kappa) or self.kappa < 0:
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def euclidean(self) -> bool:
        return self.kappa == 0.0


@dataclass(frozen=True)
class PolarPoint:
    """A point ``(r, omega)`` in geodesic polar coordinates about the origin."""

    r: float
    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
            raise ValueError("omega must be a unit vector")
        object.__setattr__(self, "omega", omega)


def warp(model: HyperbolicModel, r):
    """Return ``s_kappa(r)``; accepts scalars or arrays."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    k = model.kappa
    if k == 0.0:
        out = r.copy()
    else:
        x = k * r
        small = np.abs(x) < _SERIES_CUTOFF
        with np.errstate(over="ignore"):
            out = np.where(small, r * (1.0 + x * x / 6.0 + x**4 / 120.0), np.sinh(x) / k)
    return out if out.ndim else float(out)


def warp_derivative(model: HyperbolicModel, r):
    """Return ``s_kappa'(r) = cosh(kappa r)``."""
    r = np.asarray(r, dtype=float)
    out = np.cosh(model.kappa * r)
    return out if out.ndim else float(out)


def _half_chord_sq(o1, o2):
    # (1 - cos gamma) = |o1 - o2|^2 / 2, without the arccos round-off near 0
    diff = np.asarray(o1, dtype=float) - np.asarray(o2, dtype=float)
    return 0.5 * np.sum(diff * diff, axis=-1)


def _asinh_over_x(x):
    x = np.asarray(x, dtype=float)
    small = x < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.arcsinh(safe) / safe)


def distance_from_polar(model: HyperbolicModel, r1, o1, r2, o2):
    """Geodesic distance between ``(r1, o1)`` and ``(r2, o2)``, vectorized.

    With ``h = (cosh(kd) - 1) / (2 k^2) = s(|r1-r2|/2)^2 + s(r1) s(r2)(1 - cos g) / 2``
    the distance is ``2 asinh(k sqrt(h)) / k``. Both steps are written through
    ``s`` and ``asinh(x)/x`` so that nearby points and tiny ``kappa`` keep full
    relative precision; ``kappa = 0`` gives the Euclidean law of cosines.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    one_minus_cos = _half_chord_sq(o1, o2)
    half = np.asarray(warp(model, 0.5 * np.abs(r1 - r2)))
    h = half * half + 0.5 * np.asarray(warp(model, r1)) * np.asarray(warp(model, r2)) * one_minus_cos
    root = np.sqrt(np.maximum(h, 0.0))
    return 2.0 * root * _asinh_over_x(model.kappa * root)


def geodesic_distance(model: HyperbolicModel, p: PolarPoint, q: PolarPoint) -> float:
    """Geodesic distance by the hyperbolic (or Euclidean) law of cosines."""
    return float(distance_from_polar(model, p.r, p.omega, q.r, q.omega))


def angle_between(o1, o2) -> float:
    """Angle between two unit vectors, clamped against round-off."""
    c = float(np.dot(o1, o2))
    return math.acos(min(1.0, max(-1.0, c)))


def harmonic_dimension(n: int, ell: int) -> int:
    """Dimension of the degree-``ell`` spherical harmonics on S^{n-1}."""
    if n < 2 or ell < 0:
        raise ValueError(f"need n >= 2 and ell >= 0, got n={n}, ell={ell}")
    if ell == 0:
        return 1
    if n == 2:
        return 2
    return (2 * ell + n - 2) * math.factorial(ell + n - 3) // (math.factorial(ell) * math.factorial(n - 2))


def surface_measure_density(model: HyperbolicModel, f_value, grad_h_f_sq):
    """Density of the induced surface measure of ``r = f(omega)`` against ``dvol_h``.

    Parameters
    ----------
    f_value
        ``f(omega)``, must be positive.
    grad_h_f_sq
        ``|grad_h f|_h^2`` at the same directions.
    """
    f_value = np.asarray(f_value, dtype=float)
    if np.any(f_value <= 0):
        raise ValueError("boundary radius must be positive")
    s = np.asarray(warp(model, f_value), dtype=float)
    out = s ** (model.dim - 1) * np.sqrt(1.0 + np.asarray(grad_h_f_sq, dtype=float) / (s * s))
    return out if out.ndim else float(out)
