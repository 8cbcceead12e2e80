"""Real orthonormal spherical harmonics on S^2 as Cartesian polynomials.

``Y_l^m(w) = N_lm P_l^{(m)}(z) Re((x + i y)^m)`` for ``m >= 0`` and the
imaginary part (with ``|m|``) for ``m < 0``, where ``P_l^{(m)}`` is the m-th
derivative of the Legendre polynomial. No Condon-Shortley phase.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import legendre


def _norm(ell: int, m: int) -> float:
    am = abs(m)
    c = (2 * ell + 1) / (4.0 * math.pi) * math.factorial(ell - am) / math.factorial(ell + am)
    return math.sqrt(c) * (math.sqrt(2.0) if m != 0 else 1.0)


def real_sph_harm(ell: int, m: int, omega: np.ndarray, gradient: bool = False):
    """Value (and tangential gradient, shape ``(..., 3)``) of ``Y_l^m`` at unit vectors ``omega``."""
    if ell < 0 or abs(m) > ell:
        raise ValueError(f"invalid harmonic index ({ell}, {m})")
    omega = np.asarray(omega, dtype=float)
    x, y, z = omega[..., 0], omega[..., 1], omega[..., 2]
    am = abs(m)
    base = np.zeros(ell + 1)
    base[ell] = 1.0
    dm = legendre.legder(base, am) if am else base
    pz = legendre.legval(z, dm)
    w = (x + 1j * y) ** am
    part = np.real if m >= 0 else np.imag
    N = _norm(ell, m)
    val = N * pz * part(w)
    if not gradient:
        return val
    dpz = legendre.legval(z, legendre.legder(dm)) if ell > am else np.zeros_like(z)
    wm1 = am * (x + 1j * y) ** (am - 1) if am else np.zeros_like(w)
    g = np.stack([N * pz * part(wm1), N * pz * part(1j * wm1), N * dpz * part(w)], axis=-1)
    # project the ambient gradient of the polynomial extension onto the tangent plane
    g = g - np.sum(g * omega, axis=-1, keepdims=True) * omega
    return val, g
