"""Exact resonances of geodesic balls in odd-dimensional H^n_kappa.

For ``n_eff = 2k + 1`` the outgoing radial solution is ``e^{i r sigma}`` times a
polynomial of degree ``k - 1`` in ``beta = i sigma / kappa``:

    Q_{k,R}(beta) = sum_j (coth(kappa R) - 1)^j / (2^j j!)
                    * prod_{l=1}^{j} (k(k-1) - l(l-1)) * prod_{m=j+1}^{k-1} (m - beta)

and the Dirichlet resonances of the ball of radius ``R`` are its zeros.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P

from .geometry import HyperbolicModel, harmonic_dimension
from .polyroots import cluster_roots, polynomial_roots
from .resonance import Resonance

logger = logging.getLogger(__name__)

# above this k the coefficients are accumulated in extended precision
_EXTENDED_K = 25
# roots this close to the real axis are diagnostics, never resonances
REAL_AXIS_GUARD = 1e-9


@dataclass(frozen=True)
class OutgoingPolynomial:
    """``Q_{k,R}`` as real ascending coefficients in ``beta = i sigma / kappa``."""

    k: int
    kappa: float
    R: float
    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, beta):
        return P.polyval(beta, self.coeffs)

    def roots_beta(self) -> np.ndarray:
        return polynomial_roots(self.coeffs)

    def sigma_roots(self) -> np.ndarray:
        return -1j * self.kappa * self.roots_beta()


def coth_minus_one(x):
    """``coth(x) - 1`` without cancellation for large ``x``."""
    return 2.0 / np.expm1(2.0 * np.asarray(x, dtype=float))


def _angular_products(k: int):
    # prod_{l=1}^{j} (k(k-1) - l(l-1)) / (2^j j!), j = 0..k-1, built incrementally
    out = [1.0]
    for j in range(1, k):
        out.append(out[-1] * (k * (k - 1) - j * (j - 1)) / (2.0 * j))
    return out


def _build_coeffs_double(k: int, x: float) -> np.ndarray:
    a = _angular_products(k)
    coeffs = np.zeros(k)
    tail = np.array([1.0])  # prod_{m=j+1}^{k-1} (m - beta), built from j = k-1 downwards
    xj = [x**j for j in range(k)]
    for j in range(k - 1, -1, -1):
        term = a[j] * xj[j] * tail
        coeffs[: term.size] += term
        if j > 0:
            tail = P.polymul(tail, [float(j), -1.0])
    return coeffs


def _build_coeffs_mp(k: int, x: float) -> np.ndarray:
    with mpmath.workdps(60):
        xm = mpmath.mpf(x)
        coeffs = [mpmath.mpf(0)] * k
        a = mpmath.mpf(1)
        tail = [mpmath.mpf(1)]
        terms = []
        for j in range(k):
            if j > 0:
                a = a * (k * (k - 1) - j * (j - 1)) / (2 * j)
            terms.append(a * xm**j)
        for j in range(k - 1, -1, -1):
            for i, t in enumerate(tail):
                coeffs[i] += terms[j] * t
            if j > 0:
                # multiply tail by (j - beta)
                new = [mpmath.mpf(0)] * (len(tail) + 1)
                for i, t in enumerate(tail):
                    new[i] += j * t
                    new[i + 1] -= t
                tail = new
        return np.array([float(c) for c in coeffs])


def build_outgoing_polynomial(model: HyperbolicModel, k: int, R: float) -> OutgoingPolynomial:
    """Coefficients of ``e^{-i R sigma} u_{2k+1}(R; sigma)`` in ``beta``."""
    if model.kappa <= 0:
        raise ValueError("kappa must be > 0; use hypres.euclid for the flat case")
    if k < 1 or R <= 0:
        raise ValueError(f"need k >= 1 and R > 0, got k={k}, R={R}")
    x = float(coth_minus_one(model.kappa * R))
    coeffs = _build_coeffs_double(k, x) if k <= _EXTENDED_K else _build_coeffs_mp(k, x)
    return OutgoingPolynomial(k=k, kappa=model.kappa, R=float(R), coeffs=coeffs)


def evaluate_outgoing(model: HyperbolicModel, k: int, r: float, sigma):
    """``u_{2k+1}(r; sigma) = e^{i r sigma} Q_{k,r}(i sigma / kappa)``."""
    if r <= 0:
        raise ValueError("r must be positive")
    poly = build_outgoing_polynomial(model, k, r)
    sigma = np.asarray(sigma, dtype=complex)
    return np.exp(1j * r * sigma) * poly(1j * sigma / model.kappa)


def effective_k(n: int, ell: int) -> int:
    if n % 2 == 0:
        raise ValueError("the terminating polynomial exists only for odd n")
    return (n - 1) // 2 + ell


def _relative_residual(coeffs, beta):
    num = abs(P.polyval(beta, coeffs))
    den = P.polyval(abs(beta), np.abs(coeffs))
    return float(num / den) if den > 0 else float(num)


def roots_to_resonances(coeffs, beta_roots, to_sigma, ell, degeneracy):
    """Turn polynomial roots in ``beta`` into resonances, dropping the real axis."""
    out = []
    for beta, order in cluster_roots(beta_roots):
        lam = complex(to_sigma(beta))
        res = _relative_residual(coeffs, beta)
        if lam.imag >= -REAL_AXIS_GUARD:
            logger.warning("root %s at ell=%d is not in Im < 0; reported as diagnostic only", lam, ell)
            continue
        out.append(Resonance(lam=lam, ell=ell, multiplicity=degeneracy * order, residual=res))
    return sorted(out, key=lambda z: (-z.lam.imag, z.lam.real))


def ball_resonances_odd(model: HyperbolicModel, ell: int, R: float) -> list[Resonance]:
    """Dirichlet resonances with angular momentum ``ell`` of the ball of radius ``R``."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    k = effective_k(model.dim, ell)
    poly = build_outgoing_polynomial(model, k, R)
    kappa = model.kappa
    return roots_to_resonances(poly.coeffs, poly.roots_beta(), lambda b: -1j * kappa * b,
                               ell, harmonic_dimension(model.dim, ell))


def large_radius_limit(model: HyperbolicModel, k: int) -> np.ndarray:
    """Limits ``-i kappa m``, ``m = 1..k-1``, of the roots as ``R -> infinity``."""
    return -1j * model.kappa * np.arange(1, k, dtype=float)


def ell_one_resonance(kappa: float, R: float) -> complex:
    """Closed form ``-i kappa coth(kappa R)`` of the single ``ell = 1`` root in H^3."""
    return -1j * kappa / math.tanh(kappa * R)
