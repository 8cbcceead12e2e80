"""Dirichlet resonances of Euclidean balls in odd dimension.

Letting ``kappa -> 0`` in the hyperbolic outgoing polynomial gives, in
``beta = i lambda``,

    Q^E_{k,R}(beta) = sum_j prod_{l=1}^{j} (k(k-1) - l(l-1)) (-beta)^{k-1-j} / (2^j j! R^j),

whose roots are the zeros of the outgoing Hankel function
``h_{k-1}(lambda R)`` (``k - 1 = ell + (n-3)/2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import harmonic_dimension
from .polyroots import polynomial_roots
from .radial_exact import _angular_products, roots_to_resonances
from .resonance import Resonance

RALSTON_TOL = 1e-9


@dataclass(frozen=True)
class EuclidOutgoingPolynomial:
    k: int
    R: float
    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, beta):
        return np.polynomial.polynomial.polyval(beta, self.coeffs)

    def lambda_roots(self) -> np.ndarray:
        return -1j * polynomial_roots(self.coeffs)


def build_euclid_polynomial(k: int, R: float) -> EuclidOutgoingPolynomial:
    """Ascending coefficients of ``Q^E_{k,R}`` in ``beta``."""
    if k < 1 or R <= 0:
        raise ValueError(f"need k >= 1 and R > 0, got k={k}, R={R}")
    a = _angular_products(k)
    coeffs = np.zeros(k)
    for j in range(k):
        p = k - 1 - j
        coeffs[p] += a[j] * (-1.0) ** p / R**j
    return EuclidOutgoingPolynomial(k=k, R=float(R), coeffs=coeffs)


def euclid_ball_resonances(n: int, ell: int, R: float) -> list[Resonance]:
    """Resonances with angular momentum ``ell`` of the radius-``R`` ball in R^n, ``n`` odd."""
    if n < 3 or n % 2 == 0:
        raise ValueError("Euclidean ball resonances are implemented for odd n >= 3 only")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    k = (n - 1) // 2 + ell
    poly = build_euclid_polynomial(k, R)
    return roots_to_resonances(poly.coeffs, polynomial_roots(poly.coeffs), lambda b: -1j * b,
                               ell, harmonic_dimension(n, ell))


@dataclass(frozen=True)
class RalstonReport:
    bound: float
    min_width: float
    margin: float
    attained_by: Resonance | None
    passed: bool

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = "none" if self.attained_by is None else f"{self.attained_by.lam:.12g}"
        return f"{status} ralston: min|Im| = {self.min_width:.12g} vs 1/rho = {self.bound:.12g} (at {where})"


def check_ralston(resonances, rho: float) -> RalstonReport:
    """Check ``min |Im lambda| >= 1/rho`` for an obstacle inside a ball of radius ``rho``."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    bound = 1.0 / rho
    res = list(resonances)
    if not res:
        return RalstonReport(bound, math.inf, math.inf, None, True)
    top = min(res, key=lambda r: r.width)
    margin = top.width - bound
    return RalstonReport(bound, top.width, margin, top, margin >= -RALSTON_TOL)
