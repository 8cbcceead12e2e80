"""Nystrom matrices of the single- and double-layer boundary operators in H^3.

For every target node the surface integral is computed on a polar grid
centred at the target (Gauss-Legendre in the polar angle, trapezoidal in the
azimuth). In these coordinates the ``1/d`` singularity is cancelled by the
Jacobian ``sin(theta')``, so the integrand is smooth. The density at the
polar points is obtained from its nodal values by double-Fourier-sphere
trigonometric interpolation, which is exact at the nodes.

The node grid is invariant under rotation by ``2 pi / n_phi`` about the
polar axis, so interpolation matrices are stored once per latitude ring and
rolled along the azimuthal index for the other targets of that ring.

The latitude-longitude grid carries more nodal vectors than it resolves
spherical harmonics; on that surplus the interpolated operator has small,
meaningless eigenvalues that can vanish and fake resonances. Operators are
therefore returned in projected form ``P A P + (I - P)``, where ``P`` is the
projector onto real spherical harmonics of degree ``<= L`` (orthogonal for
the surface quadrature) and ``L`` is the largest degree for which the node
rule integrates products of harmonics exactly. This is a discrete Galerkin method on the harmonics,
with the surplus mapped to the identity.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from ..geometry import HyperbolicModel, distance_from_polar, surface_measure_density, warp
from .harmonics import real_sph_harm
from .kernels import FOUR_PI, normal_derivative_of_distance
from .surface import BoundarySurface, unit_vectors

KINDS = ("single-layer", "double-layer", "combined-field")


def trig_kernel(x, M: int):
    """Cardinal function of trigonometric interpolation on ``M`` equispaced points of period ``2 pi``."""
    x = np.remainder(np.asarray(x, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    half = 0.5 * x
    small = np.abs(half) < 1e-13
    safe = np.where(small, 1.0, half)
    den = M * (np.tan(safe) if M % 2 == 0 else np.sin(safe))
    return np.where(small, 1.0, np.sin(M * safe) / den)


def interpolation_matrix(grid, omega: np.ndarray) -> np.ndarray:
    """Rows map nodal values on ``grid`` to values at the unit vectors ``omega``."""
    theta = np.arccos(np.clip(omega[..., 2], -1.0, 1.0))
    phi = np.arctan2(omega[..., 1], omega[..., 0])
    ta, pb = grid.theta, grid.phi
    M = 2 * grid.n_theta
    A1 = trig_kernel(theta[:, None] - ta[None, :], M)
    A2 = trig_kernel(theta[:, None] + ta[None, :], M)
    B1 = trig_kernel(phi[:, None] - pb[None, :], grid.n_phi)
    B2 = trig_kernel(phi[:, None] - pb[None, :] + math.pi, grid.n_phi)
    P = A1[:, :, None] * B1[:, None, :] + A2[:, :, None] * B2[:, None, :]
    return P.reshape(omega.shape[0], -1)


@dataclass(frozen=True)
class PolarRule:
    """Tensor rule on the sphere in polar coordinates about the north pole."""

    n_theta: int
    n_phi: int

    def points(self):
        x, w = roots_legendre(self.n_theta)
        th = 0.5 * math.pi * (x + 1.0)
        wt = 0.5 * math.pi * w * np.sin(th)
        ph = 2.0 * math.pi * (np.arange(self.n_phi) + 0.5) / self.n_phi
        tt, pp = np.meshgrid(th, ph, indexing="ij")
        ww = np.outer(wt, np.full(self.n_phi, 2.0 * math.pi / self.n_phi))
        return tt.ravel(), pp.ravel(), ww.ravel()


def _frame(omega):
    # orthonormal tangent frame at omega; any frame works, the rule is rotation-invariant in phi'
    z = np.array([0.0, 0.0, 1.0]) if abs(omega[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(z, omega)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(omega, e1)
    return e1, e2


def polar_points(omega, rule: PolarRule):
    """Unit vectors and weights of ``rule`` centred at ``omega``."""
    tt, pp, ww = rule.points()
    e1, e2 = _frame(omega)
    pts = (np.cos(tt)[:, None] * omega[None, :]
           + np.sin(tt)[:, None] * (np.cos(pp)[:, None] * e1 + np.sin(pp)[:, None] * e2))
    return pts, ww


def _rotate_z(points, angle):
    c, s = math.cos(angle), math.sin(angle)
    out = points.copy()
    out[..., 0] = c * points[..., 0] - s * points[..., 1]
    out[..., 1] = s * points[..., 0] + c * points[..., 1]
    return out


@dataclass
class DiscretizedOperator:
    lam: complex
    kind: str
    matrix: np.ndarray = field(repr=False)
    surface: BoundarySurface = field(repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if not np.all(np.isfinite(self.matrix)):
            raise FloatingPointError("non-finite entries in the assembled operator")

    def weighted(self) -> np.ndarray:
        """``W G`` with ``W = diag(weights * density)``; symmetric for symmetric kernels."""
        return (self.surface.weights * self.surface.density)[:, None] * self.matrix


class LayerDiscretization:
    """Geometry of the singular quadrature for a surface, independent of ``lambda``.

    Parameters
    ----------
    surface
        Boundary with a latitude-longitude node grid.
    quad_theta, quad_phi
        Size of the per-target polar rule; defaults scale with the node grid.
    """

    def __init__(self, surface: BoundarySurface, quad_theta: int = None, quad_phi: int = None,
                 degree: int = None):
        model = surface.model
        if model.dim != 3:
            raise ValueError("layer operators are implemented in H^3 only")
        self.surface = surface
        self.model = model
        grid = surface.grid
        self.rule = PolarRule(quad_theta or grid.n_theta + 12, quad_phi or grid.n_phi + 12)
        self._interp = []
        n = surface.size
        nq = self.rule.n_theta * self.rule.n_phi
        self.d = np.empty((n, nq))
        self.base_single = np.empty((n, nq))
        self.base_double = np.empty((n, nq))
        self.cosh_over_s = np.empty((n, nq))
        # largest degree whose pairwise products the node rule integrates exactly
        self.degree = min(grid.n_theta - 1, grid.n_phi - 1) // 2 if degree is None else degree
        self.basis = np.stack([real_sph_harm(l, m, surface.nodes)
                               for l in range(self.degree + 1) for m in range(-l, l + 1)], axis=1)
        wU = (surface.weights * surface.density)[:, None] * self.basis
        # P = U B with B = (U^T W U)^{-1} U^T W
        self._coef = np.linalg.solve(self.basis.T @ wU, wU.T)
        self.projector = self.basis @ self._coef
        self._complement = np.eye(n) - self.projector
        for a, theta_a in enumerate(grid.theta):
            omega_a = unit_vectors(theta_a, 0.0)
            pts, ww = polar_points(omega_a, self.rule)
            self._interp.append(interpolation_matrix(grid, pts))
            for b, phi_b in enumerate(grid.phi):
                i = a * grid.n_phi + b
                self._fill_row(i, _rotate_z(pts, phi_b), ww)

    def _source_data(self, target_r, target_omega, pts, ww):
        model = self.model
        f, g = self.surface.shape(pts, gradient=True)
        dens = surface_measure_density(model, f, np.sum(g * g, axis=-1))
        d = distance_from_polar(model, target_r, target_omega[None, :], f, pts)
        dnu = normal_derivative_of_distance(model, target_r, target_omega[None, :], f, pts, g, d=d)
        s = np.asarray(warp(model, d))
        return d, ww * dens / (FOUR_PI * s), ww * dens * 2.0 * dnu / (FOUR_PI * s), np.cosh(model.kappa * d) / s

    def _fill_row(self, i, pts, ww):
        r = self.surface.radius[i]
        o = self.surface.nodes[i]
        self.d[i], self.base_single[i], self.base_double[i], self.cosh_over_s[i] = self._source_data(r, o, pts, ww)

    def _apply_rings(self, coeff: np.ndarray) -> np.ndarray:
        """Contract per-target quadrature coefficients with the ring interpolation matrices."""
        grid = self.surface.grid
        nphi, nth = grid.n_phi, grid.n_theta
        n = grid.size
        out = np.empty((n, n), dtype=complex)
        shift = (np.arange(nphi)[None, :] - np.arange(nphi)[:, None]) % nphi
        idx = np.broadcast_to(shift[:, None, :], (nphi, nth, nphi))
        for a, P in enumerate(self._interp):
            rows = slice(a * nphi, (a + 1) * nphi)
            c = coeff[rows]
            T = np.vstack([c.real, c.imag]) @ P
            T = (T[:nphi] + 1j * T[nphi:]).reshape(nphi, nth, nphi)
            out[rows] = np.take_along_axis(T, idx, axis=2).reshape(nphi, n)
        return out

    def single_coefficients(self, lam):
        return self.base_single * np.exp(1j * lam * self.d)

    def double_coefficients(self, lam):
        return self.base_double * np.exp(1j * lam * self.d) * (1j * lam - self.cosh_over_s)

    def _sandwich(self, A):
        # P A P through the rank-K factors
        core = (self._coef @ A) @ self.basis
        return self.basis @ (core @ self._coef)

    def _projected(self, A):
        return self._sandwich(A) + self._complement

    def single_nystrom(self, lam) -> np.ndarray:
        """Interpolatory Nystrom matrix of ``G`` without the projection."""
        return self._apply_rings(self.single_coefficients(lam))

    def single(self, lam) -> np.ndarray:
        return self._projected(self._apply_rings(self.single_coefficients(lam)))

    def double(self, lam) -> np.ndarray:
        return self._projected(self._apply_rings(self.double_coefficients(lam)))

    def combined(self, lam) -> np.ndarray:
        """``I + N + 2i G``."""
        coeff = self.double_coefficients(lam) + 2j * self.single_coefficients(lam)
        return self._projected(np.eye(self.surface.size) + self._apply_rings(coeff))

    def single_difference(self, lam, h) -> np.ndarray:
        """Central difference ``(G(lam + h) - G(lam - h)) / 2h`` as one assembly."""
        coeff = self.base_single * (np.exp(1j * (lam + h) * self.d) - np.exp(1j * (lam - h) * self.d)) / (2.0 * h)
        return self._sandwich(self._apply_rings(coeff))

    def single_rows(self, omegas, lam) -> np.ndarray:
        """Rows of ``G`` for arbitrary boundary points ``f(omega) omega`` (trace evaluation)."""
        omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
        rows = np.empty((omegas.shape[0], self.surface.size), dtype=complex)
        for k, o in enumerate(omegas):
            pts, ww = polar_points(o, self.rule)
            r = float(self.surface.shape(o[None, :])[0])
            d, base, _, _ = self._source_data(r, o, pts, ww)
            rows[k] = (base * np.exp(1j * lam * d)) @ interpolation_matrix(self.surface.grid, pts)
        return rows @ self.projector


_CACHE: "weakref.WeakKeyDictionary[BoundarySurface, LayerDiscretization]" = weakref.WeakKeyDictionary()


def discretization(surface: BoundarySurface) -> LayerDiscretization:
    """Cached :class:`LayerDiscretization` with default rule sizes."""
    disc = _CACHE.get(surface)
    if disc is None:
        disc = LayerDiscretization(surface)
        _CACHE[surface] = disc
    return disc


def _check(surface: BoundarySurface, model: HyperbolicModel):
    if surface.model != model:
        raise ValueError("surface was built for a different model")


def assemble_single_layer(surface: BoundarySurface, model: HyperbolicModel, lam) -> DiscretizedOperator:
    _check(surface, model)
    return DiscretizedOperator(complex(lam), "single-layer", discretization(surface).single(lam), surface)


def assemble_double_layer(surface: BoundarySurface, model: HyperbolicModel, lam) -> DiscretizedOperator:
    _check(surface, model)
    return DiscretizedOperator(complex(lam), "double-layer", discretization(surface).double(lam), surface)


def assemble_combined_field(surface: BoundarySurface, model: HyperbolicModel, lam) -> DiscretizedOperator:
    _check(surface, model)
    return DiscretizedOperator(complex(lam), "combined-field", discretization(surface).combined(lam), surface)
