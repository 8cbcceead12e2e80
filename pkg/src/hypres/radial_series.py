"""Outgoing radial solutions for every n >= 2 from a Frobenius series at x = 1.

With ``x = coth(kappa r)`` and ``beta = i sigma / kappa`` the outgoing solution
is ``u = e^{i r sigma} v(x)`` where ``v`` solves

    d/dx((1 - x^2) dv/dx) + 2 beta dv/dx + c v = 0,
    c = (n-1)(n-3)/4 + ell(ell + n - 2),

and is smooth at ``x = 1``. Normalizing by the Gamma function,

    v_hat(x; sigma) = sum_j d_j (x - 1)^j / Gamma(j + 1 - beta),
    d_0 = 1,  d_{j+1} = d_j (c - j(j+1)) / (2(j+1)),

is entire in ``sigma``. Ball resonances are the zeros of ``v_hat(coth(kappa R); .)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import HyperbolicModel, harmonic_dimension
from .resonance import ComplexBox, Resonance
from .special import rgamma
from .zeros import ZeroSearchError, circle_winding, locate_zeros

logger = logging.getLogger(__name__)

SERIES_LIMIT_X = 2.5
_HANDOVER_X = 2.5
_MAX_TERMS = 4000
_TERM_RTOL = 1e-16
_QUIET_TERMS = 5
ODE_RTOL = 1e-11
LATTICE_TOL = 1e-5
LATTICE_PROBE_RADIUS = 1e-3


class SeriesConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FrobeniusSolution:
    """Sigma-independent data of the Gamma-normalized Frobenius series."""

    c: float
    kappa: float
    d_coeffs: np.ndarray
    truncation: int

    def recursion_residual(self) -> float:
        d = self.d_coeffs
        j = np.arange(d.size - 1)
        lhs = d[1:] * 2.0 * (j + 1)
        rhs = d[:-1] * (self.c - j * (j + 1))
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        scale[scale == 0] = 1.0
        return float(np.max(np.abs(lhs - rhs) / scale)) if j.size else 0.0


def angular_constant(n: int, ell: int) -> float:
    """``c = (n-1)(n-3)/4 + ell(ell+n-2)``."""
    return (n - 1) * (n - 3) / 4.0 + ell * (ell + n - 2)


def series_coefficients(c: float, J: int, kappa: float = 1.0) -> FrobeniusSolution:
    """``d_0..d_J`` of the recursion ``d_{j+1} = d_j (c - j(j+1)) / (2(j+1))``.

    ``d_j`` grows like ``j!/2^j``; the stored values overflow beyond ``J ~ 170``,
    while :func:`evaluate_outgoing_general` never forms them on their own.
    """
    if J < 2:
        raise ValueError("J must be >= 2")
    d = np.empty(J + 1)
    d[0] = 1.0
    for j in range(J):
        d[j + 1] = d[j] * (c - j * (j + 1)) / (2.0 * (j + 1))
    return FrobeniusSolution(c=float(c), kappa=float(kappa), d_coeffs=d, truncation=J)


def frobenius_solution(model: HyperbolicModel, ell: int, J: int = 40) -> FrobeniusSolution:
    if model.kappa <= 0:
        raise ValueError("the series construction needs kappa > 0")
    return series_coefficients(angular_constant(model.dim, ell), J, model.kappa)


def _series(c: float, beta: np.ndarray, t: float, with_derivative: bool):
    """Sum ``v_hat`` (and ``d v_hat / dx``) at ``x = 1 + t`` for an array of ``beta``."""
    # below j0 the reciprocal Gamma factors are built downward, z/Gamma(z+1), to avoid 0/0
    j0 = max(0, int(np.ceil(np.max(beta.real))) if beta.size else 0)
    g = rgamma(j0 + 1 - beta)
    d = 1.0
    ds = [1.0]
    for j in range(j0):
        d = d * (c - j * (j + 1)) / (2.0 * (j + 1))
        ds.append(d)
    gs = [g]
    for j in range(j0 - 1, -1, -1):
        gs.append((j + 1 - beta) * gs[-1])
    gs = gs[::-1]
    total = np.zeros(beta.shape, dtype=complex)
    dtotal = np.zeros(beta.shape, dtype=complex)
    tj = 1.0
    for j in range(j0 + 1):
        e = ds[j] * tj * gs[j]
        total += e
        if with_derivative and j > 0:
            dtotal += j * e / t
        tj *= t
    e = ds[j0] * t**j0 * gs[j0]
    quiet = 0
    j = j0
    while True:
        e = e * ((c - j * (j + 1)) / (2.0 * (j + 1))) * t / (j + 1 - beta)
        j += 1
        total += e
        if with_derivative:
            dtotal += j * e / t
        small = np.all(np.abs(e) <= _TERM_RTOL * np.abs(total))
        quiet = quiet + 1 if small else 0
        if quiet >= _QUIET_TERMS:
            break
        if j >= _MAX_TERMS:
            raise SeriesConvergenceError(f"series did not converge within {_MAX_TERMS} terms at x={1 + t}")
    return total, dtotal


def _ode_continue(c: float, beta: np.ndarray, x1: float, x0: float, v1, dv1):
    # integrate in u = log x with y = (v, x v'); the system tends to constant coefficients as x grows
    scale = np.abs(v1) + np.abs(x1 * dv1)
    scale[scale == 0] = 1.0
    y0 = np.concatenate([v1 / scale, x1 * dv1 / scale])
    m = beta.size

    def rhs(u, y):
        x = math.exp(u)
        v, w = y[:m], y[m:]
        fac = x * x / (1.0 - x * x)
        return np.concatenate([w, w + fac * (2.0 * w - 2.0 * beta * w / x - c * v)])

    sol = solve_ivp(rhs, (math.log(x1), math.log(x0)), y0, method="DOP853",
                    rtol=ODE_RTOL, atol=1e-14)
    if sol.status != 0:
        raise SeriesConvergenceError(f"ODE continuation failed: {sol.message}")
    y = sol.y[:, -1]
    return y[:m] * scale, y[m:] * scale / x0


def evaluate_outgoing_general(sol: FrobeniusSolution, sigma, x0: float, handover: float = _HANDOVER_X,
                              with_derivative: bool = False):
    """Entire boundary function ``F(sigma) = v_hat(x0; sigma)``.

    Sums the series directly for ``x0 <= 2.5``; otherwise evaluates the series
    and its derivative at ``handover`` and continues with an adaptive
    Runge-Kutta (DOP853) integration to ``x0``.
    """
    if x0 <= 1:
        raise ValueError("x0 = coth(kappa R) must exceed 1")
    sigma = np.asarray(sigma, dtype=complex)
    shape = sigma.shape
    beta = (1j * sigma / sol.kappa).ravel()
    if x0 <= SERIES_LIMIT_X:
        v, dv = _series(sol.c, beta, x0 - 1.0, with_derivative)
    else:
        if not 1.0 < handover < 3.0:
            raise ValueError("handover point must lie inside the disc of convergence |x-1| < 2")
        v1, dv1 = _series(sol.c, beta, handover - 1.0, True)
        v, dv = _ode_continue(sol.c, beta, handover, x0, v1, dv1)
    v = v.reshape(shape)
    if with_derivative:
        return v, dv.reshape(shape)
    return v[()] if v.ndim == 0 else v


def terminating_index(c: float):
    """``J`` with ``c = J(J+1)`` when the recursion for ``d_j`` stops after ``j = J``, else ``None``."""
    if c < 0:
        return None
    J = round((math.sqrt(1.0 + 4.0 * c) - 1.0) / 2.0)
    return J if abs(J * (J + 1) - c) <= 1e-12 * max(1.0, c) else None


def raw_boundary_function(model: HyperbolicModel, ell: int, R: float):
    """Vectorized ``sigma -> v_hat(coth(kappa R); sigma)`` for the ball of radius ``R``."""
    sol = frobenius_solution(model, ell)
    x0 = 1.0 / math.tanh(model.kappa * R)
    return lambda s: evaluate_outgoing_general(sol, s, x0)


def boundary_function(model: HyperbolicModel, ell: int, R: float):
    """Boundary function searched for resonances.

    When the recursion terminates at ``J`` (odd ``n``), ``v_hat`` vanishes
    identically at ``beta = J+1, J+2, ...``; those forced zeros are divided
    out with ``Gamma(J + 1 - beta)``. Otherwise this is ``v_hat`` itself.
    """
    F = raw_boundary_function(model, ell, R)
    J = terminating_index(angular_constant(model.dim, ell))
    if J is None:
        return F
    kappa = model.kappa

    def G(s):
        s = np.asarray(s, dtype=complex)
        return F(s) / rgamma(J + 1.0 - 1j * s / kappa)
    return G


def restored_function(model: HyperbolicModel, ell: int, R: float):
    """``Gamma(1 - beta) v_hat``, the un-normalized series; used to vet lattice zeros."""
    F = raw_boundary_function(model, ell, R)
    kappa = model.kappa
    return lambda s: F(s) / rgamma(1.0 - 1j * np.asarray(s, dtype=complex) / kappa)


def _off_lattice(box: ComplexBox, kappa: float) -> ComplexBox:
    # keep the horizontal edges away from the points -i kappa m
    def nudge(y):
        m = -y / kappa
        if m > 0.5 and abs(m - round(m)) < 0.05:
            return -kappa * (round(m) + 0.13)
        return y
    return ComplexBox(box.re_min, box.re_max, nudge(box.im_min), box.im_max)


def _near_lattice(z: complex, kappa: float):
    m = round(-z.imag / kappa)
    if m >= 1 and abs(z - (-1j * kappa * m)) < LATTICE_TOL * max(1.0, kappa):
        return m
    return None


def _survives_restoration(G, z: complex, site: complex) -> bool:
    # the probe circle is centred on the zero and kept clear of the Gamma pole at the lattice site
    dist = abs(z - site)
    if dist <= 1e-12 * (1.0 + abs(z)):
        return False
    try:
        return circle_winding(G, z, min(LATTICE_PROBE_RADIUS, 0.5 * dist)) >= 1
    except ZeroSearchError:
        return False


def ball_resonances_general(model: HyperbolicModel, ell: int, R: float, box: ComplexBox = None,
                            symmetric: bool = None, lattice_report: list = None) -> list[Resonance]:
    """Resonances of angular momentum ``ell`` of the ``R``-ball in ``box``.

    Zeros sitting on the lattice ``-i kappa m`` that do not survive removal of
    the Gamma normalization are dropped and, when ``lattice_report`` is given,
    appended to it as ``(sigma, m)``.
    """
    if model.kappa <= 0 or R <= 0 or ell < 0:
        raise ValueError("need kappa > 0, R > 0, ell >= 0")
    if box is None:
        box = ComplexBox.default_search(model.kappa, ell, R)
    if box.im_max >= 0:
        raise ValueError("resonance search boxes must lie in Im < 0")
    box = _off_lattice(box, model.kappa)
    F = boundary_function(model, ell, R)
    if symmetric is None:
        symmetric = math.isclose(box.re_min, -box.re_max, rel_tol=1e-12, abs_tol=1e-12)
    if symmetric:
        margin = min(0.05 * model.kappa, 0.1 * box.re_max)
        half = ComplexBox(-margin, box.re_max, box.im_min, box.im_max)
        raw = locate_zeros(F, half)
        zeros = []
        for zr in raw:
            z = complex(zr.z)
            axis_tol = 1e-9 * (1.0 + abs(z))
            if abs(z.real) <= axis_tol:
                zeros.append((complex(0.0, z.imag), zr.order, zr.residual))
            elif z.real > 0:
                zeros.append((z, zr.order, zr.residual))
                zeros.append((-z.conjugate(), zr.order, zr.residual))
    else:
        zeros = [(complex(zr.z), zr.order, zr.residual) for zr in locate_zeros(F, box)]

    G = None
    degeneracy = harmonic_dimension(model.dim, ell)
    # with a terminating recursion the forced lattice zeros were already divided out
    vet = terminating_index(angular_constant(model.dim, ell)) is None
    out = []
    for z, order, res in zeros:
        m = _near_lattice(z, model.kappa) if vet else None
        if m is not None:
            if G is None:
                G = restored_function(model, ell, R)
            if not _survives_restoration(G, z, complex(0.0, -model.kappa * m)):
                if lattice_report is not None:
                    lattice_report.append((z, m))
                continue
        if z.imag >= -1e-9:
            continue
        out.append(Resonance(lam=z, ell=ell, multiplicity=degeneracy * order, residual=res))
    return sorted(out, key=lambda r: (-r.lam.imag, r.lam.real))
