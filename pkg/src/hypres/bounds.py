"""Decay rate ``p(t)`` and the resonance-width lower bounds built from it.

For an obstacle inside a ball of radius ``rho`` the local energy decays at
rate ``p``; every resonance then has width at least

    alpha(kappa, rho) = max_{tau > 5 rho} -log(4 p(tau - 2 rho)) / (2 tau).

With ``tau = (t + 5) rho`` this is ``A(kappa rho) / rho`` where

    A(r) = sup_{t > 0} log((cosh(r t) - 1) / (4 (cosh 3r - 1))) / (2 (t + 5)),

and ``A(0+) = mu``. As ``t -> oo`` the objective tends to ``r / 2``, from
above exactly when ``4 e^{5r} (cosh 3r - 1) < 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect, minimize_scalar

from .geometry import HyperbolicModel, warp

GRID_START = 4.0
GRID_RATIO = 1.05
GRID_POINTS = 201
OPTIMIZER_XTOL = 1e-10
ROOT_XTOL = 1e-8
BOUND_TOL = 1e-9


def _log_sinhc(y):
    # log(sinh y / y), finite down to y = 0
    y = np.asarray(y, dtype=float)
    big = y > 20.0
    small = y < 1e-4
    ys = np.where(big | small, 1.0, y)
    yb = np.where(big, y, 20.0)
    return np.where(big, yb - np.log(2.0 * yb) + np.log1p(-np.exp(-2.0 * yb)),
                    np.where(small, np.log1p(y * y / 6.0), np.log(np.sinh(ys) / ys)))


def _log_cosh_m1(x):
    # cosh x - 1 = (x^2 / 2) (sinh(x/2) / (x/2))^2
    x = np.asarray(x, dtype=float)
    return 2.0 * np.log(x) - math.log(2.0) + 2.0 * _log_sinhc(0.5 * x)


def log_p_decay(kappa: float, rho: float, t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 3.0 * rho):
        raise ValueError("p(t) is defined for t > 3 rho only")
    if kappa == 0:
        return math.log(9.0 * rho * rho) - 2.0 * np.log(t - 3.0 * rho)
    # cosh x - 1 = (x^2/2) (sinh(x/2)/(x/2))^2; the x^2 factors cancel without forming kappa * t
    flat = math.log(9.0 * rho * rho) - 2.0 * np.log(t - 3.0 * rho)
    return flat + 2.0 * (_log_sinhc(1.5 * kappa * rho) - _log_sinhc(0.5 * kappa * (t - 3.0 * rho)))


def p_decay(kappa: float, rho: float, t):
    """``(cosh 3 kappa rho - 1) / (cosh kappa(t - 3 rho) - 1)``, or ``9 rho^2/(t - 3 rho)^2`` at ``kappa = 0``."""
    if kappa < 0 or rho <= 0:
        raise ValueError("need kappa >= 0 and rho > 0")
    v = np.exp(log_p_decay(kappa, rho, t))
    return v[()] if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class Maximum:
    value: float
    argmax: float
    at_infinity: bool = False


def _maximize(f, grid, limit=None) -> Maximum:
    """Grid bracket then golden-section refinement of a unimodal objective.

    ``limit`` is the value of ``f`` at infinity; it is returned, flagged, when
    the grid maximum sits at the last point with ``f`` still increasing, or
    when it exceeds the finite maximum.
    """
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    if i == grid.size - 1:
        if limit is None:
            raise RuntimeError("maximum escapes the grid and no limit was supplied")
        if f(grid[-1] * (1.0 + 1e-6)) >= vals[-1]:
            return Maximum(limit, math.inf, True)
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda x: -f(x), bracket=(lo, grid[i], hi), method="golden",
                          options={"xtol": OPTIMIZER_XTOL})
    best = Maximum(float(-res.fun), float(res.x))
    if best.value < vals[i]:
        best = Maximum(float(vals[i]), float(grid[i]))
    if limit is not None and limit > best.value:
        return Maximum(limit, math.inf, True)
    return best


def _tau_grid(rho: float) -> np.ndarray:
    return rho * GRID_START * GRID_RATIO ** np.arange(GRID_POINTS)


def alpha_objective(kappa: float, rho: float, tau: float) -> float:
    """``-log(4 p(tau - 2 rho)) / (2 tau)``; ``-inf`` where ``p`` is undefined."""
    if tau <= 5.0 * rho:
        return -math.inf
    return -(math.log(4.0) + float(log_p_decay(kappa, rho, tau - 2.0 * rho))) / (2.0 * tau)


def alpha_generic_details(kappa: float, rho: float) -> Maximum:
    if kappa < 0 or rho <= 0:
        raise ValueError("need kappa >= 0 and rho > 0")
    limit = 0.5 * kappa if kappa > 0 else None
    return _maximize(lambda tau: alpha_objective(kappa, rho, tau), _tau_grid(rho), limit)


def alpha_generic(kappa: float, rho: float) -> float:
    """Width lower bound for obstacles inside a ball of radius ``rho``."""
    return alpha_generic_details(kappa, rho).value


def a_objective(rho_tilde: float, t: float) -> float:
    """``log((cosh(r t) - 1) / (4 (cosh 3r - 1))) / (2 (t + 5))``; the ``r -> 0`` limit at ``r = 0``."""
    if t <= 0:
        return -math.inf
    if rho_tilde == 0:
        return math.log(t * t / 36.0) / (2.0 * (t + 5.0))
    num = float(_log_cosh_m1(rho_tilde * t)) - math.log(4.0) - float(_log_cosh_m1(3.0 * rho_tilde))
    return num / (2.0 * (t + 5.0))


def A_profile_details(rho_tilde: float) -> Maximum:
    if rho_tilde < 0:
        raise ValueError("rho_tilde must be >= 0")
    grid = GRID_START * GRID_RATIO ** np.arange(GRID_POINTS) - 5.0
    grid = grid[grid > 0]
    limit = 0.5 * rho_tilde if rho_tilde > 0 else None
    return _maximize(lambda t: a_objective(rho_tilde, t), grid, limit)


def A_profile(rho_tilde: float) -> float:
    """``A(r) = sup_{t>0} a(r, t)``; ``A(0) = mu``."""
    return A_profile_details(rho_tilde).value


def euclidean_constant() -> float:
    """``mu``, the Euclidean width constant: ``alpha(0, rho) = mu / rho``."""
    return A_profile(0.0)


def _threshold_lhs(r):
    return 4.0 * math.exp(5.0 * r) * (math.cosh(3.0 * r) - 1.0)


def improvement_threshold() -> float:
    """Root of ``4 e^{5r} (cosh 3r - 1) = 1/2``: below it ``A(r) > r/2``."""
    return bisect(lambda r: _threshold_lhs(r) - 0.5, 0.01, 0.5, xtol=ROOT_XTOL * 1e-3)


def marklof_ratio(model: HyperbolicModel, rho: float) -> float:
    """``vol(dB(rho)) / vol(B(rho))`` for geodesic balls."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    p = model.dim - 1
    denom, _ = quad(lambda r: warp(model, r) ** p, 0.0, rho, epsrel=1e-10, epsabs=0.0, limit=200)
    return float(warp(model, rho) ** p / denom)


@dataclass(frozen=True)
class BoundProfile:
    kappa: float
    rho: float
    mu: float
    A_value: float
    alpha: float
    supremum_at_infinity: bool = False


def bound_profile(kappa: float, rho: float) -> BoundProfile:
    if kappa < 0 or rho <= 0:
        raise ValueError("need kappa >= 0 and rho > 0")
    mu = euclidean_constant()
    if kappa == 0:
        return BoundProfile(0.0, rho, mu, mu, mu / rho)
    det = A_profile_details(kappa * rho)
    return BoundProfile(kappa, rho, mu, det.value, max(0.5 * kappa, det.value / rho), det.at_infinity)


@dataclass
class WidthBoundReport:
    checks: list = field(default_factory=list)  # (name, bound, min_width, margin, offender)

    @property
    def passed(self) -> bool:
        return all(c[3] >= -BOUND_TOL for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for name, bound, width, margin, offender in self.checks:
            status = "PASS" if margin >= -BOUND_TOL else "FAIL"
            extra = "" if offender is None else f" (closest: {offender.lam:.10g})"
            out.append(f"{status} {name}: min|Im| = {width:.10g} >= {bound:.10g}, margin {margin:.3g}{extra}")
        return out


def verify_width_bounds(resonances, model: HyperbolicModel, rho: float, n_odd: bool = None) -> WidthBoundReport:
    """Check ``min |Im| >= kappa/2`` and, for odd ``n``, ``min |Im| >= alpha(kappa, rho)``."""
    if n_odd is None:
        n_odd = model.dim % 2 == 1
    res = list(resonances)
    top = min(res, key=lambda r: r.width) if res else None
    width = top.width if top else math.inf
    report = WidthBoundReport()
    report.checks.append(("half-curvature", 0.5 * model.kappa, width, width - 0.5 * model.kappa, top))
    if n_odd:
        alpha = bound_profile(model.kappa, rho).alpha
        report.checks.append(("odd-dimension alpha", alpha, width, width - alpha, top))
    return report
