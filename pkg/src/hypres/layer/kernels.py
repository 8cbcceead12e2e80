"""Free outgoing kernel of ``-Delta - kappa^2 - lambda^2`` on H^3 and its geometry.

``R0(lambda; d) = exp(i lambda d) / (4 pi s(d))`` with ``s = s_kappa``; the
double layer needs the normal derivative of ``d`` at the source, obtained by
differentiating ``q = (cosh(kappa d) - 1) / kappa^2`` in the ``(r, omega)``
chart. Dividing by ``kappa^2`` keeps every expression finite at ``kappa = 0``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_legendre, roots_legendre

from ..geometry import HyperbolicModel, distance_from_polar, warp

FOUR_PI = 4.0 * math.pi


def _require_h3(model: HyperbolicModel):
    if model.dim != 3:
        raise ValueError("the closed-form kernel is implemented for n = 3 only")


def free_kernel(model: HyperbolicModel, lam, d):
    """``exp(i lam d) / (4 pi s_kappa(d))``; broadcasts over ``lam`` and ``d``."""
    _require_h3(model)
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("the free kernel is singular at d = 0")
    out = np.exp(1j * np.asarray(lam) * d) / (FOUR_PI * np.asarray(warp(model, d)))
    return out[()] if np.ndim(out) == 0 else out


def free_kernel_radial_derivative(model: HyperbolicModel, lam, d):
    """``d/dd R0 = R0 (i lam - cosh(kappa d) / s(d))``."""
    d = np.asarray(d, dtype=float)
    s = np.asarray(warp(model, d))
    return free_kernel(model, lam, d) * (1j * np.asarray(lam) - np.cosh(model.kappa * d) / s)


def scaled_cosh_gap(model: HyperbolicModel, r1, o1, r2, o2):
    """``(cosh(kappa d) - 1) / kappa^2`` (``d^2 / 2`` when ``kappa = 0``)."""
    one_minus_cos = 0.5 * np.sum((np.asarray(o1) - np.asarray(o2)) ** 2, axis=-1)
    half = np.asarray(warp(model, 0.5 * np.abs(np.asarray(r1) - np.asarray(r2))))
    return 2.0 * half * half + np.asarray(warp(model, r1)) * np.asarray(warp(model, r2)) * one_minus_cos


def normal_derivative_of_distance(model: HyperbolicModel, r1, o1, r2, o2, grad_f2, d=None):
    """``partial_nu d`` at the source ``(r2, o2)`` on the surface ``r = f(omega)``.

    ``grad_f2`` is the tangential gradient of ``f`` at ``o2``; the unit normal
    ``(partial_r - s^-2 grad_h f) / sqrt(1 + s^-2 |grad_h f|^2)`` points away from
    the origin.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    o1 = np.asarray(o1, dtype=float)
    o2 = np.asarray(o2, dtype=float)
    k = model.kappa
    if d is None:
        d = distance_from_polar(model, r1, o1, r2, o2)
    s1 = np.asarray(warp(model, r1))
    s2 = np.asarray(warp(model, r2))
    one_minus_cos = 0.5 * np.sum((o1 - o2) ** 2, axis=-1)
    dr = r1 - r2
    w_dr = np.sign(dr) * np.asarray(warp(model, np.abs(dr)))
    dq_dr2 = -w_dr + s1 * np.cosh(k * r2) * one_minus_cos
    dq_domega = -(s1 * s2)[..., None] * (o1 - np.sum(o1 * o2, axis=-1, keepdims=True) * o2)
    grad_f2 = np.asarray(grad_f2, dtype=float)
    g2 = np.sum(grad_f2 * grad_f2, axis=-1)
    nu_q = (dq_dr2 - np.sum(grad_f2 * dq_domega, axis=-1) / (s2 * s2)) / np.sqrt(1.0 + g2 / (s2 * s2))
    return nu_q / np.asarray(warp(model, d))


def double_layer_kernel(model: HyperbolicModel, lam, d, dnu_d):
    """``2 partial_nu R0 = 2 R0'(d) partial_nu d``."""
    return 2.0 * free_kernel_radial_derivative(model, lam, d) * dnu_d


def _graded_rule(levels: int = 12, order: int = 20):
    # composite Gauss-Legendre on [0, pi] with panels [pi 2^-(j+1), pi 2^-j] and [0, pi 2^-levels]
    x, w = roots_legendre(order)
    edges = [0.0] + [math.pi * 2.0 ** (-j) for j in range(levels, -1, -1)]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


class QuadratureError(RuntimeError):
    pass


def ball_mode_symbol(model: HyperbolicModel, R: float, ell: int, lam, rtol: float = 1e-11):
    """Eigenvalue of the single-layer boundary operator on the sphere ``r = R`` at degree ``ell``.

    ``g_l(lam) = 2 pi s(R)^2 int_0^pi R0(lam; d(g)) P_l(cos g) sin g dg``;
    vectorized over ``lam``. The rule is doubled in order until two successive
    values agree to ``rtol``.
    """
    _require_h3(model)
    if R <= 0 or ell < 0:
        raise ValueError("need R > 0 and ell >= 0")
    lam = np.asarray(lam, dtype=complex)
    sR = warp(model, R)
    prev = None
    for order in (16, 32, 64):
        g, w = _graded_rule(order=order)
        if model.kappa > 0:
            d = 2.0 * np.arcsinh(math.sinh(model.kappa * R) * np.sin(0.5 * g)) / model.kappa
        else:
            d = 2.0 * R * np.sin(0.5 * g)
        weight = w * eval_legendre(ell, np.cos(g)) * np.sin(g) / (FOUR_PI * np.asarray(warp(model, d)))
        val = 2.0 * math.pi * sR * sR * (np.exp(1j * lam[..., None] * d) @ weight)
        if prev is not None and np.all(np.abs(val - prev) <= rtol * np.maximum(np.abs(val), 1e-300)):
            return val[()] if val.ndim == 0 else val
        prev = val
    if np.all(np.abs(val - prev) <= 1e3 * rtol * np.maximum(np.abs(val), 1e-300)):
        return val[()] if val.ndim == 0 else val
    raise QuadratureError("ball mode symbol quadrature did not converge")
