"""Zeros of analytic functions in a rectangle by the argument principle.

The winding number of ``F`` along the box boundary is computed from phase
increments on an adaptively refined boundary sampling; boxes with nonzero
winding are bisected and the isolated zeros are polished by Newton's method.
"""

from __future__ import annotations

import logging
from typing import Callable, NamedTuple

import numpy as np

from .resonance import ComplexBox

logger = logging.getLogger(__name__)

_MAX_BOUNDARY_POINTS = 1 << 15
_SPLIT_FRACTIONS = (0.5, 0.46, 0.54, 0.41, 0.59, 0.37, 0.63)
# neighbouring boundary samples must agree in phase to < pi/2 and in log-modulus to < this
_MAX_LOG_RATIO = 1.5


class ZeroSearchError(RuntimeError):
    pass


class Zero(NamedTuple):
    z: complex
    order: int
    residual: float


def _boundary_path(box: ComplexBox, per_edge: int):
    corners = np.array([
        complex(box.re_min, box.im_min),
        complex(box.re_max, box.im_min),
        complex(box.re_max, box.im_max),
        complex(box.re_min, box.im_max),
    ])
    t = np.linspace(0.0, 4.0, 4 * per_edge + 1)
    return t, corners


def _path_points(t, corners):
    edge = np.minimum(np.floor(t).astype(int), 3)
    frac = t - edge
    a = corners[edge]
    b = corners[(edge + 1) % 4]
    return a + (b - a) * frac


def winding_number(F: Callable, box: ComplexBox, per_edge: int = 16):
    """Winding number of ``F`` around ``box`` (counter-clockwise).

    Returns ``(winding, boundary_scale)``; ``boundary_scale`` is the mean of
    ``|F|`` over the final boundary sample. Raises ``ZeroSearchError`` when
    the phase cannot be resolved, which signals a zero on or very near the
    boundary.
    """
    t, corners = _boundary_path(box, per_edge)
    vals = np.asarray(F(_path_points(t, corners)), dtype=complex)
    verified = False
    while True:
        if not np.all(np.isfinite(vals)) or np.any(vals == 0):
            raise ZeroSearchError("F vanishes or is not finite on the boundary")
        ratio = vals[1:] / vals[:-1]
        jumps = np.angle(ratio)
        bad = np.nonzero((np.abs(jumps) >= 0.5 * np.pi) | (np.abs(np.log(np.abs(ratio))) >= _MAX_LOG_RATIO))[0]
        if bad.size == 0:
            if verified:
                break
            # a cluster of zeros close to an edge can alias to a small jump; confirm on a uniformly doubled sample
            bad = np.arange(t.size - 1)
            verified = True
        else:
            verified = False
        if t.size + bad.size > _MAX_BOUNDARY_POINTS:
            raise ZeroSearchError("boundary phase not resolved; zero near the boundary?")
        tm = 0.5 * (t[bad] + t[bad + 1])
        vm = np.asarray(F(_path_points(tm, corners)), dtype=complex)
        t = np.insert(t, bad + 1, tm)
        vals = np.insert(vals, bad + 1, vm)
    total = jumps.sum() / (2.0 * np.pi)
    w = int(round(total))
    if abs(total - w) > 1e-6:
        raise ZeroSearchError(f"non-integral winding {total}")
    return w, float(np.mean(np.abs(vals)))


def _derivative(F, z, h):
    v = np.asarray(F(np.array([z + h, z - h])), dtype=complex)
    return (v[0] - v[1]) / (2.0 * h)


def newton(F: Callable, z0: complex, order: int = 1, maxiter: int = 40, rtol: float = 1e-14):
    """Newton iteration with central-difference derivative; returns ``(z, |F(z)|)``."""
    z = complex(z0)
    fz = complex(np.asarray(F(np.array([z])))[0])
    for _ in range(maxiter):
        h = 1e-7 * (1.0 + abs(z))
        df = _derivative(F, z, h)
        if df == 0 or not np.isfinite(df):
            break
        step = order * fz / df
        z = z - step
        fz = complex(np.asarray(F(np.array([z])))[0])
        if abs(step) <= rtol * (1.0 + abs(z)) or fz == 0:
            break
    return z, abs(fz)


def _split(box: ComplexBox, frac: float):
    if box.width >= box.height:
        x = box.re_min + frac * box.width
        return (ComplexBox(box.re_min, x, box.im_min, box.im_max),
                ComplexBox(x, box.re_max, box.im_min, box.im_max))
    y = box.im_min + frac * box.height
    return (ComplexBox(box.re_min, box.re_max, box.im_min, y),
            ComplexBox(box.re_min, box.re_max, y, box.im_max))


def locate_zeros(F: Callable, box: ComplexBox, max_depth: int = 60, min_diameter: float = 1e-6,
                 residual_tol: float = 1e-10) -> list[Zero]:
    """All zeros of the analytic function ``F`` inside ``box``.

    ``F`` must accept and return complex ndarrays. The residual reported for
    each zero is ``|F(z)|`` relative to the mean of ``|F|`` on the boundary
    of the smallest box that isolated it.
    """
    top = box
    for _ in range(6):
        try:
            w, scale = winding_number(F, top)
            break
        except ZeroSearchError:
            top = top.dilate(1.01)
    else:
        raise ZeroSearchError("could not resolve the winding number on the search box")

    top_winding = w
    found: list[Zero] = []
    stack = [(top, w, scale, 0)]
    while stack:
        b, w, scale, depth = stack.pop()
        if w == 0:
            continue
        if w == 1:
            z, fz = newton(F, b.center)
            if b.dilate(1.0 + 1e-9).contains(z) and fz <= residual_tol * scale:
                found.append(Zero(complex(z), 1, fz / scale))
                continue
        if b.diameter < min_diameter:
            z, fz = newton(F, b.center, order=w)
            if not b.dilate(2.0).contains(z):
                z, fz = b.center, abs(complex(np.asarray(F(np.array([b.center])))[0]))
            found.append(Zero(complex(z), w, fz / scale))
            continue
        if depth >= max_depth:
            raise ZeroSearchError(f"max_depth exceeded with winding {w} in {b}")
        for frac in _SPLIT_FRACTIONS:
            halves = _split(b, frac)
            try:
                parts = [winding_number(F, h) for h in halves]
            except ZeroSearchError:
                continue
            if parts[0][0] + parts[1][0] == w:
                break
        else:
            raise ZeroSearchError(f"could not bisect {b} conserving winding {w}")
        for h, (wh, sh) in zip(halves, parts):
            stack.append((h, wh, sh, depth + 1))
    if sum(zr.order for zr in found) != top_winding:
        raise ZeroSearchError("winding not conserved")
    return sorted(found, key=lambda zr: (-zr.z.imag, zr.z.real))


def circle_winding(F: Callable, center: complex, radius: float, n: int = 64) -> int:
    """Winding number of ``F`` along a small counter-clockwise circle."""
    th = np.linspace(0.0, 2.0 * np.pi, n + 1)
    for _ in range(10):
        vals = np.asarray(F(center + radius * np.exp(1j * th)), dtype=complex)
        jumps = np.angle(vals[1:] / vals[:-1])
        if np.max(np.abs(jumps)) < 0.5 * np.pi:
            return int(round(jumps.sum() / (2.0 * np.pi)))
        th = np.linspace(0.0, 2.0 * np.pi, 2 * (th.size - 1) + 1)
    raise ZeroSearchError("circle winding not resolved")
