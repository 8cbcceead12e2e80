"""Resonances of star-shaped obstacles as poles of ``G(lambda)^{-1}``.

The poles inside a contour are found by Beyn's contour-integral method:
with a probe block ``V``,

    A_p = (1 / 2 pi i) oint z^p G(z)^{-1} V dz,   p = 0, 1,

and with the reduced SVD ``A_0 = U S W^*`` truncated to its numerical rank,
the eigenvalues of ``U^* A_1 W S^{-1}`` are the enclosed poles. The contour
is the ellipse inscribed in a :class:`ComplexBox`.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..geometry import HyperbolicModel
from ..resonance import ComplexBox, Resonance
from .operators import discretization
from .surface import BoundarySurface

logger = logging.getLogger(__name__)

MIN_CONTOUR_POINTS = 64
MAX_CONTOUR_POINTS = 1024
STABILITY_TOL = 1e-8
RANK_RTOL = 1e-8
CLUSTER_RTOL = 1e-4
SOLVE_RESIDUAL_TOL = 1e-8


class ContourError(RuntimeError):
    pass


def worker_count() -> int:
    """Worker threads, capped by ``HYPRES_THREADS``."""
    n = os.cpu_count() or 1
    cap = os.environ.get("HYPRES_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"HYPRES_THREADS must be an integer, got {cap!r}")
    return n


def _map(fn, items):
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class EllipseContour:
    center: complex
    a: float
    b: float

    @classmethod
    def inscribed(cls, box: ComplexBox) -> "EllipseContour":
        if box.im_max >= 0:
            raise ValueError("contours must lie in Im < 0; the neighbourhood of 0 and the real axis are excluded")
        return cls(box.center, 0.5 * box.width, 0.5 * box.height)

    def nodes(self, n: int):
        """Trapezoidal nodes and weights ``dz / (2 pi i)``."""
        t = 2.0 * math.pi * np.arange(n) / n
        z = self.center + self.a * np.cos(t) + 1j * self.b * np.sin(t)
        dz = (-self.a * np.sin(t) + 1j * self.b * np.cos(t)) * (2.0 * math.pi / n)
        return z, dz / (2j * math.pi)

    def contains(self, z) -> np.ndarray:
        w = np.asarray(z) - self.center
        return (w.real / self.a) ** 2 + (w.imag / self.b) ** 2 < 1.0


def probe_block(n: int, rank: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return V / np.linalg.norm(V, axis=0)


def _seed_for(surface: BoundarySurface, box: ComplexBox, rank: int) -> int:
    key = repr((surface.shape, surface.model, surface.grid, box, rank)).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


@dataclass
class BeynResult:
    eigenvalues: np.ndarray
    singular_values: np.ndarray
    rank: int
    contour_points: int
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _solve(G, V):
    lu = lu_factor(G, check_finite=False)
    X = lu_solve(lu, V, check_finite=False)
    res = np.linalg.norm(G @ X - V) / np.linalg.norm(V)
    return X, res


def beyn(assemble, contour: EllipseContour, V: np.ndarray, rank_rtol: float = RANK_RTOL,
         abs_tol: float = None) -> BeynResult:
    """Contour-integral eigensolver for the analytic matrix function ``assemble``.

    The trapezoidal rule is doubled, reusing earlier solves, until the
    eigenvalues change by less than ``STABILITY_TOL`` (relative).
    """
    cache = {}

    def solves(z):
        key = complex(z)
        if key not in cache:
            X, res = _solve(assemble(key), V)
            if not res < SOLVE_RESIDUAL_TOL:
                raise ContourError(f"solve residual {res:.2e} at z = {key:.6g}; contour passes through a pole")
            cache[key] = (X, res)
        return cache[key]

    n = MIN_CONTOUR_POINTS
    prev = None
    while True:
        z, w = contour.nodes(n)
        todo = [zz for zz in z if complex(zz) not in cache]
        for zz, out in zip(todo, _map(lambda q: solves(q), todo)):
            cache[complex(zz)] = out
        Xs = [cache[complex(zz)][0] for zz in z]
        norms = np.array([np.linalg.norm(X, 2) for X in Xs])
        if np.max(norms) > 1e8 * np.median(norms):
            raise ContourError("resolvent blows up on the contour; a pole lies on or very near it")
        A0 = sum(wk * X for wk, X in zip(w, Xs))
        A1 = sum(wk * zk * X for wk, zk, X in zip(w, z, Xs))
        U, S, Wh = np.linalg.svd(A0, full_matrices=False)
        scale = np.mean(norms) * max(contour.a, contour.b)
        thresh = max(rank_rtol * (S[0] if S.size else 0.0), (abs_tol if abs_tol is not None else 1e-8) * scale)
        k = int(np.sum(S > thresh))
        if k == S.size and k > 0:
            logger.warning("probe block rank %d is saturated; increase rank_guess", k)
        if k == 0:
            ev = np.zeros(0, dtype=complex)
        else:
            B = U[:, :k].conj().T @ A1 @ Wh[:k].conj().T / S[:k]
            ev = np.linalg.eigvals(B)
        ev = np.sort_complex(ev[contour.contains(ev)]) if ev.size else ev
        # a degenerate eigenvalue splits at the square root of the rounding level, so
        # stability is judged on cluster means rather than on individual members
        groups = cluster_eigenvalues(ev)
        if prev is not None and _same_clusters(groups, prev):
            return BeynResult(ev, S / scale, k, n)
        if n >= MAX_CONTOUR_POINTS:
            logger.warning("contour eigenvalues not stabilized at %d points", n)
            return BeynResult(ev, S / scale, k, n)
        prev = groups
        n *= 2


def _same_clusters(a, b) -> bool:
    if [c for _, c in a] != [c for _, c in b]:
        return False
    if not a:
        return True
    za = np.array([z for z, _ in a])
    zb = np.array([z for z, _ in b])
    return bool(np.max(np.abs(za - zb)) <= STABILITY_TOL * (1.0 + np.max(np.abs(za))))


def cluster_eigenvalues(ev, rtol: float = CLUSTER_RTOL):
    """Group eigenvalues within ``rtol (1 + |z|)``; returns ``[(mean, count)]``."""
    out = []
    remaining = sorted((complex(e) for e in ev), key=lambda e: (e.imag, e.real))
    while remaining:
        seed = remaining.pop(0)
        group = [seed]
        keep = []
        for e in remaining:
            if abs(e - seed) <= rtol * (1.0 + abs(seed)):
                group.append(e)
            else:
                keep.append(e)
        remaining = keep
        out.append((complex(np.mean(group)), len(group)))
    return out


def bem_resonances(surface: BoundarySurface, model: HyperbolicModel, contour: ComplexBox, rank_guess: int = 8,
                   seed=None, details: dict = None, cluster_rtol: float = CLUSTER_RTOL) -> list[Resonance]:
    """Resonances inside the ellipse inscribed in ``contour``.

    ``seed`` defaults to a hash of the problem description so runs are
    reproducible. When ``details`` is a dict it receives the
    :class:`BeynResult`.
    """
    if surface.model != model:
        raise ValueError("surface was built for a different model")
    ell = EllipseContour.inscribed(contour)
    disc = discretization(surface)
    if seed is None:
        seed = _seed_for(surface, contour, rank_guess)
    V = probe_block(surface.size, rank_guess, seed)
    result = beyn(disc.single, ell, V)
    if details is not None:
        details["beyn"] = result
    out = []
    for lam, count in cluster_eigenvalues(result.eigenvalues, cluster_rtol):
        G = disc.single(lam)
        smin = np.linalg.svd(G, compute_uv=False)[-1] / np.linalg.norm(G, 2)
        out.append(Resonance(lam=lam, ell=-1, multiplicity=count, residual=float(smin)))
    return sorted(out, key=lambda r: (-r.lam.imag, r.lam.real))


def multiplicity_winding(surface: BoundarySurface, model: HyperbolicModel, contour: ComplexBox,
                         n_points: int = MIN_CONTOUR_POINTS, max_points: int = 512) -> float:
    """``(1 / 2 pi i) oint tr(G'(z) G(z)^{-1}) dz``, the enclosed pole multiplicity.

    ``G'`` is a central difference with step ``1e-6 (1 + |z|)``. The rule is
    doubled until the value is within 0.1 of an integer and stable.
    """
    if surface.model != model:
        raise ValueError("surface was built for a different model")
    ell = EllipseContour.inscribed(contour)
    disc = discretization(surface)
    cache = {}

    def integrand(z):
        h = 1e-6 * (1.0 + abs(z))
        G = disc.single(z)
        dG = disc.single_difference(z, h)
        lu = lu_factor(G, check_finite=False)
        return np.trace(lu_solve(lu, dG, check_finite=False))

    n = n_points
    prev = None
    while True:
        z, w = ell.nodes(n)
        todo = [complex(q) for q in z if complex(q) not in cache]
        for q, v in zip(todo, _map(integrand, todo)):
            cache[q] = v
        total = sum(wk * cache[complex(zk)] for wk, zk in zip(w, z))
        value = float(total.real)
        near_int = abs(value - round(value)) <= 0.1 and abs(total.imag) <= 0.1
        if prev is not None and near_int and abs(value - prev) <= 1e-3:
            return value
        if n >= max_points:
            if near_int:
                return value
            raise ContourError(f"trace winding {total:.4g} is not integral after {n} points")
        prev = value
        n *= 2
