"""Star-shaped boundaries ``r = f(omega)`` in H^3 and their node sets.

Nodes form a latitude-longitude grid: colatitudes at the Fejer points
``theta_a = (a + 1/2) pi / n_theta`` and equispaced longitudes
``phi_b = 2 pi b / n_phi``. The grid is invariant under rotation by
``2 pi / n_phi`` about the polar axis, which the operator assembly exploits.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..geometry import HyperbolicModel, surface_measure_density
from .harmonics import real_sph_harm


def unit_vectors(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def fejer_weights(n: int) -> np.ndarray:
    """Weights of Fejer's first rule on ``z = cos(theta_a)`` for ``int_{-1}^{1} dz``."""
    theta = (np.arange(n) + 0.5) * math.pi / n
    k = np.arange(1, n // 2 + 1)
    s = np.cos(2.0 * np.outer(theta, k)) / (4.0 * k * k - 1.0)
    return (2.0 / n) * (1.0 - 2.0 * s.sum(axis=1))


@dataclass(frozen=True)
class SphereGrid:
    n_theta: int
    n_phi: int

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 3:
            raise ValueError("grid too coarse")

    @classmethod
    def for_count(cls, count: int) -> "SphereGrid":
        """Grid with exactly ``count`` nodes and ``n_phi`` as close to ``2 n_theta`` as possible."""
        best = None
        for nt in range(2, int(math.isqrt(count)) + 2):
            if count % nt:
                continue
            nphi = count // nt
            if nphi < 3:
                continue
            key = (abs(nphi - 2 * nt), -nt)
            if best is None or key < best[0]:
                best = (key, nt, nphi)
        if best is None:
            raise ValueError(f"no latitude-longitude grid with {count} nodes")
        return cls(best[1], best[2])

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    @property
    def theta(self) -> np.ndarray:
        return (np.arange(self.n_theta) + 0.5) * math.pi / self.n_theta

    @property
    def phi(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi

    def nodes(self) -> np.ndarray:
        """Unit vectors, ring-major: node ``a * n_phi + b`` is ``(theta_a, phi_b)``."""
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        return unit_vectors(th, ph).reshape(-1, 3)

    def weights(self) -> np.ndarray:
        """Quadrature weights for ``dvol_h`` on S^2 (exact for band-limited integrands)."""
        w = np.outer(fejer_weights(self.n_theta), np.full(self.n_phi, 2.0 * math.pi / self.n_phi))
        return w.ravel()


_TRIPLE = re.compile(r"^\s*(-?\d+)\s+(-?\d+)\s+(\S+)\s*$")


@dataclass(frozen=True)
class ShapeFunction:
    """``f = constant + sum c_lm Y_l^m`` with real orthonormal harmonics."""

    constant: float
    terms: tuple = ()

    def __post_init__(self):
        for ell, m, _ in self.terms:
            if ell < 0 or abs(m) > ell:
                raise ValueError(f"invalid harmonic index ({ell}, {m})")

    @classmethod
    def sphere(cls, R: float) -> "ShapeFunction":
        return cls(float(R))

    @property
    def degree(self) -> int:
        return max((ell for ell, _, _ in self.terms), default=0)

    def __call__(self, omega, gradient: bool = False):
        omega = np.asarray(omega, dtype=float)
        val = np.full(omega.shape[:-1], self.constant)
        grad = np.zeros(omega.shape)
        for ell, m, c in self.terms:
            if gradient:
                v, g = real_sph_harm(ell, m, omega, gradient=True)
                grad += c * g
            else:
                v = real_sph_harm(ell, m, omega)
            val += c * v
        return (val, grad) if gradient else val

    def min_on_grid(self, n_theta: int = 181, n_phi: int = 360) -> float:
        th = np.linspace(0.0, math.pi, n_theta)
        ph = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
        tt, pp = np.meshgrid(th, ph, indexing="ij")
        return float(np.min(self(unit_vectors(tt, pp))))

    def check_star_shaped(self):
        fmin = self.min_on_grid()
        if not fmin > 0:
            raise ValueError(f"radius function is not positive (min {fmin:.3g}); obstacle is not star-shaped")


def parse_shape(text: str) -> ShapeFunction:
    """Parse a shape description.

    One ``constant <value>`` line plus any number of ``<ell> <m> <coefficient>``
    lines; ``#`` starts a comment. Duplicated ``(ell, m)`` entries are summed.
    """
    constant = None
    coeffs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "constant" and len(parts) == 2:
            constant = float(parts[1])
            continue
        mt = _TRIPLE.match(line)
        if not mt:
            raise ValueError(f"line {lineno}: expected 'constant <value>' or '<ell> <m> <coefficient>'")
        ell, m, c = int(mt.group(1)), int(mt.group(2)), float(mt.group(3))
        if ell < 0 or abs(m) > ell:
            raise ValueError(f"line {lineno}: invalid harmonic index ({ell}, {m})")
        coeffs[(ell, m)] = coeffs.get((ell, m), 0.0) + c
    if constant is None:
        raise ValueError("shape description needs a 'constant' line")
    shape = ShapeFunction(constant, tuple((l, m, c) for (l, m), c in sorted(coeffs.items())))
    shape.check_star_shaped()
    return shape


def read_shape_file(path) -> ShapeFunction:
    return parse_shape(Path(path).read_text())


@dataclass(frozen=True, eq=False)
class BoundarySurface:
    """A star-shaped boundary together with its node set and node data.

    ``density`` is the surface measure against ``dvol_h`` at the nodes, so
    ``sum(weights * density)`` approximates the boundary area.
    """

    shape: ShapeFunction
    model: HyperbolicModel
    grid: SphereGrid
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    radius: np.ndarray = field(repr=False)
    grad: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, shape: ShapeFunction, model: HyperbolicModel, grid) -> "BoundarySurface":
        if model.dim != 3:
            raise ValueError("boundary surfaces are implemented in H^3 only")
        if isinstance(grid, int):
            grid = SphereGrid.for_count(grid)
        shape.check_star_shaped()
        nodes = grid.nodes()
        f, g = shape(nodes, gradient=True)
        dens = surface_measure_density(model, f, np.sum(g * g, axis=-1))
        return cls(shape, model, grid, nodes, grid.weights(), f, g, np.asarray(dens))

    @classmethod
    def sphere(cls, model: HyperbolicModel, R: float, grid) -> "BoundarySurface":
        return cls.build(ShapeFunction.sphere(R), model, grid)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def area(self) -> float:
        return float(np.sum(self.weights * self.density))

    def mesh_width(self) -> float:
        """Typical geodesic spacing of the nodes."""
        return math.sqrt(self.area() / self.size)

    def points(self):
        """Nodes as ``(radius, direction)`` pairs."""
        return self.radius, self.nodes
