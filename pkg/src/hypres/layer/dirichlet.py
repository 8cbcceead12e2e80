"""Exterior Dirichlet problem for ``-Delta - kappa^2 - lambda^2`` outside a star-shaped obstacle.

Two layer ansatzes are offered:

``single``
    ``u = Sl g`` with ``G g = f``. Breaks down at the poles of ``G^{-1}``,
    which include the resonances and, on the real axis, interior Dirichlet
    eigenvalues.
``combined``
    ``u = (Dl + i Sl) g`` with ``(I + N + 2i G) g = 2 f``. The exterior trace of
    ``Dl g`` is ``(g + N g) / 2``, so the trace of ``u`` is ``f``. Regular on the
    real axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve
from scipy.linalg.lapack import zgecon

from ..geometry import HyperbolicModel, distance_from_polar
from .kernels import free_kernel, free_kernel_radial_derivative, normal_derivative_of_distance
from .operators import discretization
from .surface import BoundarySurface

METHODS = ("single", "combined")
MAX_CONDITION = 1e12


class DirichletSolveError(RuntimeError):
    """Raised when the boundary system is singular or too ill-conditioned."""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


def as_polar(points):
    """Split points ``r omega`` (shape ``(..., 3)``) into radii and unit directions."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0):
        raise ValueError("the origin has no direction; it lies inside every star-shaped obstacle")
    return r, x / r[:, None]


@dataclass
class ExteriorField:
    """Layer potential evaluator ``x -> u(x)`` for points given as ``r omega``."""

    surface: BoundarySurface = field(repr=False)
    lam: complex
    method: str
    density: np.ndarray = field(repr=False)
    condition: float

    def __call__(self, points) -> np.ndarray:
        S = self.surface
        model = S.model
        r, omega = as_polar(points)
        inside = r <= S.shape(omega)
        if np.any(inside):
            raise ValueError("evaluation points must lie outside the obstacle")
        qw = S.weights * S.density * self.density
        d = distance_from_polar(model, r[:, None], omega[:, None, :], S.radius[None, :], S.nodes[None, :, :])
        if np.min(d) < 0.5 * S.mesh_width():
            raise ValueError("evaluation point closer to the boundary than half a mesh width")
        K = 1j * free_kernel(model, self.lam, d) if self.method == "combined" else free_kernel(model, self.lam, d)
        if self.method == "combined":
            dnu = normal_derivative_of_distance(model, r[:, None], omega[:, None, :], S.radius[None, :],
                                                S.nodes[None, :, :], S.grad[None, :, :], d=d)
            K = K + free_kernel_radial_derivative(model, self.lam, d) * dnu
        return K @ qw


def solve_exterior_dirichlet(surface: BoundarySurface, model: HyperbolicModel, lam, f_boundary,
                             method: str = "single") -> ExteriorField:
    """Solve for the outgoing field with trace ``f_boundary`` at the nodes.

    Parameters
    ----------
    f_boundary
        Nodal values, or a callable of the boundary points (shape ``(N, 3)``,
        as ``r omega``).
    method
        ``"single"`` or ``"combined"``; see the module docstring.

    Raises
    ------
    DirichletSolveError
        When ``lam`` is at or too close to a pole of the boundary operator.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if surface.model != model:
        raise ValueError("surface was built for a different model")
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda = 0 is excluded")
    if callable(f_boundary):
        f = np.asarray(f_boundary(surface.radius[:, None] * surface.nodes), dtype=complex)
    else:
        f = np.asarray(f_boundary, dtype=complex)
    if f.shape != (surface.size,):
        raise ValueError(f"boundary data must have shape ({surface.size},)")
    disc = discretization(surface)
    if method == "single":
        A, rhs = disc.single(lam), f
    else:
        A, rhs = disc.combined(lam), 2.0 * f
    try:
        lu, piv = lu_factor(A, check_finite=False)
    except LinAlgError as exc:
        raise DirichletSolveError(f"boundary operator is singular at lambda = {lam:.6g}", np.inf) from exc
    rcond, _ = zgecon(lu, np.linalg.norm(A, 1), norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if not cond < MAX_CONDITION:
        raise DirichletSolveError(f"lambda = {lam:.6g} is at or near a pole of the boundary operator", cond)
    g = lu_solve((lu, piv), rhs, check_finite=False)
    # the surplus component of g only reproduces the surplus of f; keep the harmonic part
    g = disc.projector @ g
    return ExteriorField(surface, lam, method, g, float(cond))


def boundary_trace(field_: ExteriorField, omegas) -> np.ndarray:
    """Trace of a single-layer field at arbitrary boundary directions."""
    if field_.method != "single":
        raise ValueError("off-node traces are implemented for the single-layer ansatz")
    disc = discretization(field_.surface)
    return disc.single_rows(omegas, field_.lam) @ field_.density
