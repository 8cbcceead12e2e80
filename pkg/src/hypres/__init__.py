"""Resonances of obstacles in hyperbolic space ``H^n_kappa``.

Exact outgoing polynomials for balls in odd dimension, a Frobenius-series
solver for balls in any dimension, Euclidean comparison balls, the width
bounds ``alpha(kappa, rho)`` and boundary-element resonances of star-shaped
obstacles in ``H^3``.
"""

from .bounds import (A_profile, alpha_generic, bound_profile, euclidean_constant, improvement_threshold,
                     marklof_ratio, p_decay, verify_width_bounds)
from .euclid import check_ralston, euclid_ball_resonances
from .geometry import (HyperbolicModel, PolarPoint, distance_from_polar, geodesic_distance, harmonic_dimension,
                       surface_measure_density, warp)
from .radial_exact import ball_resonances_odd, build_outgoing_polynomial, evaluate_outgoing, large_radius_limit
from .radial_series import ball_resonances_general, evaluate_outgoing_general, frobenius_solution
from .resonance import ComplexBox, Resonance
from .zeros import locate_zeros, winding_number

__version__ = "0.1.0"

__all__ = [
    "A_profile", "alpha_generic", "bound_profile", "euclidean_constant", "improvement_threshold",
    "marklof_ratio", "p_decay", "verify_width_bounds", "check_ralston", "euclid_ball_resonances",
    "HyperbolicModel", "PolarPoint", "distance_from_polar", "geodesic_distance", "harmonic_dimension",
    "surface_measure_density", "warp", "ball_resonances_odd", "build_outgoing_polynomial",
    "evaluate_outgoing", "large_radius_limit", "ball_resonances_general", "evaluate_outgoing_general",
    "frobenius_solution", "ComplexBox", "Resonance", "locate_zeros", "winding_number",
]
