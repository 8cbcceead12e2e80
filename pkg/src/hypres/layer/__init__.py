"""Boundary-integral machinery for star-shaped obstacles in ``H^3``."""

from .dirichlet import ExteriorField, solve_exterior_dirichlet
from .eigen import bem_resonances, multiplicity_winding
from .kernels import ball_mode_symbol, double_layer_kernel, free_kernel
from .operators import (DiscretizedOperator, assemble_combined_field, assemble_double_layer,
                        assemble_single_layer)
from .surface import BoundarySurface, ShapeFunction, SphereGrid, parse_shape, read_shape_file

__all__ = [
    "ExteriorField", "solve_exterior_dirichlet", "bem_resonances", "multiplicity_winding",
    "ball_mode_symbol", "double_layer_kernel", "free_kernel", "DiscretizedOperator",
    "assemble_combined_field", "assemble_double_layer", "assemble_single_layer", "BoundarySurface",
    "ShapeFunction", "SphereGrid", "parse_shape", "read_shape_file",
]
