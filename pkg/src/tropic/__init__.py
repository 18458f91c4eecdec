"""Tropical linear algebra: residuals, distances and solutions of linear
equations over max-plus, min-plus, max-times and min-times."""

from .dependence import extract_basis, independence_margin, is_dependent, is_independent
from .distance import make_consistent, membership, nearest_point, project_above, project_below, residual
from .linalg import CoVector, Matrix, Vector, mat_mul, mat_vec_mul, pseudo_invert, vec_distance
from .semifield import MAX_PLUS, MAX_TIMES, MIN_PLUS, MIN_TIMES, Scalar, Semifield, get_semifield
from .solver import (
    enumerate_minimal_generators,
    general_solution,
    solve_equation,
    solve_extended,
    solve_inequality,
    solve_system,
)

__all__ = [
    "CoVector", "Matrix", "Vector", "Scalar", "Semifield",
    "MAX_PLUS", "MIN_PLUS", "MAX_TIMES", "MIN_TIMES", "get_semifield",
    "mat_mul", "mat_vec_mul", "pseudo_invert", "vec_distance",
    "make_consistent", "membership", "nearest_point", "project_above", "project_below", "residual",
    "extract_basis", "independence_margin", "is_dependent", "is_independent",
    "enumerate_minimal_generators", "general_solution", "solve_equation",
    "solve_extended", "solve_inequality", "solve_system",
]
