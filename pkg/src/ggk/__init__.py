"""Graded gentle algebras, their surface models and Koszul duality on arcs."""
from .dissection import Dissection, algebra_from_dissection, dissection_from_json, dual_pair_of
from .gentle_core import GentlePair, Path, make_pair, quadratic_dual, validate_gentle
from .homalg import hom_complex, hom_dims, is_quasi_iso, underlying_cohomology
from .intersections import boundary_intersections, int_table, interior_intersections, morphism_from_intersection
from .koszul import half_rotate, half_rotate_open, koszul_object, simple_resolution, smooth, smooth_thread
from .string_model import GradedString, build_x_module, make_string, validate_string

__all__ = [
    "Dissection", "GentlePair", "GradedString", "Path",
    "algebra_from_dissection", "boundary_intersections", "build_x_module", "dissection_from_json",
    "dual_pair_of", "half_rotate", "half_rotate_open", "hom_complex", "hom_dims", "int_table",
    "interior_intersections", "is_quasi_iso", "koszul_object", "make_pair", "make_string",
    "morphism_from_intersection", "quadratic_dual", "simple_resolution", "smooth", "smooth_thread",
    "underlying_cohomology", "validate_gentle", "validate_string",
]
