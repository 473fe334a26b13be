"""Exact Darboux-integrability toolkit for polynomial vector fields on ellipsoids."""

from .bounds import (
    bound_hyperplanes_Rn,
    bound_meridians,
    bound_parallels,
    check_threshold,
    integrability_thresholds,
)
from .catalog import load_system, verify_catalog
from .coeffs import CoeffValue
from .darboux import build_darboux_function, realify_exp_pair, realify_pair, solve_relation
from .field import VectorField, degree_vector, lie_derivative, lie_iterate, on_surface_check
from .invariants import (
    cofactor_solve,
    exp_factor_check,
    extactic,
    find_meridians,
    find_parallels,
    invariance_check,
    multiplicity,
)
from .parser import ExpressionContext, parse_expression
from .poly import MultiPoly, UniPoly, poly_det
from .roots import uni_gaussian_roots
from .surface import Ellipsoid, dim_on_surface, equal_on_surface, hyperplane_tangency, normal_form

__all__ = [
    "CoeffValue",
    "Ellipsoid",
    "ExpressionContext",
    "MultiPoly",
    "UniPoly",
    "VectorField",
    "bound_hyperplanes_Rn",
    "bound_meridians",
    "bound_parallels",
    "build_darboux_function",
    "check_threshold",
    "cofactor_solve",
    "degree_vector",
    "dim_on_surface",
    "equal_on_surface",
    "exp_factor_check",
    "extactic",
    "find_meridians",
    "find_parallels",
    "hyperplane_tangency",
    "integrability_thresholds",
    "invariance_check",
    "lie_derivative",
    "lie_iterate",
    "load_system",
    "multiplicity",
    "normal_form",
    "on_surface_check",
    "parse_expression",
    "poly_det",
    "realify_exp_pair",
    "realify_pair",
    "solve_relation",
    "uni_gaussian_roots",
    "verify_catalog",
]
