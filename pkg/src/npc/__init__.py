"""Degrees of polar classes, dual and ED degrees, and Euler characteristics
of line bundles on smooth projective varieties."""

from .groebner import SchemeStats, eliminate, groebner_basis, is_smooth, normal_form, scheme_stats
from .hrr import ChiPolynomial, assemble_chi, plan_needed_descriptors, todd_class
from .polar import (
    DegreeTable,
    GenericityError,
    PolarDescriptor,
    dual_stats,
    ed_degree,
    measure_descriptor,
    polar_class_degrees,
    polar_product_table,
)
from .poly import Ideal, Polynomial, Ring, parse_polynomial

__version__ = "0.1.0"
