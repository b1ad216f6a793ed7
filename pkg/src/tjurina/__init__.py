"""Tjurina numbers and value-set invariants of reduced curve germs."""

__version__ = "0.1.0"

from .combinatorics import MaximalsReport, fiber, maximals, quotient_length, theta
from .construct import curve_from_branches, curve_from_polynomial
from .curve import Branch, Curve, intersection_multiplicity, value_of_function
from .errors import (
    ComputationError,
    InputError,
    ParseError,
    PreconditionError,
    TjurinaError,
    VerificationFailed,
)
from .estimator import TjurinaEstimator
from .invariants import (
    InvariantReport,
    compute,
    delta_plane,
    delta_via_recursion,
    tjurina_main,
    tjurina_plane,
    tjurina_r2,
    tjurina_r3,
)
from .parser import parse_expression, parse_factors
from .puiseux import newton_polygon, puiseux_branches
from .series import ABOVE_TRUNC, TOP, MPoly, Series
from .value_sets import ValueSet, gamma_set, gaps, jacobian_value_set, lambda_set, project
from .verification import tjurina_direct, torsion_test
