"""Bilinear semiclassical moment functionals.

From four defining polynomials (A1, B1, A2, B2) this package builds the
marginal weights and their integration contours, evaluates the coupled
fundamental functionals by complex-path quadrature, reconstructs moment
tables from recurrence data (Favard-style), and certifies the structural
properties of the family: moment recurrences, solution-space dimension,
linear independence, and saddle-point asymptotics.
"""

from . import errors
from .polycore import CPoly, PartialFraction, RootMultiset, common_factor, \
    partial_fractions, poly_eval, poly_roots
from .tables import BOPPair, BimomentTable, RecurrenceSystem, delta, \
    extract_recurrence, monic_bops, pair_apply
from .favard import favard_reconstruct, favard_verify, leading_minor_prediction
from .semiclassical import SemiclassicalSpec, delta_solutions, propagate_moments, \
    recurrence_residual, reduce_common_factor, reduce_to_linear, validate_spec
from .weights import Contour, Sector, WeightSpec, build_contours, build_weight, \
    normalize_potential, sectors_at, trace_sdc
from .quadrature import FunctionalHandle, ProblemSetup, asymptotic_check, \
    bimoment_table, generating_eval, independence_certificate, laplace, \
    make_setup, rho_factorization_check

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CPoly", "RootMultiset", "PartialFraction",
    "poly_eval", "poly_roots", "partial_fractions", "common_factor",
    "BimomentTable", "BOPPair", "RecurrenceSystem",
    "delta", "pair_apply", "monic_bops", "extract_recurrence",
    "favard_reconstruct", "favard_verify", "leading_minor_prediction",
    "SemiclassicalSpec", "validate_spec", "propagate_moments",
    "recurrence_residual", "reduce_to_linear", "reduce_common_factor",
    "delta_solutions",
    "WeightSpec", "Sector", "Contour",
    "build_weight", "sectors_at", "build_contours", "trace_sdc",
    "normalize_potential",
    "FunctionalHandle", "ProblemSetup", "laplace", "bimoment_table",
    "generating_eval", "rho_factorization_check", "independence_certificate",
    "asymptotic_check", "make_setup",
]
