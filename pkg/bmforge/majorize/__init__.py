"""Radial majorants for non-radial weights."""

from .annuli import annulus_maxima, annulus_points, build_radial_majorant, envelope_nodes, smoothing_slope
from .expression import compile_expression, log_weight_evaluator
from .holder import holder_constant, verify_holder_chain
from .reduce import ReductionResult, audit_majorization, reduce_nonradial, reduce_nonradial_detailed

__all__ = [
    "ReductionResult",
    "annulus_maxima",
    "annulus_points",
    "audit_majorization",
    "build_radial_majorant",
    "compile_expression",
    "envelope_nodes",
    "holder_constant",
    "log_weight_evaluator",
    "reduce_nonradial",
    "reduce_nonradial_detailed",
    "smoothing_slope",
    "verify_holder_chain",
]
