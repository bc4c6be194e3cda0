"""Mesh construction strategies and the adaptive refinement loop."""
from .adapt import (
    EXHAUSTED,
    LP_FAILURE,
    VIABLE,
    IterationRecord,
    SynthesisReport,
    adapt,
    initial_mesh,
    run_method,
    simplex_scores,
)
from .config import METHOD_ALIASES, METHODS, MIN_EDGE, VIABLE_TOL, SynthesisConfig
from .method2 import RootFindingError, axis_coordinates, method2_vertices, second_derivative_roots

__all__ = [
    "EXHAUSTED", "LP_FAILURE", "METHOD_ALIASES", "METHODS", "MIN_EDGE", "VIABLE", "VIABLE_TOL",
    "IterationRecord", "RootFindingError", "SynthesisConfig", "SynthesisReport",
    "adapt", "axis_coordinates", "initial_mesh", "method2_vertices", "run_method",
    "second_derivative_roots", "simplex_scores",
]
