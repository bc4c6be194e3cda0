"""Lyapunov linear programs: Hessian bounds, assembly, solving and verification."""
from .beta import BetaTable, bounding_boxes, compute_beta
from .lp import (
    DEFAULT_ALPHA,
    CpaCandidate,
    LinearProgram,
    VariableLayout,
    assemble_feasibility_lp,
    assemble_slack_lp,
    gradient_operator,
)
from .simplex import SimplexResult, solve_simplex
from .solve import BACKENDS, FEASIBILITY_TOL, LPSolution, solve_lp
from .verify import DEFAULT_SAMPLES, VERIFY_TOL, Verdict, verify_certificate

__all__ = [
    "BACKENDS", "DEFAULT_ALPHA", "DEFAULT_SAMPLES", "FEASIBILITY_TOL", "VERIFY_TOL",
    "BetaTable", "CpaCandidate", "LPSolution", "LinearProgram", "SimplexResult",
    "VariableLayout", "Verdict", "assemble_feasibility_lp", "assemble_slack_lp",
    "bounding_boxes", "compute_beta", "gradient_operator", "solve_lp", "solve_simplex",
    "verify_certificate",
]
