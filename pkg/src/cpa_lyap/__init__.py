"""Synthesis of continuous piecewise-affine Lyapunov functions by linear programming."""
from .cert import CpaCandidate, LinearProgram, solve_lp, verify_certificate
from .estimator import CPALyapunovEstimator
from .expr import SystemModel, parse
from .mesh import Triangulation, build_delaunay_mesh, build_grid_mesh, refine_leb
from .synth import SynthesisConfig, SynthesisReport, adapt, run_method

__version__ = "0.1.0"

__all__ = [
    "CPALyapunovEstimator", "CpaCandidate", "LinearProgram", "SynthesisConfig",
    "SynthesisReport", "SystemModel", "Triangulation", "adapt", "build_delaunay_mesh",
    "build_grid_mesh", "parse", "refine_leb", "run_method", "solve_lp", "verify_certificate",
]
