"""Simplicial meshes of box domains: construction, geometry, refinement."""
from .delaunay import DelaunayError, build_delaunay_mesh
from .geometry import (
    SimplexGeometry,
    SingularSimplexError,
    all_geometry,
    all_gradients,
    cpa_gradient,
    longest_edge_global,
    simplex_geometry,
    taylor_coefficients,
)
from .grid import build_grid_mesh, kuhn_triangulation
from .refine import refine_leb
from .triangulation import PointLocationError, Triangulation

__all__ = [
    "DelaunayError", "PointLocationError", "SimplexGeometry", "SingularSimplexError",
    "Triangulation", "all_geometry", "all_gradients", "build_delaunay_mesh",
    "build_grid_mesh", "cpa_gradient", "kuhn_triangulation", "longest_edge_global",
    "refine_leb", "simplex_geometry", "taylor_coefficients",
]
