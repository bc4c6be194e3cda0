"""Freudenthal (Kuhn) triangulations of rectilinear grids."""
from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .triangulation import Triangulation

DIVISIBILITY_TOL = 1e-9


def kuhn_triangulation(axes: Sequence[np.ndarray], reflect: bool = True) -> Triangulation:
    """Split every cell of the tensor grid ``axes[0] x ... x axes[n-1]`` into n! simplices.

    Each simplex follows a monotone lattice path across its cell, one axis
    step at a time, so neighbouring cells agree on their shared faces. With
    ``reflect`` the paths start at the cell corner nearest the origin and
    run outward, making the mesh symmetric under sign flips of any axis;
    otherwise every path starts at the cell's lower corner.
    """
    axes = [np.asarray(a, dtype=float) for a in axes]
    n = len(axes)
    shape = tuple(len(a) for a in axes)
    if any(k < 2 for k in shape):
        raise ValueError("every axis needs at least two coordinates")
    if any(np.any(np.diff(a) <= 0) for a in axes):
        raise ValueError("axis coordinates must be strictly increasing")

    mesh = np.meshgrid(*axes, indexing="ij")
    vertices = np.stack([g.ravel() for g in mesh], axis=1)

    corners = np.stack(
        np.meshgrid(*[np.arange(k - 1) for k in shape], indexing="ij"), axis=-1
    ).reshape(-1, n)
    strides = np.array([int(np.prod(shape[k + 1:])) for k in range(n)], dtype=np.int64)
    # per cell and axis: +1 when the path moves up the axis, -1 when down
    direction = np.ones_like(corners)
    if reflect:
        for k in range(n):
            upper = axes[k][corners[:, k] + 1]
            direction[:, k] = np.where(upper <= 0.0, -1, 1)
    start = (corners + (direction < 0)) @ strides
    moves = direction * strides

    simplices = []
    for perm in itertools.permutations(range(n)):
        steps = np.cumsum(moves[:, list(perm)], axis=1)
        simplices.append(np.column_stack([start, start[:, None] + steps]))
    simplices = np.stack(simplices, axis=1).reshape(-1, n + 1)
    return Triangulation(vertices, simplices)


def _axis_coordinates(lo: float, hi: float, h: float, axis: int) -> np.ndarray:
    if h <= 0:
        raise ValueError(f"spacing on axis {axis + 1} must be positive")
    cells = (hi - lo) / h
    k = int(round(cells))
    if k < 1 or abs(cells - k) > DIVISIBILITY_TOL * max(1.0, cells):
        raise ValueError(f"spacing {h} does not divide axis {axis + 1} of length {hi - lo}")
    below = -lo / h
    k0 = int(round(below))
    if abs(below - k0) > DIVISIBILITY_TOL * max(1.0, abs(below)):
        raise ValueError(f"the origin is not a lattice point on axis {axis + 1}")
    coords = (np.arange(k + 1) - k0) * h
    coords[0], coords[-1] = lo, hi
    if 0 <= k0 <= k:
        coords[k0] = 0.0
    return coords


def build_grid_mesh(domain, spacing) -> Triangulation:
    """Uniform Freudenthal grid over the box ``domain`` (a list of (lo, hi)).

    ``spacing`` is one number or one per axis; it must divide each axis and
    put the origin on the lattice.
    """
    domain = [(float(a), float(b)) for a, b in domain]
    n = len(domain)
    h = np.broadcast_to(np.asarray(spacing, dtype=float), (n,))
    axes = [_axis_coordinates(a, b, h[k], k) for k, (a, b) in enumerate(domain)]
    return kuhn_triangulation(axes)
