"""Per-simplex geometric quantities used by the Lyapunov program."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .triangulation import Triangulation

EDGE_TIE_TOL = 1e-12


class SingularSimplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplexGeometry:
    X: np.ndarray
    X_inv: np.ndarray
    c: np.ndarray
    longest_edge: tuple[int, int, float]  # local vertex indices and length


def taylor_coefficients(points: np.ndarray, at_origin: np.ndarray) -> np.ndarray:
    """Coefficients ``c_{i,j}`` for simplices given as ``(m, n + 1, n)`` points.

    Away from the origin ``c_{i,j} = n max_k |x_j - x_k|^2``; for simplices
    with the origin as local vertex 0,
    ``c_{i,j} = n |x_j - x_0| (max_{k>=1} |x_0 - x_k| + |x_j - x_0|)``.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[2]
    d = np.linalg.norm(points[:, :, None, :] - points[:, None, :, :], axis=3)
    c_far = n * np.max(d, axis=2) ** 2
    d0 = d[:, :, 0]
    reach = np.max(d[:, 0, 1:], axis=1, keepdims=True)
    c_origin = n * d0 * (reach + d0)
    return np.where(np.asarray(at_origin)[:, None], c_origin, c_far)


def all_geometry(t: Triangulation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(X, X_inv, c)`` for every simplex of ``t``."""
    X = t.edge_matrices
    scale = np.max(np.linalg.norm(X, axis=2), axis=1) ** t.n
    det = np.linalg.det(X)
    bad = np.abs(det) <= 1e-12 * scale
    if np.any(bad):
        raise SingularSimplexError(f"simplex {int(np.flatnonzero(bad)[0])} is degenerate")
    X_inv = np.linalg.inv(X)
    c = taylor_coefficients(t.vertices[t.simplices], t.origin_flags)
    return X, X_inv, c


def longest_edge_global(vertices: np.ndarray, simplex) -> tuple[int, int]:
    """Longest edge of a simplex as a sorted pair of global vertex indices.

    Lengths within ``EDGE_TIE_TOL`` of the maximum count as equal; the
    lexicographically smallest index pair then wins.
    """
    s = sorted(int(v) for v in simplex)
    pts = np.array([vertices[v] for v in s])
    pairs = [(p, q) for p in range(len(s)) for q in range(p + 1, len(s))]
    diff = pts[[p for p, _ in pairs]] - pts[[q for _, q in pairs]]
    lengths = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    top = lengths.max() - EDGE_TIE_TOL
    return min((s[p], s[q]) for (p, q), length in zip(pairs, lengths) if length >= top)


def simplex_geometry(t: Triangulation, i: int) -> SimplexGeometry:
    X = t.edge_matrices[i]
    scale = np.max(np.linalg.norm(X, axis=1)) ** t.n
    if abs(np.linalg.det(X)) <= 1e-12 * scale:
        raise SingularSimplexError(f"simplex {i} is degenerate")
    X_inv = np.linalg.inv(X)
    c = taylor_coefficients(t.points(i)[None], t.origin_flags[i:i + 1])[0]
    a, b = longest_edge_global(t.vertices, t.simplices[i])
    local = [int(np.flatnonzero(t.simplices[i] == v)[0]) for v in (a, b)]
    length = float(np.linalg.norm(t.vertices[a] - t.vertices[b]))
    return SimplexGeometry(X, X_inv, c, (local[0], local[1], length))


def cpa_gradient(t: Triangulation, i: int, W) -> np.ndarray:
    """Gradient of the CPA interpolant of vertex values ``W`` on simplex ``i``.

    ``W`` holds one value per mesh vertex.
    """
    W = np.asarray(W, dtype=float)
    s = t.simplices[i]
    w_bar = W[s[1:]] - W[s[0]]
    X = t.edge_matrices[i]
    try:
        return np.linalg.solve(X, w_bar)
    except np.linalg.LinAlgError as exc:
        raise SingularSimplexError(f"simplex {i} is degenerate") from exc


def all_gradients(t: Triangulation, W) -> np.ndarray:
    """CPA gradients of every simplex, shape ``(m, n)``."""
    W = np.asarray(W, dtype=float)
    w_bar = W[t.simplices[:, 1:]] - W[t.simplices[:, :1]]
    return np.linalg.solve(t.edge_matrices, w_bar[..., None])[..., 0]
