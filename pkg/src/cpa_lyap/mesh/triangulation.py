"""The simplicial mesh type, point location and JSON I/O."""
from __future__ import annotations

import json
import math
from functools import cached_property
from pathlib import Path

import numpy as np

ORIGIN_TOL = 1e-12
BARY_TOL = 1e-9
BRUTE_FORCE_LIMIT = 10_000


class PointLocationError(ValueError):
    """A query point lies outside every simplex of the mesh."""


class Triangulation:
    """Conforming simplicial mesh.

    ``vertices`` is ``(N, n)`` and ``simplices`` is ``(m, n + 1)`` with
    vertex indices. Simplices that have the origin as a vertex are reordered
    so that the origin is local vertex 0. Instances are treated as
    immutable: both arrays are made read-only.
    """

    def __init__(self, vertices, simplices):
        vertices = np.array(vertices, dtype=float)
        simplices = np.array(simplices, dtype=np.int64)
        if vertices.ndim != 2:
            raise ValueError("vertices must be a 2-d array")
        n = vertices.shape[1]
        if simplices.ndim != 2 or simplices.shape[1] != n + 1:
            raise ValueError(f"simplices must have shape (m, {n + 1})")
        if simplices.size and (simplices.min() < 0 or simplices.max() >= len(vertices)):
            raise ValueError("simplex references a missing vertex")

        near = np.flatnonzero(np.max(np.abs(vertices), axis=1) <= ORIGIN_TOL) if len(vertices) else []
        self.origin_index: int | None = int(near[0]) if len(near) else None
        if self.origin_index is not None:
            vertices[self.origin_index] = 0.0
            has = simplices == self.origin_index
            rows = np.flatnonzero(has.any(axis=1))
            for r in rows:
                j = int(np.flatnonzero(has[r])[0])
                if j:
                    s = simplices[r]
                    simplices[r] = np.concatenate(([s[j]], s[:j], s[j + 1:]))
            flags = np.zeros(len(simplices), dtype=bool)
            flags[rows] = True
        else:
            flags = np.zeros(len(simplices), dtype=bool)

        vertices.setflags(write=False)
        simplices.setflags(write=False)
        flags.setflags(write=False)
        self.vertices = vertices
        self.simplices = simplices
        self.origin_flags = flags

    def __repr__(self) -> str:
        return f"Triangulation(n={self.n}, N={self.n_vertices}, m={self.n_simplices})"

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_simplices(self) -> int:
        return len(self.simplices)

    def points(self, i: int) -> np.ndarray:
        """Coordinates of the vertices of simplex ``i``, shape ``(n + 1, n)``."""
        return self.vertices[self.simplices[i]]

    @cached_property
    def edge_matrices(self) -> np.ndarray:
        """``X`` for every simplex: rows ``x_{i,j} - x_{i,0}``, shape ``(m, n, n)``."""
        p = self.vertices[self.simplices]
        return p[:, 1:, :] - p[:, :1, :]

    @cached_property
    def volumes(self) -> np.ndarray:
        return np.abs(np.linalg.det(self.edge_matrices)) / math.factorial(self.n)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """``adjacency[i, j]``: simplex across the facet opposite local vertex ``j``, or -1."""
        m, k = self.simplices.shape
        adj = np.full((m, k), -1, dtype=np.int64)
        if m == 0:
            return adj
        facets = np.stack([np.delete(self.simplices, j, axis=1) for j in range(k)], axis=1)
        facets = np.sort(facets, axis=2).reshape(m * k, k - 1)
        owner = np.repeat(np.arange(m), k)
        local = np.tile(np.arange(k), m)
        order = np.lexsort(facets.T[::-1])
        f = facets[order]
        same = np.all(f[1:] == f[:-1], axis=1)
        first = order[:-1][same]
        second = order[1:][same]
        adj[owner[first], local[first]] = owner[second]
        adj[owner[second], local[second]] = owner[first]
        return adj

    @cached_property
    def _inverse_edges(self) -> np.ndarray:
        return np.linalg.inv(self.edge_matrices)

    def barycentric(self, i: int, x) -> np.ndarray:
        """Barycentric coordinates of ``x`` with respect to simplex ``i``."""
        x = np.asarray(x, dtype=float)
        lam = (x - self.vertices[self.simplices[i, 0]]) @ self._inverse_edges[i]
        return np.concatenate(([1.0 - lam.sum()], lam))

    def _bary_many(self, idx: np.ndarray, x: np.ndarray) -> np.ndarray:
        base = self.vertices[self.simplices[idx, 0]]
        lam = np.einsum("pk,pkj->pj", x - base, self._inverse_edges[idx])
        return np.concatenate((1.0 - lam.sum(axis=1, keepdims=True), lam), axis=1)

    def locate(self, x) -> tuple[int, np.ndarray]:
        """Simplex containing ``x`` and the barycentric coordinates of ``x`` in it."""
        idx, bary = self.locate_many(np.atleast_2d(np.asarray(x, dtype=float)))
        return int(idx[0]), bary[0]

    def locate_many(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised :meth:`locate` for points of shape ``(P, n)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.n_simplices < BRUTE_FORCE_LIMIT:
            idx = self._locate_brute(x)
        else:
            idx = self._locate_walk(x)
        bad = idx < 0
        if np.any(bad):
            raise PointLocationError(f"point {x[np.flatnonzero(bad)[0]].tolist()} is outside the mesh")
        return idx, self._bary_many(idx, x)

    def _locate_brute(self, x: np.ndarray) -> np.ndarray:
        m = self.n_simplices
        chunk = max(1, 2_000_000 // max(m, 1))
        out = np.full(len(x), -1, dtype=np.int64)
        base = self.vertices[self.simplices[:, 0]]
        inv = self._inverse_edges
        for s in range(0, len(x), chunk):
            xs = x[s:s + chunk]
            lam = np.einsum("pmk,mkj->pmj", xs[:, None, :] - base[None], inv)
            worst = np.minimum(lam.min(axis=2), 1.0 - lam.sum(axis=2))
            best = np.argmax(worst, axis=1)
            ok = worst[np.arange(len(xs)), best] >= -BARY_TOL
            out[s:s + chunk] = np.where(ok, best, -1)
        return out

    def _locate_walk(self, x: np.ndarray, max_steps: int = 10_000) -> np.ndarray:
        from scipy.spatial import cKDTree

        centroids = self.vertices[self.simplices].mean(axis=1)
        _, cur = cKDTree(centroids).query(x)
        cur = np.asarray(cur, dtype=np.int64)
        out = np.full(len(x), -1, dtype=np.int64)
        active = np.arange(len(x))
        adj = self.adjacency
        for _ in range(max_steps):
            if not len(active):
                break
            bary = self._bary_many(cur[active], x[active])
            j = np.argmin(bary, axis=1)
            inside = bary[np.arange(len(active)), j] >= -BARY_TOL
            out[active[inside]] = cur[active[inside]]
            nxt = adj[cur[active], j]
            moving = ~inside & (nxt >= 0)
            cur[active[moving]] = nxt[moving]
            active = active[moving]
        if len(active):
            # walks that cycled fall back to the exhaustive scan
            out[active] = self._locate_brute(x[active])
        return out

    def interpolate(self, values, x) -> np.ndarray:
        """Evaluate the CPA interpolant of per-vertex ``values`` at points ``x``."""
        values = np.asarray(values, dtype=float)
        idx, bary = self.locate_many(x)
        return np.einsum("pj,pj->p", bary, values[self.simplices[idx]])

    # -- I/O ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "vertices": self.vertices.tolist(),
            "simplices": self.simplices.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Triangulation:
        n = int(data["n"])
        vertices = np.asarray(data["vertices"], dtype=float).reshape(-1, n)
        simplices = np.asarray(data["simplices"], dtype=np.int64).reshape(-1, n + 1)
        return cls(vertices, simplices)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> Triangulation:
        return cls.from_dict(json.loads(Path(path).read_text()))
