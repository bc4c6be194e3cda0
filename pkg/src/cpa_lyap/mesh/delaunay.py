"""Incremental Bowyer-Watson Delaunay triangulation in two and three dimensions."""
from __future__ import annotations

import math

import numpy as np

from .grid import kuhn_triangulation
from .triangulation import Triangulation

DEGENERACY_RATIO = 1e-10
_ORIENT_EPS = 1e-12


class DelaunayError(ValueError):
    pass


def _circumsphere(p: np.ndarray) -> tuple[np.ndarray, float]:
    A = p[1:] - p[0]
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    try:
        u = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        return np.full(p.shape[1], np.nan), np.inf
    return p[0] + u, float(u @ u)


def _super_simplex(center: np.ndarray, radius: float) -> np.ndarray:
    n = len(center)
    if n == 2:
        base = np.array([[0.0, 2.0], [-math.sqrt(3.0), -1.0], [math.sqrt(3.0), -1.0]])
    else:
        base = 3.0 * np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
    return center + radius * base


def _orient(face_pts: np.ndarray, p: np.ndarray) -> float:
    return float(np.linalg.det(face_pts - p))


class _BowyerWatson:
    def __init__(self, points: np.ndarray, reach: float = 1e3):
        self.n = points.shape[1]
        lo, hi = points.min(axis=0), points.max(axis=0)
        diag = float(np.linalg.norm(hi - lo)) or 1.0
        self.scale = diag
        sup = _super_simplex(0.5 * (lo + hi), reach * diag)
        self.pts = np.vstack([points, sup])
        self.n_real = len(points)
        self.simplices: dict[int, tuple[int, ...]] = {}
        self.facets: dict[tuple[int, ...], set[int]] = {}
        self.next_id = 0
        cap = 64
        self.centers = np.zeros((cap, self.n))
        self.radii = np.full(cap, -1.0)
        self._add(tuple(range(self.n_real, self.n_real + self.n + 1)))

    def _add(self, s: tuple[int, ...]) -> int:
        s = tuple(sorted(s))
        sid = self.next_id
        self.next_id += 1
        if sid >= len(self.radii):
            self.centers = np.vstack([self.centers, np.zeros_like(self.centers)])
            self.radii = np.concatenate([self.radii, np.full(len(self.radii), -1.0)])
        c, r2 = _circumsphere(self.pts[list(s)])
        self.centers[sid], self.radii[sid] = c, r2
        self.simplices[sid] = s
        for j in range(len(s)):
            self.facets.setdefault(s[:j] + s[j + 1:], set()).add(sid)
        return sid

    def _remove(self, sid: int) -> None:
        s = self.simplices.pop(sid)
        self.radii[sid] = -1.0
        for j in range(len(s)):
            f = s[:j] + s[j + 1:]
            self.facets[f].discard(sid)
            if not self.facets[f]:
                del self.facets[f]

    def _neighbor(self, sid: int, facet: tuple[int, ...]) -> int | None:
        for other in self.facets.get(facet, ()):
            if other != sid:
                return other
        return None

    def _containing(self, p: np.ndarray, candidates) -> int:
        best, best_val = None, -np.inf
        for sid in candidates:
            q = self.pts[list(self.simplices[sid])]
            lam = np.linalg.solve((q[1:] - q[0]).T, p - q[0])
            val = min(1.0 - lam.sum(), lam.min())
            if val > best_val:
                best, best_val = sid, val
        return best

    def insert(self, k: int) -> None:
        p = self.pts[k]
        live = self.radii[: self.next_id] >= 0
        d2 = np.einsum("ij,ij->i", self.centers[: self.next_id] - p, self.centers[: self.next_id] - p)
        bad = np.flatnonzero(live & (d2 < self.radii[: self.next_id] * (1.0 + 1e-12)))
        if len(bad) == 0:
            bad = np.array(list(self.simplices))
        start = self._containing(p, bad)
        in_sphere = set(int(b) for b in bad)

        cavity = {start}
        frontier = [start]
        while frontier:
            sid = frontier.pop()
            s = self.simplices[sid]
            for j in range(len(s)):
                nb = self._neighbor(sid, s[:j] + s[j + 1:])
                if nb is not None and nb not in cavity and nb in in_sphere:
                    cavity.add(nb)
                    frontier.append(nb)

        # grow the cavity until every boundary facet is strictly visible from p
        while True:
            grown = False
            for sid in sorted(cavity):
                s = self.simplices[sid]
                for j in range(len(s)):
                    facet = s[:j] + s[j + 1:]
                    nb = self._neighbor(sid, facet)
                    if nb is not None and nb in cavity:
                        continue
                    fp = self.pts[list(facet)]
                    o_p = _orient(fp, p)
                    o_q = _orient(fp, self.pts[s[j]])
                    size = self.scale ** self.n
                    if o_p * o_q <= 0 or abs(o_p) <= _ORIENT_EPS * size:
                        if nb is None:
                            raise DelaunayError("point lies outside the enclosing simplex")
                        cavity.add(nb)
                        grown = True
            if not grown:
                break

        boundary = []
        for sid in cavity:
            s = self.simplices[sid]
            for j in range(len(s)):
                facet = s[:j] + s[j + 1:]
                nb = self._neighbor(sid, facet)
                if nb is None or nb not in cavity:
                    boundary.append(facet)
        for sid in cavity:
            self._remove(sid)
        for facet in boundary:
            self._add(facet + (k,))

    def run(self) -> np.ndarray:
        for k in range(self.n_real):
            self.insert(k)
        keep = [s for _, s in sorted(self.simplices.items()) if max(s) < self.n_real]
        return np.asarray(keep, dtype=np.int64).reshape(-1, self.n + 1)


def _as_tensor_grid(points: np.ndarray):
    axes = [np.unique(points[:, k]) for k in range(points.shape[1])]
    if int(np.prod([len(a) for a in axes])) != len(points):
        return None
    if any(len(a) < 2 for a in axes):
        return None
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, points.shape[1])
    if not np.array_equal(np.unique(grid, axis=0), np.unique(points, axis=0)):
        return None
    return axes


def _drop_degenerate(points: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    if len(simplices) == 0:
        return simplices
    n = points.shape[1]
    p = points[simplices]
    vol = np.abs(np.linalg.det(p[:, 1:] - p[:, :1])) / math.factorial(n)
    diag = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    return simplices[vol >= DEGENERACY_RATIO * diag**n]


def build_delaunay_mesh(points) -> Triangulation:
    """Delaunay triangulation of a 2-d or 3-d point set.

    Tensor-product point sets are cospherical cell by cell; for them any
    conforming split of the grid cells is Delaunay, and the Freudenthal
    split is returned directly. Other inputs go through incremental
    Bowyer-Watson. Simplices with volume below
    ``1e-10 * diag**n`` are dropped.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise DelaunayError("Delaunay meshing supports dimensions 2 and 3 only")
    n = pts.shape[1]
    if len(pts) < n + 1 or np.linalg.matrix_rank(pts[1:] - pts[0]) < n:
        raise DelaunayError("points do not span the space (collinear or coplanar set)")

    axes = _as_tensor_grid(pts)
    if axes is not None:
        return kuhn_triangulation(axes)

    from scipy.spatial import ConvexHull

    hull_volume = ConvexHull(pts).volume
    # np.unique sorted the points, so insertion order does not depend on input order
    for reach in (1e3, 1e5):
        simplices = _drop_degenerate(pts, _BowyerWatson(pts, reach).run())
        p = pts[simplices]
        covered = np.abs(np.linalg.det(p[:, 1:] - p[:, :1])).sum() / math.factorial(n)
        if abs(covered - hull_volume) <= 1e-9 * hull_volume:
            break
    else:
        raise DelaunayError("triangulation does not cover the convex hull")
    used = np.unique(simplices)
    remap = np.full(len(pts), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return Triangulation(pts[used], remap[simplices])
