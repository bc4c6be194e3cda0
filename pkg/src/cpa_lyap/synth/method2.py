"""Model-informed vertex placement from the curvature of univariate factors."""
from __future__ import annotations

import numpy as np

from ..expr import SystemModel, decompose_univariate, differentiate, evaluate
from .config import SynthesisConfig

SCAN_INTERVALS = 512
ROOT_TOL = 1e-9
_MERGE_TOL = 1e-9


class RootFindingError(RuntimeError):
    pass


def _bisect(g, a: float, b: float, ga: float) -> float:
    for _ in range(200):
        if b - a <= ROOT_TOL:
            break
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    else:
        raise RootFindingError(f"bisection did not converge on [{a}, {b}]")
    return 0.5 * (a + b)


def second_derivative_roots(expr, k: int, lo: float, hi: float) -> np.ndarray:
    """Roots of ``d^2 expr / dx_k^2`` in ``[lo, hi]``.

    Sign changes on a 512-interval scan are refined by bisection; roots
    without a sign change (even multiplicity) are taken at scan minima of
    ``|g''|`` below 1e-9.
    """
    g2 = differentiate(differentiate(expr, k), k)

    def g(s):
        x = np.zeros((np.size(s), k))
        x[:, k - 1] = s
        return evaluate(g2, x)

    xs = np.linspace(lo, hi, SCAN_INTERVALS + 1)
    vals = np.broadcast_to(np.asarray(g(xs), dtype=float), xs.shape)
    if not np.all(np.isfinite(vals)):
        raise RootFindingError("second derivative is not finite on the axis")
    roots = list(xs[vals == 0.0])
    for a in np.flatnonzero((vals[:-1] * vals[1:]) < 0):
        roots.append(_bisect(lambda s: float(g(np.array([s]))[0]), xs[a], xs[a + 1], vals[a]))
    mag = np.abs(vals)
    for i in range(1, len(xs) - 1):
        if mag[i] < ROOT_TOL and mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]:
            roots.append(xs[i])
    return _merge(np.asarray(roots, dtype=float))


def _merge(values: np.ndarray) -> np.ndarray:
    values = np.sort(values)
    if len(values) == 0:
        return values
    keep = np.concatenate([[True], np.diff(values) > _MERGE_TOL])
    return values[keep]


def _uniform_axis(lo: float, hi: float, h: float) -> np.ndarray:
    cells = max(1, int(np.ceil((hi - lo) / h - 1e-9)))
    return np.linspace(lo, hi, cells + 1)


def axis_coordinates(
    model: SystemModel, N: int, prune_radius: float = 0.05, linear_axis_spacing: dict | None = None
) -> list[np.ndarray]:
    """Per-axis coordinate sets whose Cartesian product is the vertex set.

    Each axis is cut at the inflection points of every univariate factor
    acting on it, and ``N`` equally spaced points (ends included) go into
    each piece. Axes with no nonlinear factor get the uniform spacing from
    ``linear_axis_spacing`` (keyed by 1-based axis). Coordinates closer
    than ``prune_radius`` to zero are dropped and zero itself is added.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    linear_axis_spacing = linear_axis_spacing or {}
    comps = decompose_univariate(model)
    axes = []
    for k in range(1, model.n + 1):
        lo, hi = float(model.lower[k - 1]), float(model.upper[k - 1])
        mine = [c for c in comps if c.variable == k]
        if not mine:
            h = linear_axis_spacing.get(k)
            if h is None:
                raise ValueError(f"axis {k} has no nonlinear factor; give linear_axis_spacing[{k}]")
            coords = _uniform_axis(lo, hi, h)
        else:
            pieces = []
            for c in mine:
                cuts = np.concatenate([[lo], second_derivative_roots(c.expr, k, lo, hi), [hi]])
                cuts = _merge(cuts)
                for a, b in zip(cuts[:-1], cuts[1:]):
                    pieces.append(np.linspace(a, b, N))
            coords = _merge(np.concatenate(pieces))
        coords = coords[np.abs(coords) >= prune_radius]
        axes.append(_merge(np.append(coords, 0.0)))
    return axes


def method2_vertices(model: SystemModel, N: int, cfg: SynthesisConfig | None = None) -> np.ndarray:
    """Cartesian product of :func:`axis_coordinates`, one vertex per row."""
    cfg = cfg or SynthesisConfig(method="method2")
    axes = axis_coordinates(model, N, cfg.prune_radius, cfg.linear_axis_spacing)
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)
