"""Independent re-check of a CPA Lyapunov certificate."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..expr import SystemModel
from ..mesh import Triangulation, all_geometry
from .beta import compute_beta
from .lp import CpaCandidate

VERIFY_TOL = 1e-7
DEFAULT_SAMPLES = 10_000


@dataclass
class Verdict:
    """Outcome of :func:`verify_certificate`.

    Every margin is ``rhs - lhs`` of the worst constraint in its family, so a
    negative margin is a violation. ``worst_simplex`` names the simplex with
    the worst decrease margin.
    """

    valid: bool
    margins: dict = field(default_factory=dict)
    worst_simplex: int | None = None
    samples: int = 0

    def __bool__(self) -> bool:
        return self.valid


def _gradients(t: Triangulation, X: np.ndarray, values: np.ndarray) -> np.ndarray:
    S = t.simplices
    rhs = values[S[:, 1:]] - values[S[:, :1]]
    return np.linalg.solve(X, rhs[..., None])[..., 0]


def verify_certificate(
    model: SystemModel,
    t: Triangulation,
    candidate: CpaCandidate,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tol: float = VERIFY_TOL,
) -> Verdict:
    """Re-derive every certificate condition from the mesh and the dynamics.

    Geometry and the Hessian bounds are recomputed here rather than taken
    from the program that produced ``candidate``. Besides the vertex
    conditions, ``samples`` uniform points of the domain are checked for
    ``grad V(x).f(x) <= -|x| + tol``.
    """
    values = np.asarray(candidate.values, dtype=float)
    bounds = np.asarray(candidate.gradient_bounds, dtype=float)
    if values.shape != (t.n_vertices,) or bounds.shape != (t.n_simplices, t.n):
        return Verdict(False, {"shape": -np.inf})
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(bounds))):
        return Verdict(False, {"finite": -np.inf})

    X, _, c = all_geometry(t)
    beta = compute_beta(model, t).beta
    grads = _gradients(t, X, values)
    S = t.simplices
    pts = t.vertices[S]
    norms = np.linalg.norm(pts, axis=2)

    margins = {}
    margins["positivity"] = float(np.min(values - np.linalg.norm(t.vertices, axis=1)))
    margins["origin"] = -abs(float(values[t.origin_index])) if t.origin_index is not None else 0.0
    margins["bounds_nonnegative"] = float(bounds.min(initial=0.0))
    margins["gradient"] = float(np.min(bounds - np.abs(grads)))

    fx = model.f(pts.reshape(-1, t.n)).reshape(pts.shape)
    lhs = np.einsum("mjk,mk->mj", fx, grads) + 0.5 * c * beta[:, None] * bounds.sum(axis=1)[:, None]
    dec = -norms - lhs
    margins["decrease"] = float(dec.min())
    worst = int(np.argmin(dec.min(axis=1)))

    if samples:
        rng = np.random.default_rng(seed)
        x = rng.uniform(model.lower, model.upper, size=(samples, t.n))
        idx, _ = t.locate_many(x)
        slope = np.einsum("sk,sk->s", grads[idx], model.f(x))
        margins["sampled_decrease"] = float(np.min(-np.linalg.norm(x, axis=1) - slope))

    valid = all(v >= -tol for v in margins.values())
    return Verdict(valid, margins, worst, samples)
