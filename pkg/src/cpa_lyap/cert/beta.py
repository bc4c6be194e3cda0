"""Interval bounds on the second derivatives of the dynamics over simplices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..expr import Num, SystemModel, interval_evaluate_many
from ..mesh import Triangulation


@dataclass(frozen=True)
class BetaTable:
    """Per-simplex bound ``beta_i`` on every ``|d^2 f_q / dx_r dx_s|``.

    ``lower``/``upper`` are the axis-aligned bounding boxes the bounds were
    computed over, shape ``(m, n)``.
    """

    beta: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __len__(self) -> int:
        return len(self.beta)


def bounding_boxes(t: Triangulation) -> tuple[np.ndarray, np.ndarray]:
    p = t.vertices[t.simplices]
    return p.min(axis=1), p.max(axis=1)


def compute_beta(model: SystemModel, t: Triangulation) -> BetaTable:
    """Bound the Hessian entries of every component over each simplex's bounding box."""
    if t.n != model.n:
        raise ValueError(f"mesh dimension {t.n} does not match system dimension {model.n}")
    lo, hi = bounding_boxes(t)
    beta = np.zeros(t.n_simplices)
    seen = set()
    for hess in model.hessians:
        for r in range(model.n):
            for s in range(r, model.n):
                h = hess[r][s]
                if h in seen:
                    continue
                seen.add(h)
                if isinstance(h, Num):
                    beta = np.maximum(beta, abs(h.value))
                    continue
                rlo, rhi = interval_evaluate_many(h, lo, hi)
                beta = np.maximum(beta, np.maximum(np.abs(rlo), np.abs(rhi)))
    return BetaTable(beta, lo, hi)
