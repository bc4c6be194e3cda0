"""Input checks shared by the estimator and the command line."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from ..expr import SystemModel


def check_system(system) -> SystemModel:
    """Accept a SystemModel or a mapping with "dynamics", "domain" and optional "name"."""
    if isinstance(system, SystemModel):
        return system
    if isinstance(system, dict):
        try:
            dynamics, domain = system["dynamics"], system["domain"]
        except KeyError as exc:
            raise ValueError(f"system mapping is missing {exc.args[0]!r}") from None
        return SystemModel.from_strings(dynamics, [tuple(p) for p in domain], system.get("name", "system"))
    raise TypeError(f"expected a SystemModel or a mapping, got {type(system).__name__}")


def check_points(X, model: SystemModel, tol: float = 1e-9) -> np.ndarray:
    """2-d float array of points with ``model.n`` columns, all inside the domain box."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != model.n:
        raise ValueError(f"X has {X.shape[1]} features, but the system has dimension {model.n}")
    outside = np.any((X < model.lower - tol) | (X > model.upper + tol), axis=1)
    if np.any(outside):
        raise ValueError(f"{int(outside.sum())} point(s) lie outside the domain box")
    return X
