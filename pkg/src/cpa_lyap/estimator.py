"""Estimator-style front end: ``fit`` learns a CPA Lyapunov function, ``predict`` evaluates it."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .synth import SynthesisConfig, run_method
from .utils.validation import check_points, check_system


class CPALyapunovEstimator(BaseEstimator):
    """Synthesize a CPA Lyapunov function for a system on its domain box.

    Parameters mirror :class:`~cpa_lyap.synth.SynthesisConfig`. After
    ``fit``, ``predict(X)`` returns V at the rows of ``X`` and
    ``predict_gradient(X)`` the piecewise-constant gradient.

    Attributes set by ``fit``: ``system_``, ``triangulation_``,
    ``candidate_``, ``report_``, ``viable_``, ``n_features_in_``.
    """

    def __init__(
        self,
        method="method1",
        grid_spacing=None,
        points_per_segment=3,
        alpha=1.0,
        max_iterations=1000,
        prune_radius=0.05,
        linear_axis_spacing=None,
        backend="highs",
        verify_samples=10_000,
        time_limit=None,
    ):
        self.method = method
        self.grid_spacing = grid_spacing
        self.points_per_segment = points_per_segment
        self.alpha = alpha
        self.max_iterations = max_iterations
        self.prune_radius = prune_radius
        self.linear_axis_spacing = linear_axis_spacing
        self.backend = backend
        self.verify_samples = verify_samples
        self.time_limit = time_limit

    def _config(self) -> SynthesisConfig:
        return SynthesisConfig(
            method=self.method,
            grid_spacing=self.grid_spacing,
            points_per_segment=self.points_per_segment,
            alpha=self.alpha,
            max_iterations=self.max_iterations,
            prune_radius=self.prune_radius,
            linear_axis_spacing=dict(self.linear_axis_spacing or {}),
            backend=self.backend,
            verify_samples=self.verify_samples,
            time_limit=self.time_limit,
        )

    def fit(self, system, y=None):
        """Run the configured method on ``system`` (a SystemModel or a mapping)."""
        model = check_system(system)
        report = run_method(model, self._config())
        self.system_ = model
        self.report_ = report
        self.triangulation_ = report.triangulation
        self.candidate_ = report.candidate
        self.viable_ = report.viable
        self.n_features_in_ = model.n
        return self

    def predict(self, X) -> np.ndarray:
        """V at each row of ``X``."""
        check_is_fitted(self, "candidate_")
        X = check_points(X, self.system_)
        if self.candidate_ is None:
            raise ValueError("fit produced no candidate (the LP failed)")
        return self.triangulation_.interpolate(self.candidate_.values, X)

    def predict_gradient(self, X) -> np.ndarray:
        """Gradient of V on the simplex containing each row of ``X``."""
        check_is_fitted(self, "candidate_")
        X = check_points(X, self.system_)
        t = self.triangulation_
        idx, _ = t.locate_many(X)
        W = self.candidate_.values
        S = t.simplices[idx]
        rhs = W[S[:, 1:]] - W[S[:, :1]]
        return np.linalg.solve(t.edge_matrices[idx], rhs[..., None])[..., 0]

    def score(self, X, y=None) -> float:
        """Worst decrease margin ``-|x| - grad V(x).f(x)`` over the rows of ``X`` (non-negative when certified)."""
        X = check_points(X, self.system_)
        slope = np.einsum("sk,sk->s", self.predict_gradient(X), self.system_.f(X))
        return float(np.min(-np.linalg.norm(X, axis=1) - slope))
