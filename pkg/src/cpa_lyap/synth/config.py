"""Settings for a synthesis run."""
from __future__ import annotations

from dataclasses import dataclass, field

METHODS = ("grid", "method1", "method2", "method3")
METHOD_ALIASES = {"m1": "method1", "m2": "method2", "m3": "method3"}

VIABLE_TOL = 1e-7
MIN_EDGE = 1e-6


@dataclass(frozen=True)
class SynthesisConfig:
    """How to mesh the domain and how long to refine.

    ``grid_spacing`` feeds the grid and method1 starts; ``points_per_segment``
    and ``linear_axis_spacing`` (1-based axis -> spacing) feed method2 and
    method3.
    """

    method: str = "method1"
    grid_spacing: tuple[float, ...] | float | None = None
    points_per_segment: int = 3
    alpha: float = 1.0
    max_iterations: int = 1000
    prune_radius: float = 0.05
    linear_axis_spacing: dict = field(default_factory=dict)
    backend: str = "highs"
    verify_samples: int = 10_000
    time_limit: float | None = None  # seconds; checked between iterations

    def __post_init__(self):
        method = METHOD_ALIASES.get(self.method, self.method)
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        object.__setattr__(self, "method", method)
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.prune_radius > 0:
            raise ValueError("prune_radius must be positive")
        if self.points_per_segment < 2:
            raise ValueError("points_per_segment must be at least 2")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if method in ("grid", "method1") and self.grid_spacing is None:
            raise ValueError(f"method {method} needs grid_spacing")
        spacing = {int(k): float(v) for k, v in self.linear_axis_spacing.items()}
        if any(v <= 0 for v in spacing.values()):
            raise ValueError("linear_axis_spacing values must be positive")
        object.__setattr__(self, "linear_axis_spacing", spacing)

    @property
    def refines(self) -> bool:
        return self.method in ("method1", "method3")
