"""Built-in benchmark systems and the rows run for each."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..expr import SystemModel
from ..synth import SynthesisConfig

PI = math.pi

SYSTEMS = {
    "A": (["x2", "-sin(x1)-x2"], [(-PI / 2, PI / 2)] * 2, {2: PI / 6}),
    "B": (["0.3*x1^5-0.5*x2^4-0.5*x1", "-0.5*x1^6-0.1*x2"], [(-0.75, 0.75)] * 2, {}),
    "C": (["0.5*x1^4*sin(x2)+0.3*x2", "-0.5*x1-1.25*x2-x2^3*x1"], [(-1.0, 1.0)] * 2, {}),
    "D": (
        ["-3*x1+0.5*x1-x3*x2^4", "-x2*x3^4-2.5*x2+0.5*x3", "-0.5*x2-5*x3+x1*x2^2"],
        [(-1.0, 1.0)] * 3,
        {1: 0.25},
    ),
}

# (label, spacing) of the grid rows; the method1 rows start from every grid but the finest
_GRIDS = {
    "A": [("pi/2", PI / 2), ("pi/4", PI / 4), ("pi/6", PI / 6), ("pi/8", PI / 8), ("pi/10", PI / 10), ("pi/12", PI / 12)],
    "B": [("0.375", 0.375), ("0.25", 0.25), ("0.125", 0.125), ("0.0625", 0.0625)],
    "C": [("0.5", 0.5), ("1/3", 1 / 3), ("0.25", 0.25), ("0.125", 0.125)],
    "D": [("1", 1.0), ("0.5", 0.5), ("0.25", 0.25), ("0.125", 0.125)],
}
_METHOD1_STARTS = {"A": _GRIDS["A"], "B": _GRIDS["B"][:3], "C": _GRIDS["C"][:3], "D": _GRIDS["D"][:3]}
_POINTS = {"A": range(2, 6), "B": range(2, 11), "C": range(2, 9), "D": range(3, 6)}


def builtin_system(name: str) -> SystemModel:
    try:
        dynamics, domain, _ = SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; built-ins are {sorted(SYSTEMS)}") from None
    return SystemModel.from_strings(dynamics, domain, name)


@dataclass(frozen=True)
class BenchmarkRow:
    system: str
    method: str
    init: str
    config: SynthesisConfig


def builtin_suite(systems=None, methods=None) -> list[BenchmarkRow]:
    """Rows of the built-in benchmark, optionally filtered by system and method."""
    rows = []
    for name in systems or sorted(SYSTEMS):
        if name not in SYSTEMS:
            raise KeyError(f"unknown system {name!r}")
        linear = SYSTEMS[name][2]
        for label, h in _GRIDS[name]:
            rows.append(BenchmarkRow(name, "grid", label, SynthesisConfig("grid", h)))
        for label, h in _METHOD1_STARTS[name]:
            rows.append(BenchmarkRow(name, "method1", label, SynthesisConfig("method1", h)))
        for method in ("method2", "method3"):
            for k in _POINTS[name]:
                cfg = SynthesisConfig(method, points_per_segment=k, linear_axis_spacing=linear)
                rows.append(BenchmarkRow(name, method, f"n{k}", cfg))
    if methods:
        rows = [r for r in rows if r.method in methods]
    return rows
