"""JSON run configuration."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..expr import SystemModel, parse
from ..synth import SynthesisConfig

DEFAULTS = {"alpha": 1.0, "max_iterations": 1000, "prune_radius": 0.05}


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class RunSpec:
    model: SystemModel
    config: SynthesisConfig
    out_dir: Path
    emit_mesh: bool = True
    emit_report: bool = True
    emit_svg: bool = False
    dump_lp: bool = False


def _number(data: dict, key: str, kind=float, required=False):
    if key not in data:
        if required:
            raise ConfigError(key, "is required")
        return DEFAULTS.get(key)
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or (kind is int and not isinstance(value, int)):
        raise ConfigError(key, f"expected {'an integer' if kind is int else 'a number'}, got {value!r}")
    return kind(value)


def parse_config(data: dict, out_dir=None) -> RunSpec:
    """Validate a decoded config object and build the run specification."""
    if not isinstance(data, dict):
        raise ConfigError("$", "config must be a JSON object")
    n = _number(data, "dimension", int, required=True)
    if n < 1:
        raise ConfigError("dimension", "must be at least 1")

    dynamics = data.get("dynamics")
    if not isinstance(dynamics, list) or len(dynamics) != n:
        raise ConfigError("dynamics", f"expected a list of {n} expressions")
    domain = data.get("domain")
    if not isinstance(domain, list) or len(domain) != n:
        raise ConfigError("domain", f"expected a list of {n} [lo, hi] pairs")
    for k, pair in enumerate(domain):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise ConfigError(f"domain[{k}]", "expected [lo, hi]")
    for k, text in enumerate(dynamics):
        if not isinstance(text, str):
            raise ConfigError(f"dynamics[{k}]", "expected an expression string")
        try:
            parse(text, n)
        except ValueError as exc:
            raise ConfigError(f"dynamics[{k}]", str(exc)) from None
    name = data.get("name", "system")
    if not isinstance(name, str):
        raise ConfigError("name", "expected a string")
    try:
        model = SystemModel.from_strings(dynamics, [tuple(p) for p in domain], name)
    except ValueError as exc:
        raise ConfigError("dynamics", str(exc)) from None

    method = data.get("method")
    if not isinstance(method, str):
        raise ConfigError("method", "is required and must be a string")
    spacing = data.get("grid_spacing")
    if spacing is not None:
        if not isinstance(spacing, list) or len(spacing) not in (1, n):
            raise ConfigError("grid_spacing", f"expected a list of 1 or {n} numbers")
        spacing = tuple(float(v) for v in spacing)
    linear = data.get("linear_axis_spacing") or {}
    if not isinstance(linear, dict):
        raise ConfigError("linear_axis_spacing", "expected an object {axis-index: spacing}")
    try:
        linear = {int(k): float(v) for k, v in linear.items()}
    except (TypeError, ValueError):
        raise ConfigError("linear_axis_spacing", "keys must be axis indices and values numbers") from None
    for k in linear:
        if not 1 <= k <= n:
            raise ConfigError(f"linear_axis_spacing.{k}", f"axis index must be in 1..{n}")

    kwargs = dict(
        method=method,
        grid_spacing=spacing,
        alpha=_number(data, "alpha"),
        max_iterations=_number(data, "max_iterations", int),
        prune_radius=_number(data, "prune_radius"),
        linear_axis_spacing=linear,
    )
    if "time_limit" in data:
        kwargs["time_limit"] = _number(data, "time_limit")
    if "points_per_segment" in data:
        kwargs["points_per_segment"] = _number(data, "points_per_segment", int)
    try:
        cfg = SynthesisConfig(**kwargs)
    except ValueError as exc:
        field = next((key for key in kwargs if key in str(exc)), "method")
        raise ConfigError(field, str(exc)) from None
    out = Path(out_dir) if out_dir is not None else Path(data.get("out_dir", "out"))
    return RunSpec(model, cfg, out)


def load_config(path, out_dir=None) -> RunSpec:
    """Read and validate the JSON config at ``path``; defaults fill in alpha, max_iterations and prune_radius."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    return parse_config(data, out_dir)
