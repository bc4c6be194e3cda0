"""Command line interface: ``cpa-lyap run | bench | verify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from ..cert import CpaCandidate, verify_certificate
from ..mesh import Triangulation
from ..synth import METHOD_ALIASES, run_method
from .benchmark import CSV_HEADER, _stem, report_row, run_benchmark, write_artifacts, write_csv
from .config import ConfigError, RunSpec, load_config, parse_config
from .svg import emit_svg, mesh_edges
from .systems import SYSTEMS, BenchmarkRow, builtin_suite, builtin_system

__all__ = [
    "CSV_HEADER", "BenchmarkRow", "ConfigError", "RunSpec", "SYSTEMS", "builtin_suite",
    "builtin_system", "emit_svg", "load_config", "main", "mesh_edges", "parse_config",
    "run_benchmark", "write_artifacts", "write_csv",
]


def _cmd_run(args) -> int:
    spec = load_config(args.config, args.out)
    start = time.perf_counter()
    report = run_method(spec.model, spec.config)
    wall_ms = 1000 * (time.perf_counter() - start)
    stem = _stem(spec.model.name)
    paths = write_artifacts(spec.out_dir, stem, spec.model, report, svg=args.svg, dump_lp=args.dump_lp,
                            alpha=spec.config.alpha)
    row = report_row(spec.model.name, spec.config.method, _init_label(spec), report, wall_ms)
    write_csv([row], spec.out_dir / f"{stem}.csv")
    print(write_csv([row]), end="")
    for kind, path in sorted(paths.items()):
        print(f"{kind}: {path}")
    if report.message:
        print(report.message)
    return 0


def _init_label(spec: RunSpec) -> str:
    cfg = spec.config
    if cfg.method in ("grid", "method1"):
        h = cfg.grid_spacing
        return " ".join(f"{v:g}" for v in (h if isinstance(h, tuple) else (h,)))
    return f"n{cfg.points_per_segment}"


def _cmd_bench(args) -> int:
    methods = [METHOD_ALIASES.get(m, m) for m in args.method] if args.method else None
    rows = builtin_suite(args.system or None, methods)
    results = run_benchmark(rows, args.out, svg=args.svg)
    print(write_csv(results), end="")
    return 0 if all(r["viable"] != "Error" for r in results) else 1


def _cmd_verify(args) -> int:
    spec = load_config(args.config)
    t = Triangulation.load(args.mesh)
    candidate = CpaCandidate.from_dict(json.loads(Path(args.candidate).read_text()))
    verdict = verify_certificate(spec.model, t, candidate, samples=args.samples)
    print(json.dumps({"valid": verdict.valid, "margins": verdict.margins}, indent=2))
    return 0 if verdict.valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpa-lyap", description="CPA Lyapunov function synthesis")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="synthesize for one configuration")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None, help="output directory (default: out)")
    run.add_argument("--svg", action="store_true", help="also draw the final mesh (2-d only)")
    run.add_argument("--dump-lp", action="store_true", help="write the final slack LP as free MPS")
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="run the built-in benchmark suite")
    bench.add_argument("--system", action="append", choices=sorted(SYSTEMS))
    bench.add_argument("--method", action="append",
                       choices=["grid", "m1", "m2", "m3", "method1", "method2", "method3"])
    bench.add_argument("--out", default=None)
    bench.add_argument("--svg", action="store_true")
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify", help="re-check a stored certificate")
    verify.add_argument("--mesh", required=True)
    verify.add_argument("--candidate", required=True)
    verify.add_argument("--config", required=True)
    verify.add_argument("--samples", type=int, default=10_000)
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
