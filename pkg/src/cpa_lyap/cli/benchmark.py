"""Benchmark harness and run artifacts."""
from __future__ import annotations

import csv
import io
import json
import logging
import re
import time
from dataclasses import asdict
from pathlib import Path

from ..cert import assemble_slack_lp, compute_beta
from ..expr import SystemModel
from ..synth import SynthesisReport, run_method
from .svg import emit_svg
from .systems import BenchmarkRow, builtin_system

log = logging.getLogger(__name__)

CSV_HEADER = ["system", "method", "init", "N", "m_T", "viable", "iterations", "delta_m_T", "wall_ms"]


def _stem(*parts: str) -> str:
    return "_".join(re.sub(r"[^A-Za-z0-9.]+", "_", p) for p in parts)


def report_row(system: str, method: str, init: str, report: SynthesisReport, wall_ms: float) -> dict:
    return {
        "system": system,
        "method": method,
        "init": init,
        "N": report.triangulation.n_vertices,
        "m_T": report.triangulation.n_simplices,
        "viable": "Yes" if report.viable else "No",
        "iterations": report.iterations,
        "delta_m_T": report.delta_m_T,
        "wall_ms": int(round(wall_ms)),
    }


def report_json(report: SynthesisReport) -> dict:
    return {
        "verdict": report.verdict,
        "message": report.message,
        "iterations": report.iterations,
        "initial_simplices": report.initial_simplices,
        "delta_m_T": report.delta_m_T,
        "records": [asdict(r) for r in report.records],
        "verification": None if report.verification is None else {
            "valid": report.verification.valid, "margins": report.verification.margins,
        },
    }


def write_artifacts(
    out_dir: Path, stem: str, model: SystemModel, report: SynthesisReport,
    svg: bool = False, dump_lp: bool = False, alpha: float = 1.0,
) -> dict[str, Path]:
    """Write mesh, candidate and report files (plus SVG / MPS when asked)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"mesh": out_dir / f"{stem}_mesh.json", "report": out_dir / f"{stem}_report.json"}
    report.triangulation.save(paths["mesh"])
    paths["report"].write_text(json.dumps(report_json(report), indent=2) + "\n")
    if report.candidate is not None:
        paths["candidate"] = out_dir / f"{stem}_candidate.json"
        paths["candidate"].write_text(json.dumps(report.candidate.to_dict()) + "\n")
    if svg and model.n == 2:
        paths["svg"] = out_dir / f"{stem}.svg"
        emit_svg(report.triangulation, model, report.candidate, paths["svg"])
    if dump_lp:
        paths["lp"] = out_dir / f"{stem}.mps"
        t = report.triangulation
        paths["lp"].write_text(assemble_slack_lp(model, t, compute_beta(model, t), alpha).to_mps())
    return paths


def write_csv(rows: list[dict], path=None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def run_benchmark(rows: list[BenchmarkRow], out_dir=None, svg: bool = False) -> list[dict]:
    """Run every row; a failing row is recorded with viable "Error" and the rest continue.

    With ``out_dir`` each row's mesh, candidate and report are written there
    together with ``benchmark.csv``.
    """
    out = Path(out_dir) if out_dir is not None else None
    results = []
    for row in rows:
        start = time.perf_counter()
        try:
            model = builtin_system(row.system)
            report = run_method(model, row.config)
        except Exception as exc:  # recorded in-row; the suite goes on
            log.error("%s %s %s failed: %s", row.system, row.method, row.init, exc)
            results.append({**dict.fromkeys(CSV_HEADER, ""), "system": row.system, "method": row.method,
                            "init": row.init, "viable": "Error",
                            "wall_ms": int(round(1000 * (time.perf_counter() - start)))})
            continue
        wall_ms = 1000 * (time.perf_counter() - start)
        results.append(report_row(row.system, row.method, row.init, report, wall_ms))
        log.info("%s", results[-1])
        if out is not None:
            write_artifacts(out, _stem(row.system, row.method, row.init), model, report, svg=svg,
                            alpha=row.config.alpha)
    if out is not None:
        write_csv(results, out / "benchmark.csv")
    return results
