"""Adaptive refinement loop and the four meshing methods."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ..cert import (
    CpaCandidate,
    Verdict,
    assemble_slack_lp,
    compute_beta,
    solve_lp,
    verify_certificate,
)
from ..expr import SystemModel
from ..mesh import Triangulation, build_delaunay_mesh, build_grid_mesh, longest_edge_global, refine_leb
from .config import MIN_EDGE, VIABLE_TOL, SynthesisConfig
from .method2 import method2_vertices

log = logging.getLogger(__name__)

VIABLE = "viable"
EXHAUSTED = "budget_exhausted"
LP_FAILURE = "lp_failure"


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    n_vertices: int
    n_simplices: int
    max_slack: float
    worst_simplex: int | None  # simplex refined after this solve, None if none was
    wall_time: float  # seconds spent on this iteration


@dataclass
class SynthesisReport:
    verdict: str
    records: list[IterationRecord]
    triangulation: Triangulation
    candidate: CpaCandidate | None
    initial_simplices: int
    verification: Verdict | None = None
    message: str = ""
    scores: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def viable(self) -> bool:
        return self.verdict == VIABLE

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def delta_m_T(self) -> int:
        return self.triangulation.n_simplices - self.initial_simplices

    @property
    def wall_time(self) -> float:
        return sum(r.wall_time for r in self.records)


def simplex_scores(t: Triangulation, slacks: np.ndarray) -> np.ndarray:
    """Sum of vertex slacks over each simplex's vertices."""
    return np.asarray(slacks)[t.simplices].sum(axis=1)


def adapt(model: SystemModel, t0: Triangulation, cfg: SynthesisConfig, keep_scores: bool = False) -> SynthesisReport:
    """Solve the slack program and refine the worst simplex until viable.

    Each round solves the slack LP on the current mesh. If every slack is
    at most 1e-7 the candidate is re-verified independently and returned.
    Otherwise the simplex with the largest slack sum over its vertices
    (lowest index on ties) is bisected along its longest edge. The loop
    stops after ``cfg.max_iterations`` solves, once ``cfg.time_limit``
    seconds have passed, or early when a bisection would create an edge
    shorter than 1e-6.
    """
    t = t0
    started = time.perf_counter()
    records: list[IterationRecord] = []
    scores_kept: list[np.ndarray] = []
    candidate = None

    def report(verdict, verification=None, message=""):
        return SynthesisReport(verdict, records, t, candidate, t0.n_simplices, verification, message, scores_kept)

    for it in range(1, cfg.max_iterations + 1):
        start = time.perf_counter()
        lp = assemble_slack_lp(model, t, compute_beta(model, t), cfg.alpha)
        sol = solve_lp(lp, cfg.backend)
        if not sol.ok:
            records.append(IterationRecord(it, t.n_vertices, t.n_simplices, float("nan"), None,
                                           time.perf_counter() - start))
            return report(LP_FAILURE, message=f"LP {sol.status}: {sol.message}")
        candidate = CpaCandidate.from_solution(lp, sol.x)
        worst_slack = candidate.max_slack
        scores = simplex_scores(t, candidate.slacks)
        if keep_scores:
            scores_kept.append(scores)

        verification = None
        if worst_slack <= VIABLE_TOL:
            verification = verify_certificate(model, t, candidate, samples=cfg.verify_samples)
            if verification.valid:
                records.append(IterationRecord(it, t.n_vertices, t.n_simplices, worst_slack, None,
                                               time.perf_counter() - start))
                return report(VIABLE, verification)
            # the solver's answer does not survive re-checking: refine where it fails
            target = verification.worst_simplex
            log.warning("iteration %d: LP viable but verification failed %s", it, verification.margins)
        else:
            target = int(np.argmax(scores))

        out_of_time = cfg.time_limit is not None and time.perf_counter() - started > cfg.time_limit
        if it == cfg.max_iterations or out_of_time:
            records.append(IterationRecord(it, t.n_vertices, t.n_simplices, worst_slack, None,
                                           time.perf_counter() - start))
            if out_of_time:
                return report(EXHAUSTED, verification, f"time limit of {cfg.time_limit:g} s reached")
            break
        a, b = longest_edge_global(t.vertices, t.simplices[target])
        if 0.5 * np.linalg.norm(t.vertices[a] - t.vertices[b]) < MIN_EDGE:
            records.append(IterationRecord(it, t.n_vertices, t.n_simplices, worst_slack, None,
                                           time.perf_counter() - start))
            return report(EXHAUSTED, verification, "refinement would create an edge below 1e-6")
        log.debug("iteration %d: m_T=%d max slack %.3g, refining %d", it, t.n_simplices, worst_slack, target)
        refined = refine_leb(t, target)
        records.append(IterationRecord(it, t.n_vertices, t.n_simplices, worst_slack, target,
                                       time.perf_counter() - start))
        t = refined
    return report(EXHAUSTED, message=f"no viable function within {cfg.max_iterations} iterations")


def initial_mesh(model: SystemModel, cfg: SynthesisConfig) -> Triangulation:
    """Starting mesh for ``cfg.method``: a grid, or the method2 Delaunay mesh."""
    if cfg.method in ("grid", "method1"):
        return build_grid_mesh(model.domain, cfg.grid_spacing)
    return build_delaunay_mesh(method2_vertices(model, cfg.points_per_segment, cfg))


def run_method(model: SystemModel, cfg: SynthesisConfig) -> SynthesisReport:
    """Run one of grid, method1, method2 or method3 on ``model``.

    grid and method2 solve once on their initial mesh; method1 and method3
    hand it to :func:`adapt`.
    """
    t0 = initial_mesh(model, cfg)
    if not cfg.refines:
        cfg = replace(cfg, max_iterations=1)
    return adapt(model, t0, cfg)
