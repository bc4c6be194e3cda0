"""Solver front end for :class:`LinearProgram`."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .lp import LinearProgram
from .simplex import solve_simplex

FEASIBILITY_TOL = 1e-7

_HIGHS_STATUS = {0: "optimal", 1: "numerical_failure", 2: "infeasible", 3: "unbounded", 4: "numerical_failure"}


@dataclass
class LPSolution:
    status: str  # optimal | infeasible | unbounded | numerical_failure
    x: np.ndarray | None = None
    objective: float | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _solve_highs(p: LinearProgram) -> LPSolution:
    res = linprog(
        p.objective,
        A_ub=p.A_ub,
        b_ub=p.b_ub,
        bounds=np.column_stack([p.lower, p.upper]),
        method="highs-ipm",  # interior point plus crossover: far faster than dual simplex here
        options={
            "presolve": True,
            "primal_feasibility_tolerance": 1e-9,
            "dual_feasibility_tolerance": 1e-9,
        },
    )
    status = _HIGHS_STATUS.get(res.status, "numerical_failure")
    if status != "optimal":
        return LPSolution(status, message=res.message)
    return LPSolution("optimal", np.asarray(res.x), float(res.fun), res.message)


def _solve_simplex(p: LinearProgram) -> LPSolution:
    res = solve_simplex(p.objective, p.A_ub, p.b_ub, p.lower, p.upper)
    return LPSolution(res.status, res.x, res.objective, res.message)


BACKENDS = {"highs": _solve_highs, "simplex": _solve_simplex}


def solve_lp(p: LinearProgram, backend: str = "highs") -> LPSolution:
    """Solve ``p``; an optimal answer is checked against every row and bound.

    ``backend`` is ``"highs"`` (HiGHS through SciPy) or ``"simplex"`` (the
    in-package revised simplex, dense, for small programs).
    """
    try:
        solver = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown LP backend {backend!r}; choose from {sorted(BACKENDS)}") from None
    sol = solver(p)
    if sol.ok:
        viol = p.max_violation(sol.x)
        if viol > FEASIBILITY_TOL:
            return LPSolution("numerical_failure", sol.x, sol.objective, f"assignment violates a constraint by {viol:.3g}")
    return sol
