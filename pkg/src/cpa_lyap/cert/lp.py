"""Assembly of the CPA Lyapunov linear programs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..expr import SystemModel
from ..mesh import Triangulation, all_geometry
from .beta import BetaTable

DEFAULT_ALPHA = 1.0


@dataclass(frozen=True)
class VariableLayout:
    """Column layout: vertex values, then gradient bounds, then slacks."""

    n_vertices: int
    n_simplices: int
    n: int
    slack: bool

    @property
    def n_variables(self) -> int:
        return self.n_vertices * (2 if self.slack else 1) + self.n_simplices * self.n

    def bound(self, i, k):
        return self.n_vertices + np.asarray(i) * self.n + k

    def slack_var(self, v):
        if not self.slack:
            raise KeyError("this program has no slack variables")
        return self.n_vertices + self.n_simplices * self.n + np.asarray(v)

    def name(self, j: int) -> str:
        if j < self.n_vertices:
            return f"V_{j}"
        j -= self.n_vertices
        if j < self.n_simplices * self.n:
            return f"l_{j // self.n}_{j % self.n}"
        return f"u_{j - self.n_simplices * self.n}"


@dataclass
class LinearProgram:
    """``min c.x  s.t.  A_ub x <= b_ub,  lower <= x <= upper``."""

    objective: np.ndarray
    A_ub: sp.csr_matrix
    b_ub: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    layout: VariableLayout
    row_kinds: dict = field(default_factory=dict)

    @property
    def n_variables(self) -> int:
        return len(self.objective)

    @property
    def n_constraints(self) -> int:
        return self.A_ub.shape[0]

    def variable_names(self) -> list[str]:
        return [self.layout.name(j) for j in range(self.n_variables)]

    def max_violation(self, x) -> float:
        """Largest violation of any row or bound by the assignment ``x``."""
        x = np.asarray(x, dtype=float)
        rows = self.A_ub @ x - self.b_ub
        worst = max(rows.max(initial=0.0), (self.lower - x).max(initial=0.0))
        return float(max(worst, (x - self.upper).max(initial=0.0)))

    def to_mps(self) -> str:
        """Free-format MPS text of the program."""
        names = self.variable_names()
        A = self.A_ub.tocsc()
        lines = ["NAME CPA_LYAPUNOV", "ROWS", " N OBJ"]
        lines += [f" L R{r}" for r in range(self.n_constraints)]
        lines.append("COLUMNS")
        for j in range(self.n_variables):
            if self.objective[j] != 0:
                lines.append(f" {names[j]} OBJ {float(self.objective[j])!r}")
            start, end = A.indptr[j], A.indptr[j + 1]
            for r, v in zip(A.indices[start:end], A.data[start:end]):
                lines.append(f" {names[j]} R{r} {float(v)!r}")
        lines.append("RHS")
        lines += [f" RHS R{r} {float(b)!r}" for r, b in enumerate(self.b_ub) if b != 0]
        lines.append("BOUNDS")
        for j in range(self.n_variables):
            lo, hi = self.lower[j], self.upper[j]
            if lo == hi:
                lines.append(f" FX BND {names[j]} {float(lo)!r}")
                continue
            if np.isinf(lo):
                lines.append(f" MI BND {names[j]}")
            elif lo != 0:
                lines.append(f" LO BND {names[j]} {float(lo)!r}")
            if np.isfinite(hi):
                lines.append(f" UP BND {names[j]} {float(hi)!r}")
        lines.append("ENDATA")
        return "\n".join(lines) + "\n"


@dataclass
class CpaCandidate:
    """Vertex values, gradient bounds and (for the slack program) vertex slacks."""

    values: np.ndarray
    gradient_bounds: np.ndarray
    slacks: np.ndarray | None = None

    @classmethod
    def from_solution(cls, lp: LinearProgram, x) -> CpaCandidate:
        lay = lp.layout
        x = np.asarray(x, dtype=float)
        values = x[: lay.n_vertices].copy()
        bounds = x[lay.n_vertices: lay.n_vertices + lay.n_simplices * lay.n].reshape(lay.n_simplices, lay.n)
        slacks = x[lay.n_vertices + lay.n_simplices * lay.n:].copy() if lay.slack else None
        return cls(values, bounds.copy(), slacks)

    @property
    def max_slack(self) -> float:
        return float(np.max(self.slacks)) if self.slacks is not None else float("-inf")

    def to_dict(self) -> dict:
        out = {
            "values": {str(i): float(v) for i, v in enumerate(self.values)},
            "gradient_bounds": self.gradient_bounds.tolist(),
        }
        if self.slacks is not None:
            out["slacks"] = self.slacks.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> CpaCandidate:
        vals = data["values"]
        if isinstance(vals, dict):
            values = np.zeros(len(vals))
            for k, v in vals.items():
                values[int(k)] = v
        else:
            values = np.asarray(vals, dtype=float)
        slacks = data.get("slacks")
        return cls(
            values,
            np.asarray(data["gradient_bounds"], dtype=float),
            None if slacks is None else np.asarray(slacks, dtype=float),
        )


def gradient_operator(X_inv: np.ndarray) -> np.ndarray:
    """``G[i, k, j]``: coefficient of ``V`` at local vertex ``j`` in ``(grad V_i)_k``."""
    G = np.empty((X_inv.shape[0], X_inv.shape[1], X_inv.shape[2] + 1))
    G[:, :, 1:] = X_inv
    G[:, :, 0] = -X_inv.sum(axis=2)
    return G


def _assemble(model: SystemModel, t: Triangulation, beta: BetaTable, alpha: float | None) -> LinearProgram:
    if t.n != model.n:
        raise ValueError(f"mesh dimension {t.n} does not match system dimension {model.n}")
    if len(beta) != t.n_simplices:
        raise ValueError("beta table does not cover the mesh")
    n, m, N = t.n, t.n_simplices, t.n_vertices
    lay = VariableLayout(N, m, n, slack=alpha is not None)
    _, X_inv, c = all_geometry(t)
    G = gradient_operator(X_inv)
    S = t.simplices
    pts = t.vertices[S]
    fx = model.f(pts.reshape(-1, n)).reshape(m, n + 1, n)
    norms = np.linalg.norm(pts, axis=2)

    rows, cols, vals = [], [], []
    # gradient rows: +-(grad V_i)_k - l_{i,k} <= 0
    r_grad = np.arange(2 * m * n).reshape(m, n, 2)
    for sign, col in ((1.0, 0), (-1.0, 1)):
        r = np.broadcast_to(r_grad[:, :, col, None], (m, n, n + 1))
        rows.append(r.ravel())
        cols.append(np.broadcast_to(S[:, None, :], (m, n, n + 1)).ravel())
        vals.append((sign * G).ravel())
        rows.append(r_grad[:, :, col].ravel())
        cols.append(lay.bound(np.arange(m)[:, None], np.arange(n)[None, :]).ravel())
        vals.append(np.full(m * n, -1.0))

    # decrease rows: grad V_i . f(x_ij) + c_ij beta_i / 2 * sum_k l_ik (- u_x) <= -|x_ij|
    keep = np.ones((m, n + 1), dtype=bool)
    if t.origin_index is not None:
        keep &= S != t.origin_index  # identically 0 <= 0 at the equilibrium
    ii, jj = np.nonzero(keep)
    n_dec = len(ii)
    r_dec = 2 * m * n + np.arange(n_dec)
    coef = np.einsum("dk,dkj->dj", fx[ii, jj], G[ii])
    rows.append(np.repeat(r_dec, n + 1))
    cols.append(S[ii].ravel())
    vals.append(coef.ravel())
    rows.append(np.repeat(r_dec, n))
    cols.append(lay.bound(ii[:, None], np.arange(n)[None, :]).ravel())
    vals.append(np.repeat(0.5 * c[ii, jj] * beta.beta[ii], n))
    if lay.slack:
        rows.append(r_dec)
        cols.append(lay.slack_var(S[ii, jj]))
        vals.append(np.full(n_dec, -1.0))

    n_rows = 2 * m * n + n_dec
    A = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_rows, lay.n_variables),
    ).tocsr()
    A.sum_duplicates()
    b = np.concatenate([np.zeros(2 * m * n), -norms[ii, jj]])

    lower = np.zeros(lay.n_variables)
    upper = np.full(lay.n_variables, np.inf)
    lower[:N] = np.linalg.norm(t.vertices, axis=1)
    if t.origin_index is not None:
        lower[t.origin_index] = upper[t.origin_index] = 0.0
    objective = np.zeros(lay.n_variables)
    if lay.slack:
        lower[lay.slack_var(0):] = -alpha
        objective[lay.slack_var(0):] = 1.0
    kinds = {"gradient": 2 * m * n, "decrease": n_dec, "positivity": N}
    return LinearProgram(objective, A, b, lower, upper, lay, kinds)


def assemble_feasibility_lp(model: SystemModel, t: Triangulation, beta: BetaTable) -> LinearProgram:
    """Pure feasibility program: positivity as bounds, gradient and decrease rows."""
    return _assemble(model, t, beta, None)


def assemble_slack_lp(
    model: SystemModel, t: Triangulation, beta: BetaTable, alpha: float = DEFAULT_ALPHA
) -> LinearProgram:
    """Slack relaxation: decrease rows get per-vertex slacks ``u_x >= -alpha``; minimise their sum."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return _assemble(model, t, beta, float(alpha))
