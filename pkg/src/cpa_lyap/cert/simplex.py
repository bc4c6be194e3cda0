"""Dense bounded-variable revised simplex method.

Solves ``min c.x  s.t.  A x <= b,  lo <= x <= hi`` with a two-phase
method. Pricing is Dantzig's rule; after a run of degenerate pivots it
switches to Bland's rule until the objective moves again, which rules
out cycling. Meant for small and medium programs and for cross-checking.
"""
from __future__ import annotations

import numpy as np

_PIVOT_TOL = 1e-7
_COST_TOL = 1e-9
_REFACTOR_EVERY = 50
_DEGENERATE_RUN = 50
_FEAS_TOL = 1e-9
_DRIFT_TOL = 1e-10


class SimplexResult:
    def __init__(self, status: str, x=None, objective=None, iterations: int = 0, message: str = ""):
        self.status = status
        self.x = x
        self.objective = objective
        self.iterations = iterations
        self.message = message


class _Tableau:
    """Equality form ``M z = rhs, 0 <= z <= u`` with a basis and nonbasic bound states."""

    def __init__(self, M, rhs, u, basis):
        self.M = M
        self.rhs = rhs
        self.u = u
        self.basis = list(basis)
        self.at_upper = np.zeros(M.shape[1], dtype=bool)
        self.iterations = 0
        self._refactor()

    def _refactor(self):
        self.B_inv = np.linalg.inv(self.M[:, self.basis])
        self._since = 0

    def basic_values(self):
        z_n = np.where(self.at_upper, self.u, 0.0)
        z_n[self.basis] = 0.0
        return self.B_inv @ (self.rhs - self.M @ z_n)

    def solution(self):
        z = np.where(self.at_upper, self.u, 0.0)
        z[self.basis] = self.basic_values()
        return z

    def optimize(self, cost, max_iter):
        bland = False
        degenerate = 0
        in_basis = np.zeros(self.M.shape[1], dtype=bool)
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            in_basis[:] = False
            in_basis[self.basis] = True
            y = cost[self.basis] @ self.B_inv
            d = cost - y @ self.M
            can_up = ~in_basis & ~self.at_upper & (d < -_COST_TOL) & (self.u > 0)
            can_down = ~in_basis & self.at_upper & (d > _COST_TOL)
            eligible = np.flatnonzero(can_up | can_down)
            if not len(eligible):
                return "optimal"
            if bland:
                j = int(eligible[0])
            else:
                j = int(eligible[np.argmax(np.abs(d[eligible]))])
            sigma = 1.0 if can_up[j] else -1.0

            alpha = self.B_inv @ self.M[:, j]
            x_b = self.basic_values()
            u_b = self.u[self.basis]
            step = sigma * alpha
            tol = _PIVOT_TOL * max(1.0, float(np.abs(step).max(initial=0.0)))
            dec = step > tol
            inc = step < -tol
            finite_ub = inc & np.isfinite(u_b)
            # Harris two-pass ratio test: bound the step with slightly relaxed
            # bounds, then take the largest pivot among rows that block first
            relaxed = np.full(len(step), np.inf)
            relaxed[dec] = (np.maximum(x_b[dec], 0.0) + _FEAS_TOL) / step[dec]
            relaxed[finite_ub] = (np.maximum(u_b[finite_ub] - x_b[finite_ub], 0.0) + _FEAS_TOL) / -step[finite_ub]
            theta = np.full(len(step), np.inf)
            theta[dec] = np.maximum(x_b[dec], 0.0) / step[dec]
            theta[finite_ub] = np.maximum(u_b[finite_ub] - x_b[finite_ub], 0.0) / -step[finite_ub]
            t_max = relaxed.min(initial=np.inf)
            if self.u[j] <= t_max:
                if not np.isfinite(self.u[j]):
                    return "unbounded"
                self.at_upper[j] = not self.at_upper[j]
                self.iterations += 1
                continue
            ties = np.flatnonzero(theta <= t_max)
            if bland:
                # Bland's rule, restricted to pivots of reasonable size
                big = ties[np.abs(step[ties]) >= 1e-3 * np.abs(step[ties]).max()]
                r = int(min(big, key=lambda i: self.basis[i]))
            else:
                r = int(ties[np.argmax(np.abs(step[ties]))])
            t_min = theta[r]
            leaving = self.basis[r]
            self.at_upper[leaving] = bool(inc[r])
            self.at_upper[j] = False
            self.basis[r] = j
            self.iterations += 1

            degenerate = degenerate + 1 if t_min <= 1e-12 else 0
            bland = degenerate >= _DEGENERATE_RUN

            piv = alpha[r]
            if abs(piv) < _PIVOT_TOL or self._since >= _REFACTOR_EVERY:
                self._refactor()
            else:
                row = self.B_inv[r] / piv
                self.B_inv -= np.outer(alpha, row)
                self.B_inv[r] = row
                self._since += 1
                # refactor as soon as the updated inverse drifts
                check = self.B_inv @ self.M[:, j]
                check[r] -= 1.0
                if np.abs(check).max() > _DRIFT_TOL:
                    self._refactor()


def solve_simplex(c, A, b, lo, hi, max_iter: int = 100_000) -> SimplexResult:
    """Two-phase bounded-variable revised simplex on dense data."""
    c = np.asarray(c, dtype=float)
    A = np.asarray(A.toarray() if hasattr(A, "toarray") else A, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    m, nv = A.shape
    if np.any(lo > hi):
        return SimplexResult("infeasible", message="empty variable bounds")

    # rewrite each variable as an affine map of nonnegative columns
    cols, shift, ub = [], np.zeros(nv), []
    for j in range(nv):
        if np.isfinite(lo[j]):
            shift[j] = lo[j]
            cols.append((j, 1.0))
            ub.append(hi[j] - lo[j])
        elif np.isfinite(hi[j]):
            shift[j] = hi[j]
            cols.append((j, -1.0))
            ub.append(np.inf)
        else:
            cols.append((j, 1.0))
            ub.append(np.inf)
            cols.append((j, -1.0))
            ub.append(np.inf)
    k = len(cols)
    T = np.zeros((nv, k))
    for p, (j, s) in enumerate(cols):
        T[j, p] = s
    A_z = A @ T
    c_z = c @ T
    rhs = b - A @ shift

    # slack columns, then artificials for rows with negative right-hand side
    flip = rhs < 0
    M = np.hstack([A_z, np.eye(m)])
    M[flip] *= -1.0
    rhs = np.where(flip, -rhs, rhs)
    n_art = int(flip.sum())
    art = np.zeros((m, n_art))
    art[np.flatnonzero(flip), np.arange(n_art)] = 1.0
    M = np.hstack([M, art])
    u = np.concatenate([ub, np.full(m, np.inf), np.full(n_art, np.inf)])
    basis = [k + i for i in range(m)]
    for a, i in enumerate(np.flatnonzero(flip)):
        basis[i] = k + m + a
    try:
        return _run(_Tableau(M, rhs, u, basis), c, c_z, T, shift, k, m, n_art, rhs, max_iter)
    except np.linalg.LinAlgError:
        return SimplexResult("numerical_failure", message="singular basis")


def _run(tab, c, c_z, T, shift, k, m, n_art, rhs, max_iter) -> SimplexResult:

    if n_art:
        cost1 = np.zeros(tab.M.shape[1])
        cost1[k + m:] = 1.0
        status = tab.optimize(cost1, max_iter)
        if status != "optimal":
            return SimplexResult("numerical_failure", iterations=tab.iterations, message=f"phase 1: {status}")
        infeas = tab.solution()[k + m:].sum()
        if infeas > 1e-7 * max(1.0, np.abs(rhs).max(initial=0.0)):
            return SimplexResult("infeasible", iterations=tab.iterations)
        tab.u[k + m:] = 0.0  # artificials stay pinned at zero
        tab.at_upper[k + m:] = False

    cost2 = np.concatenate([c_z, np.zeros(m + n_art)])
    status = tab.optimize(cost2, max_iter)
    if status == "unbounded":
        return SimplexResult("unbounded", iterations=tab.iterations)
    if status != "optimal":
        return SimplexResult("numerical_failure", iterations=tab.iterations, message=status)
    z = tab.solution()[:k]
    x = shift + T @ z
    return SimplexResult("optimal", x, float(c @ x), tab.iterations)
