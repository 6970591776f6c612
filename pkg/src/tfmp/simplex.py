"""Bounded-variable primal simplex for small dense linear programs.

Minimizes a linear objective over inequality rows with every structural
column confined to a finite interval (here always [0, 1], possibly pinned
to a point by the branch and bound driver).  The implementation keeps an
explicit dense basis inverse, prices with Dantzig's rule and falls back to
Bland's rule once the objective has stalled for a configurable streak of
pivots, which guarantees termination on the massively degenerate systems
the formulation produces.  Feasibility comes from a phase-1 minimization
of artificial infeasibilities, so no big-M constants enter the arithmetic.

Double precision with a 1e-7 feasibility tolerance is sufficient here:
all row data are small integers, so conditioning is benign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .formulation import ConstraintSystem, GE

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

FEAS_TOL = 1e-7
_PIV_TOL = 1e-9
_REFACTOR_EVERY = 100


class CycleLimit(Exception):
    """Iteration cap exceeded; indicates an anti-cycling bug, not a hard instance."""


@dataclass
class LpSolution:
    status: str
    values: Optional[np.ndarray]
    objective: Optional[float]
    iterations: int
    basis: tuple[int, ...] = ()

    def value(self, col: int) -> float:
        return float(self.values[col])


def system_arrays(system: ConstraintSystem):
    """Dense float (c, A, b, lb, ub, offset) with every row normalized to <=."""
    n = system.n_columns
    m = len(system.rows)
    A = np.zeros((m, n))
    b = np.zeros(m)
    for i, row in enumerate(system.rows):
        sign = -1.0 if row.sense == GE else 1.0
        for col, coef in zip(row.cols, row.coefs):
            A[i, col] = sign * coef
        b[i] = sign * row.rhs
    c = np.array([float(v) for v in system.objective])
    lb = np.array([float(lo) for lo, _ in system.bounds])
    ub = np.array([float(hi) for _, hi in system.bounds])
    return c, A, b, lb, ub, float(system.objective_offset)


def solve_lp(
    system: ConstraintSystem,
    max_iterations: int = 100_000,
    tol: float = FEAS_TOL,
    degeneracy_switch: int = 50,
) -> LpSolution:
    """Solve the relaxation of a constraint system over its column bounds.

    Returns an optimal vertex solution, or infeasible status when phase 1
    cannot clear the artificial variables.  Unbounded status cannot occur
    for fully bounded columns but is reported for generic systems.  Two
    solves of the same system produce identical values: pivot choices are
    deterministic functions of the data.
    """
    c, A, b, lb, ub, offset = system_arrays(system)
    status, x, iters, basis = _bounded_simplex(
        c, A, b, lb, ub, max_iterations, tol, degeneracy_switch
    )
    if status != OPTIMAL:
        return LpSolution(status, None, None, iters, ())
    # defensive recheck before anyone trusts the certificate
    if A.size and (A @ x - b).max(initial=0.0) > 1e-6:
        raise ArithmeticError("simplex returned a point violating a row by more than 1e-6")
    if (x - ub).max(initial=0.0) > 1e-9 or (lb - x).max(initial=0.0) > 1e-9:
        raise ArithmeticError("simplex returned a point outside the column bounds")
    return LpSolution(OPTIMAL, x, float(c @ x) + offset, iters, basis)


def is_integral(sol: LpSolution, tol: float = 1e-6):
    """Whether every value sits within ``tol`` of {0, 1}.

    Returns ``(flag, worst column index or None, worst distance)``; the
    offender is reported even when the solution passes.
    """
    if sol.status != OPTIMAL:
        raise ValueError("integrality is only defined for optimal solutions")
    if sol.values is None or len(sol.values) == 0:
        return True, None, 0.0
    dist = np.abs(sol.values - np.round(sol.values))
    worst = int(np.argmax(dist))
    return bool(dist[worst] <= tol), worst, float(dist[worst])


def _bounded_simplex(c, A, b, lb, ub, max_iter, tol, degeneracy_switch):
    m, n = A.shape

    if n == 0:
        ok = bool((b >= -tol).all()) if m else True
        return (OPTIMAL if ok else INFEASIBLE), np.zeros(0), 0, ()
    if m == 0:
        x = np.where(c >= 0, lb, ub)
        return OPTIMAL, x, 0, ()

    resid = b - A @ lb
    art_rows = np.flatnonzero(resid < -tol)
    n_art = len(art_rows)

    F = np.hstack([A, np.eye(m)])
    lo = np.concatenate([lb, np.zeros(m)])
    hi = np.concatenate([ub, np.full(m, np.inf)])
    if n_art:
        art_cols = np.zeros((m, n_art))
        art_cols[art_rows, np.arange(n_art)] = -1.0
        F = np.hstack([F, art_cols])
        lo = np.concatenate([lo, np.zeros(n_art)])
        hi = np.concatenate([hi, np.full(n_art, np.inf)])
    ncols = F.shape[1]

    basis = np.arange(n, n + m)
    basis[art_rows] = n + m + np.arange(n_art)
    is_basic = np.zeros(ncols, dtype=bool)
    is_basic[basis] = True
    at_upper = np.zeros(ncols, dtype=bool)
    Binv = np.eye(m)
    Binv[art_rows, art_rows] = -1.0

    # columns pinned to a point never enter; refreshed after phase 1 pins
    # the artificials
    fixed_span = hi - lo <= _PIV_TOL

    state = {"iters": 0, "since_refactor": 0}

    def nonbasic_vals():
        v = np.where(at_upper, hi, lo)
        v[is_basic] = 0.0
        return v

    def run_phase(cost):
        nonlocal Binv
        streak = 0
        prev_obj = np.inf
        while True:
            state["iters"] += 1
            if state["iters"] > max_iter:
                raise CycleLimit(f"no optimum after {max_iter} pivots")

            vnb = nonbasic_vals()
            xB = Binv @ (b - F @ vnb)
            obj = float(cost[basis] @ xB + cost @ vnb)
            if obj < prev_obj - 1e-12:
                streak = 0
            else:
                streak += 1
            prev_obj = min(prev_obj, obj)
            bland = streak >= degeneracy_switch

            y = cost[basis] @ Binv
            red = cost - y @ F
            enter_up = ~is_basic & ~at_upper & ~fixed_span & (red < -tol)
            enter_dn = ~is_basic & at_upper & ~fixed_span & (red > tol)
            cand = np.flatnonzero(enter_up | enter_dn)
            if cand.size == 0:
                return obj, xB

            q = int(cand[0]) if bland else int(cand[np.argmax(np.abs(red[cand]))])
            direction = -1.0 if at_upper[q] else 1.0
            col = Binv @ F[:, q]
            step = direction * col  # basic values move by -step * delta

            ratios = np.full(m, np.inf)
            lbB, ubB = lo[basis], hi[basis]
            dec = step > _PIV_TOL
            ratios[dec] = (xB[dec] - lbB[dec]) / step[dec]
            inc = (step < -_PIV_TOL) & np.isfinite(ubB)
            ratios[inc] = (ubB[inc] - xB[inc]) / (-step[inc])
            ratios = np.maximum(ratios, 0.0)

            span = hi[q] - lo[q]
            rmin = float(ratios.min()) if m else np.inf
            if not np.isfinite(min(rmin, span)):
                return None, None  # unbounded ray

            if span <= rmin:
                at_upper[q] = not at_upper[q]  # bound flip, basis unchanged
                continue

            near = np.flatnonzero(ratios <= rmin + 1e-9)
            if bland:
                r = int(near[np.argmin(basis[near])])
            else:
                r = int(near[np.argmax(np.abs(step[near]))])
            leaving = int(basis[r])
            at_upper[leaving] = step[r] < 0  # sent to the bound it hit
            is_basic[leaving] = False
            is_basic[q] = True
            basis[r] = q
            at_upper[q] = False

            piv = col[r]
            Binv[r, :] /= piv
            rest = col.copy()
            rest[r] = 0.0
            Binv -= np.outer(rest, Binv[r, :])
            state["since_refactor"] += 1
            if state["since_refactor"] >= _REFACTOR_EVERY:
                Binv = np.linalg.inv(F[:, basis])
                state["since_refactor"] = 0

    if n_art:
        phase1 = np.zeros(ncols)
        phase1[n + m :] = 1.0
        obj1, _ = run_phase(phase1)
        if obj1 is None:
            raise ArithmeticError("phase-1 objective cannot be unbounded below")
        if obj1 > tol:
            return INFEASIBLE, None, state["iters"], ()
        hi[n + m :] = 0.0  # pin artificials for phase 2
        fixed_span = hi - lo <= _PIV_TOL

    cost = np.concatenate([c, np.zeros(ncols - n)])
    obj2, xB = run_phase(cost)
    if obj2 is None:
        return UNBOUNDED, None, state["iters"], ()

    x = nonbasic_vals()
    x[basis] = xB
    xs = np.clip(x[:n], lb, ub)  # shave off pivot round-off
    return OPTIMAL, xs, state["iters"], tuple(int(i) for i in basis)
