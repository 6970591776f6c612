"""Exact 0/1 optimization by LP-based branch and bound.

The relaxation is solved at the root; when it is already integral the
rounded values are returned directly and one node is reported.  Otherwise
the search branches on the most fractional column (ties to the lowest
index), applying each branch as a bound fixing [0,0] or [1,1], and visits
open nodes best-first by LP bound with deeper nodes winning ties.  An
incumbent is only accepted after re-evaluating every row in exact integer
arithmetic, so float drift can never certify a wrong optimum.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import simplex
from .formulation import ConstraintSystem, check_point
from .simplex import solve_lp, is_integral

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"

#: Bound pruning slack.  Exact for integer cost data; for rational costs
#: two optima closer than this could in principle be conflated.
_PRUNE_TOL = 1e-7


class NodeLimit(Exception):
    """The node cap was hit; the instance is too large for this searcher."""


@dataclass
class IpSolution:
    status: str
    values: Optional[tuple[int, ...]]
    objective: Optional[Fraction]
    nodes_explored: int
    lp_was_integral: bool
    node_bounds: tuple[float, ...] = ()


def solve_ip(
    system: ConstraintSystem,
    node_limit: int = 1_000_000,
    integrality_tol: float = 1e-6,
    prune: bool = True,
) -> IpSolution:
    """Globally optimal 0/1 point of the system, or infeasible.

    ``prune=False`` disables bound-based pruning (the whole tree is
    enumerated); the optimum must not change, which the tests exercise.
    """
    root = solve_lp(system)
    nodes = 1
    bounds_log = []
    if root.status == simplex.INFEASIBLE:
        return IpSolution(INFEASIBLE, None, None, nodes, False)
    if root.status != simplex.OPTIMAL:
        raise ArithmeticError("relaxation of a [0,1]-bounded system cannot be unbounded")
    bounds_log.append(root.objective)

    integral, _, _ = is_integral(root, integrality_tol)
    if integral:
        values = tuple(int(round(v)) for v in root.values)
        if check_point(system, values):
            raise ArithmeticError("integral LP optimum fails exact row re-check")
        return IpSolution(
            OPTIMAL, values, system.evaluate_objective(values), nodes, True, tuple(bounds_log)
        )

    incumbent_vals: Optional[tuple[int, ...]] = None
    incumbent_obj: Optional[Fraction] = None
    seq = 0
    # heap entries: (lp bound, -depth, tiebreak, column bounds, lp values)
    heap = [(root.objective, 0, seq, system.bounds, root.values)]

    while heap:
        bound, neg_depth, _, col_bounds, lp_values = heapq.heappop(heap)
        if prune and incumbent_obj is not None and bound >= float(incumbent_obj) - _PRUNE_TOL:
            continue

        frac_dist = [abs(v - round(v)) for v in lp_values]
        branch_col = max(range(len(frac_dist)), key=lambda i: (frac_dist[i], -i))

        for fix in (0, 1):
            child_bounds = list(col_bounds)
            child_bounds[branch_col] = (fix, fix)
            child_sys = system.with_bounds(child_bounds)
            nodes += 1
            if nodes > node_limit:
                raise NodeLimit(f"exceeded {node_limit} nodes")
            child = solve_lp(child_sys)
            if child.status == simplex.INFEASIBLE:
                continue
            bounds_log.append(child.objective)
            if prune and incumbent_obj is not None and child.objective >= float(incumbent_obj) - _PRUNE_TOL:
                continue
            integral, _, _ = is_integral(child, integrality_tol)
            if integral:
                values = tuple(int(round(v)) for v in child.values)
                if check_point(system, values):
                    raise ArithmeticError("integral node fails exact row re-check")
                obj = system.evaluate_objective(values)
                if incumbent_obj is None or obj < incumbent_obj:
                    incumbent_vals, incumbent_obj = values, obj
            else:
                seq += 1
                heapq.heappush(
                    heap,
                    (child.objective, neg_depth - 1, seq, tuple(child_bounds), child.values),
                )

    if incumbent_vals is None:
        return IpSolution(INFEASIBLE, None, None, nodes, False, tuple(bounds_log))
    return IpSolution(OPTIMAL, incumbent_vals, incumbent_obj, nodes, False, tuple(bounds_log))
