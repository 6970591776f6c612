"""Scenario solving and report rendering.

`run_scenario` drives the whole pipeline on an instance file (parse,
window derivation where needed, build, solve in the requested mode) and
returns a report whose objective has been cross-checked against the
re-extracted schedule costs.  Renderers emit a human table mirroring the
per-flight columns (scheduled and actual timings, ground and air delay),
CSV, or JSON lines; the machine formats always carry the fixed field set
flight, dep_sched, dep_actual, arr_sched, arr_actual, ground_delay,
air_delay, cost_beta, cost_alpha.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import simplex
from .branch_bound import solve_ip
from .decomposition import DecompositionTrace, iterative_solve
from .fileio import parse_instance
from .formulation import (
    FlightSchedule,
    build_system,
    build_variables,
    extract_schedule,
    total_alpha,
    total_beta,
)
from .model import Instance, derive_time_windows
from .simplex import is_integral, solve_lp

MODES = ("relax", "exact", "decompose")


class InfeasibleInstance(Exception):
    """The instance admits no schedule within its windows and capacities."""


@dataclass(frozen=True)
class SolveOptions:
    max_ground_hold: int = 4
    max_air_hold: int = 2
    allow_early: int = 0
    node_limit: int = 1_000_000
    compare_full: bool = False


@dataclass(frozen=True)
class ScenarioReport:
    path: str
    mode: str
    schedules: tuple[FlightSchedule, ...]
    objective_beta: Fraction
    objective_alpha: Fraction
    integral: Optional[bool]
    n_columns: int
    n_rows: int
    elapsed_seconds: float
    lp_iterations: Optional[int] = None
    nodes_explored: Optional[int] = None
    decomposition: Optional[DecompositionTrace] = None


def prepare(inst: Instance, options: SolveOptions = SolveOptions()):
    """Complete windows if needed, then build the variable map and system."""
    if not all(f.has_complete_windows() for f in inst.flights):
        inst = derive_time_windows(
            inst, options.max_ground_hold, options.max_air_hold, options.allow_early
        )
    variables = build_variables(inst)
    system = build_system(inst, variables)
    return inst, variables, system


def run_scenario(path: str, mode: str = "relax", options: SolveOptions = SolveOptions()) -> ScenarioReport:
    """Solve one instance file and return the cross-checked report.

    relax: solve the LP relaxation; a fractional optimum raises
    FractionalSolution since no schedule can be tabulated.  exact: branch
    and bound.  decompose: the iterative conflict-set scheme.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    inst = parse_instance(path)
    start = time.perf_counter()
    inst, variables, system = prepare(inst, options)

    lp_iterations = None
    nodes = None
    trace = None
    integral: Optional[bool] = None

    if mode == "relax":
        sol = solve_lp(system)
        if sol.status != simplex.OPTIMAL:
            raise InfeasibleInstance(f"{path}: LP relaxation is {sol.status}")
        integral, _, _ = is_integral(sol)
        lp_iterations = sol.iterations
        schedules = extract_schedule(inst, variables, sol.values, expected_objective=sol.objective)
    elif mode == "exact":
        result = solve_ip(system, node_limit=options.node_limit)
        if result.status != "optimal":
            raise InfeasibleInstance(f"{path}: integer program is infeasible")
        integral = result.lp_was_integral
        nodes = result.nodes_explored
        schedules = extract_schedule(
            inst, variables, result.values, expected_objective=float(result.objective)
        )
    else:
        trace = iterative_solve(inst, compare_full=options.compare_full)
        schedules = list(trace.final_schedule)

    elapsed = time.perf_counter() - start
    return ScenarioReport(
        path=path,
        mode=mode,
        schedules=tuple(schedules),
        objective_beta=total_beta(schedules),
        objective_alpha=total_alpha(schedules),
        integral=integral,
        n_columns=system.n_columns,
        n_rows=len(system.rows),
        elapsed_seconds=elapsed,
        lp_iterations=lp_iterations,
        nodes_explored=nodes,
        decomposition=trace,
    )


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


def render_table(report: ScenarioReport) -> str:
    """Human-readable per-flight table plus a summary block."""
    show_alpha = any(s.cost_beta < 0 for s in report.schedules)
    headers = ["Flight", "Dep sched", "Dep actual", "Arr sched", "Arr actual",
               "Ground delay", "Air delay", "Cost"]
    if show_alpha:
        headers.append("Real cost")
    rows = []
    for s in report.schedules:
        row = [s.flight, s.dep_sched, s.dep_actual, s.arr_sched, s.arr_actual,
               s.ground_delay, s.air_delay, _num(s.cost_beta)]
        if show_alpha:
            row.append(_num(s.cost_alpha))
        rows.append([str(v) for v in row])

    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())

    lines.append("")
    lines.append(f"objective (computed cost)  {_num(report.objective_beta)}")
    if show_alpha:
        lines.append(f"real cost (clamped)        {_num(report.objective_alpha)}")
    if report.integral is not None:
        lines.append(f"relaxation integral        {'yes' if report.integral else 'no'}")
    lines.append(f"columns x rows             {report.n_columns} x {report.n_rows}")
    if report.lp_iterations is not None:
        lines.append(f"simplex iterations         {report.lp_iterations}")
    if report.nodes_explored is not None:
        lines.append(f"nodes explored             {report.nodes_explored}")
    if report.decomposition is not None:
        t = report.decomposition
        sizes = ", ".join(str(r.x_size) for r in t.iterations)
        lines.append(f"conflict-set sizes         {sizes}")
        lines.append(f"collapsed to full solve    {'yes' if t.collapsed_to_full else 'no'}")
        if t.full_objective is not None:
            lines.append(f"full-solve objective       {_num(t.full_objective)}")
    lines.append(f"elapsed seconds            {report.elapsed_seconds:.4f}")
    return "\n".join(lines)


CSV_FIELDS = ("flight", "dep_sched", "dep_actual", "arr_sched", "arr_actual",
              "ground_delay", "air_delay", "cost_beta", "cost_alpha")


def _record(s: FlightSchedule) -> dict:
    return {
        "flight": s.flight,
        "dep_sched": s.dep_sched,
        "dep_actual": s.dep_actual,
        "arr_sched": s.arr_sched,
        "arr_actual": s.arr_actual,
        "ground_delay": s.ground_delay,
        "air_delay": s.air_delay,
        "cost_beta": _num(s.cost_beta),
        "cost_alpha": _num(s.cost_alpha),
    }


def render_csv(report: ScenarioReport) -> str:
    lines = [",".join(CSV_FIELDS)]
    for s in report.schedules:
        rec = _record(s)
        lines.append(",".join(str(rec[f]) for f in CSV_FIELDS))
    return "\n".join(lines)


def render_jsonl(report: ScenarioReport) -> str:
    return "\n".join(json.dumps(_record(s), sort_keys=True) for s in report.schedules)


def render(report: ScenarioReport, fmt: str) -> str:
    if fmt == "table":
        return render_table(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json-lines":
        return render_jsonl(report)
    raise ValueError(f"unknown format {fmt!r}")
