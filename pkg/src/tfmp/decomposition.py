"""Iterative conflict-set decomposition.

Instead of optimizing every flight at once, detect which flights are in
conflict at their current trajectories (the set X), solve the problem
restricted to X with the remaining flights' resource usage frozen into
the capacities, then re-check the whole schedule.  Flights newly dragged
into conflict transfer from Y into X and the loop repeats until a clean
schedule is found or X has swallowed the whole flight set, at which point
the full problem is solved directly.

A "conflict" is an actual constraint violation at fixed trajectories:
an oversubscribed departure, arrival or sector at some time, or a
continued flight departing before its aircraft is ready.  Capacity
evidence names every flight contending for the oversubscribed resource;
turnaround evidence names both flights of the pair.  X only ever grows,
and it grows precisely because the restricted solve is allowed to delay
an X flight past the fixed departure of its Y continuation partner.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .model import Instance, CapacityProfile
from .formulation import FlightSchedule, build_variables, build_system, extract_schedule, total_beta
from .formulation import InfeasibleConstruction
from .branch_bound import solve_ip, INFEASIBLE


class NonConvergence(Exception):
    """The loop hit its iteration cap; the partial trace is attached."""

    def __init__(self, message: str, trace: "DecompositionTrace"):
        super().__init__(message)
        self.trace = trace


class InfeasibleSubproblem(Exception):
    """A restricted solve (or the full collapse solve) admits no schedule."""


@dataclass(frozen=True)
class ConflictEvidence:
    kind: str  # departure | arrival | sector | turnaround
    sector: str
    time: int
    flights: tuple[str, ...]
    demand: Optional[int] = None
    capacity: Optional[int] = None


@dataclass(frozen=True)
class ConflictSet:
    X: frozenset[str]
    Y: frozenset[str]
    evidence: tuple[ConflictEvidence, ...]


@dataclass(frozen=True)
class IterationRecord:
    x_size: int
    objective: Fraction
    transfers: tuple[str, ...]


@dataclass(frozen=True)
class DecompositionTrace:
    iterations: tuple[IterationRecord, ...]
    final_schedule: tuple[FlightSchedule, ...]
    converged: bool
    collapsed_to_full: bool
    full_objective: Optional[Fraction] = None


def zero_delay_schedule(inst: Instance) -> list[FlightSchedule]:
    """Every flight at its scheduled departure with minimal transit thereafter."""
    out = []
    for f in inst.flights:
        times = tuple(f.scheduled_departure + off for off in f.cumulative_transit())
        g = 0
        a = times[-1] - f.scheduled_arrival
        beta = f.ground_cost * g + f.air_cost * a
        out.append(
            FlightSchedule(
                flight=f.id,
                dep_sched=f.scheduled_departure,
                dep_actual=times[0],
                arr_sched=f.scheduled_arrival,
                arr_actual=times[-1],
                ground_delay=g,
                air_delay=a,
                cost_beta=beta,
                cost_alpha=max(Fraction(0), beta),
                sector_times=times,
            )
        )
    return out


def _usage(inst: Instance, schedules) -> tuple[dict, dict, dict]:
    """Departure, arrival and occupancy head-counts at fixed trajectories."""
    by_id = {f.id: f for f in inst.flights}
    dep: dict[tuple[str, int], list[str]] = {}
    arr: dict[tuple[str, int], list[str]] = {}
    occ: dict[tuple[str, int], list[str]] = {}
    for s in schedules:
        f = by_id[s.flight]
        dep.setdefault((f.path[0], s.sector_times[0]), []).append(f.id)
        arr.setdefault((f.path[-1], s.sector_times[-1]), []).append(f.id)
        for i in range(len(f.path) - 1):
            for t in range(s.sector_times[i], s.sector_times[i + 1]):
                occ.setdefault((f.path[i], t), []).append(f.id)
    return dep, arr, occ


def detect_conflicts(inst: Instance, schedules) -> ConflictSet:
    """Evaluate all capacity and turnaround constraints at fixed trajectories."""
    dep, arr, occ = _usage(inst, schedules)
    caps = inst.capacities
    evidence = []
    for (k, t), flights in sorted(dep.items()):
        cap = caps.departure_at(k, t)
        if cap is not None and len(flights) > cap:
            evidence.append(
                ConflictEvidence("departure", k, t, tuple(sorted(flights)), len(flights), cap)
            )
    for (k, t), flights in sorted(arr.items()):
        cap = caps.arrival_at(k, t)
        if cap is not None and len(flights) > cap:
            evidence.append(
                ConflictEvidence("arrival", k, t, tuple(sorted(flights)), len(flights), cap)
            )
    for (j, t), flights in sorted(occ.items()):
        cap = caps.sector_at(j, t)
        if cap is not None and len(flights) > cap:
            evidence.append(
                ConflictEvidence("sector", j, t, tuple(sorted(flights)), len(flights), cap)
            )

    sched_by_id = {s.flight: s for s in schedules}
    by_id = {f.id: f for f in inst.flights}
    for prev_id, next_id in inst.continuations:
        ready = sched_by_id[prev_id].arr_actual + by_id[prev_id].turnaround
        dep_t = sched_by_id[next_id].dep_actual
        if dep_t < ready:
            evidence.append(
                ConflictEvidence(
                    "turnaround", by_id[next_id].path[0], dep_t,
                    tuple(sorted((prev_id, next_id))),
                )
            )

    in_conflict = frozenset(fid for ev in evidence for fid in ev.flights)
    all_ids = frozenset(f.id for f in inst.flights)
    return ConflictSet(in_conflict, all_ids - in_conflict, tuple(evidence))


def _restricted_instance(inst: Instance, x_ids: set[str], frozen: dict) -> Instance:
    """The instance seen by the X flights: Y usage becomes capacity headroom.

    Continuation pairs with the earlier flight frozen in Y turn into a
    departure-window floor on the X flight (it must wait for the fixed
    arrival); pairs whose later flight is frozen are dropped entirely so
    the restricted solve may create that conflict and trigger a transfer.
    """
    y_scheds = [frozen[fid] for fid in sorted(frozen) if fid not in x_ids]
    dep, arr, occ = _usage(inst, y_scheds)

    def reduced(table: dict, usage: dict) -> dict:
        out = dict(table)
        for key, flights in usage.items():
            if key in out:
                out[key] = max(0, out[key] - len(flights))
        return out

    caps = CapacityProfile(
        departure=reduced(inst.capacities.departure, dep),
        arrival=reduced(inst.capacities.arrival, arr),
        sector=reduced(inst.capacities.sector, occ),
    )

    by_id = {f.id: f for f in inst.flights}
    waits: dict[str, int] = {}
    kept_pairs = []
    for prev_id, next_id in inst.continuations:
        if prev_id in x_ids and next_id in x_ids:
            kept_pairs.append((prev_id, next_id))
        elif prev_id not in x_ids and next_id in x_ids:
            ready = frozen[prev_id].arr_actual + by_id[prev_id].turnaround
            waits[next_id] = max(waits.get(next_id, 0), ready)

    flights = []
    for f in inst.flights:
        if f.id not in x_ids:
            continue
        if f.id in waits:
            lo, hi = f.window(0)
            lo = max(lo, waits[f.id])
            if lo > hi:
                raise InfeasibleSubproblem(
                    f"{f.id} must wait until {waits[f.id]} but its departure window ends at {hi}"
                )
            wins = list(f.windows)
            wins[0] = (lo, hi)
            f = replace(f, windows=tuple(wins))
        flights.append(f)

    return replace(inst, flights=tuple(flights), capacities=caps, continuations=tuple(kept_pairs))


def _solve_instance(inst: Instance):
    """Full build-and-solve returning (schedules, exact objective)."""
    variables = build_variables(inst)
    try:
        system = build_system(inst, variables)
    except InfeasibleConstruction as exc:
        raise InfeasibleSubproblem(str(exc)) from exc
    result = solve_ip(system)
    if result.status == INFEASIBLE:
        raise InfeasibleSubproblem("restricted problem admits no schedule")
    schedules = extract_schedule(inst, variables, result.values)
    return schedules, result.objective


def iterative_solve(
    inst: Instance,
    max_iters: Optional[int] = None,
    compare_full: bool = False,
) -> DecompositionTrace:
    """Run the grow-and-resolve loop until the schedule is conflict free.

    Y flights stay frozen at their scheduled (or previously solved)
    trajectories; X flights keep the trajectories of their last restricted
    solve.  ``compare_full`` additionally solves the whole instance once
    and records its objective on the trace for comparison; the decomposed
    objective is observational and may exceed it.
    """
    if max_iters is None:
        max_iters = len(inst.flights) + 1
    current = {s.flight: s for s in zero_delay_schedule(inst)}
    all_ids = {f.id: f for f in inst.flights}
    x: set[str] = set()
    records: list[IterationRecord] = []
    converged = False
    collapsed = False

    for _ in range(max_iters):
        schedules = [current[f.id] for f in inst.flights]
        found = detect_conflicts(inst, schedules)
        if not found.evidence:
            records.append(IterationRecord(len(x), total_beta(schedules), ()))
            converged = True
            break
        transfers = tuple(sorted(found.X - x))
        x |= found.X

        if x == set(all_ids):
            solved, objective = _solve_instance(inst)
            collapsed = True
        else:
            sub = _restricted_instance(inst, x, current)
            solved, objective = _solve_instance(sub)
        for s in solved:
            current[s.flight] = s
        records.append(IterationRecord(len(x), objective, transfers))

        if collapsed:
            schedules = [current[f.id] for f in inst.flights]
            leftover = detect_conflicts(inst, schedules)
            if leftover.evidence:  # the full solve satisfies everything by construction
                raise ArithmeticError("full collapse solve left violations")
            converged = True
            break

    final = tuple(current[f.id] for f in inst.flights)
    full_obj = None
    if compare_full:
        _, full_obj = _solve_instance(inst)
    trace = DecompositionTrace(tuple(records), final, converged, collapsed, full_obj)
    if not converged:
        raise NonConvergence(f"no conflict-free schedule after {max_iters} iterations", trace)
    return trace
