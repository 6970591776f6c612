"""Translate an instance into a time-indexed 0/1 linear program.

The decision column for ``(flight f, sector j, time t)`` is an arrive-BY
indicator: it is 1 when f has reached j by the end of period t.  Within
each (flight, sector) window the indicator is monotone in t and the value
at the last window time is forced to 1, so that variable is eliminated and
substituted as a constant wherever it appears.  Outside a window the
indicator is the constant 0 before the window and 1 after it.

Constraint families, in emission order:

* departure capacity, one row per (airport, t) with a finite limit,
* arrival capacity, same shape at the final path airports,
* sector occupancy, counting flights that have reached j but not the next
  sector on their path,
* transit coupling, entering the next sector no earlier than the minimum
  dwell allows,
* turnaround coupling for continued flights,
* in-window monotonicity.

Rows whose variables are all eliminated and which hold identically are
dropped; a fully substituted row that fails raises
:class:`InfeasibleConstruction`.  Turnaround rows whose earlier-flight
term substitutes to the constant 1 are vacuous and dropped as well.

All row coefficients and right-hand sides are integers and the objective
is kept in exact rationals, so downstream polyhedral analysis can work
without floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

from .model import Instance

LE = "<="
GE = ">="

#: Absolute distance to the nearest integer below which a solver value is
#: treated as integral.
INTEGRALITY_TOL = 1e-6


class InfeasibleConstruction(Exception):
    """A fully substituted row is violated; the windows admit no schedule."""


class FractionalSolution(Exception):
    """A value passed to the schedule extractor is not integral within tolerance."""

    def __init__(self, column: tuple[str, str, int], value: float, distance: float):
        self.column = column
        self.value = value
        self.distance = distance
        super().__init__(
            f"column {column} has value {value!r}, {distance:.3g} away from the nearest integer"
        )


@dataclass(frozen=True)
class RowTag:
    """Provenance of a constraint row, for reports and targeted tests."""

    kind: str  # DepCap | ArrCap | SectorCap | Transit | Turn | Monotone
    sector: Optional[str] = None
    flight: Optional[str] = None
    flight2: Optional[str] = None
    leg: Optional[int] = None
    time: Optional[int] = None

    def __str__(self) -> str:
        parts = [p for p in (self.sector, self.flight, self.flight2) if p]
        if self.leg is not None:
            parts.append(f"leg{self.leg}")
        if self.time is not None:
            parts.append(f"t={self.time}")
        return f"{self.kind}({', '.join(parts)})"


@dataclass(frozen=True)
class Row:
    """One sparse inequality: sum(coefs * columns) sense rhs.

    The instance builder only ever emits integer data; rational entries
    are accepted for hand-built systems and stay exact downstream.
    """

    cols: tuple[int, ...]
    coefs: tuple[int | Fraction, ...]
    sense: str
    rhs: int | Fraction
    tag: RowTag


@dataclass(frozen=True)
class VariableMap:
    """Bijection between free (flight, sector, time) triples and columns.

    ``fixed`` records eliminated variables: the last time in every
    (flight, sector) window, pinned to 1.  Triples outside windows never
    appear and are implicitly 0 before and 1 after the window.
    """

    columns: tuple[tuple[str, str, int], ...]
    index: dict[tuple[str, str, int], int]
    fixed: dict[tuple[str, str, int], int]

    def __len__(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class ConstraintSystem:
    """The formulation as pure linear algebra over [0, 1] columns."""

    n_columns: int
    rows: tuple[Row, ...]
    objective: tuple[Fraction, ...]
    objective_offset: Fraction
    bounds: tuple[tuple[int, int], ...]

    def with_objective(self, costs: Iterable, offset=0) -> "ConstraintSystem":
        obj = tuple(Fraction(c) for c in costs)
        if len(obj) != self.n_columns:
            raise ValueError(f"expected {self.n_columns} costs, got {len(obj)}")
        return replace(self, objective=obj, objective_offset=Fraction(offset))

    def with_bounds(self, bounds: Iterable[tuple[int, int]]) -> "ConstraintSystem":
        bnd = tuple(bounds)
        if len(bnd) != self.n_columns:
            raise ValueError(f"expected {self.n_columns} bounds, got {len(bnd)}")
        return replace(self, bounds=bnd)

    def evaluate_objective(self, point: Iterable) -> Fraction:
        total = self.objective_offset
        for c, v in zip(self.objective, point):
            if v:
                total += c * Fraction(v)
        return total


@dataclass(frozen=True)
class FlightSchedule:
    """Solved timings for one flight, with delays measured against schedule.

    ``ground_delay`` is actual minus scheduled departure (negative when an
    early departure was allowed), ``air_delay`` is arrival delay net of the
    ground component.  ``cost_beta`` is the objective contribution
    ``cg * ground + ca * air``; ``cost_alpha`` clamps it at zero, the
    reportable real cost when delays go negative.
    """

    flight: str
    dep_sched: int
    dep_actual: int
    arr_sched: int
    arr_actual: int
    ground_delay: int
    air_delay: int
    cost_beta: Fraction
    cost_alpha: Fraction
    sector_times: tuple[int, ...]


def total_beta(schedules: Iterable[FlightSchedule]) -> Fraction:
    return sum((s.cost_beta for s in schedules), Fraction(0))


def total_alpha(schedules: Iterable[FlightSchedule]) -> Fraction:
    return sum((s.cost_alpha for s in schedules), Fraction(0))


def build_variables(inst: Instance) -> VariableMap:
    """Lay out free columns for every in-window triple minus the eliminated one.

    Ordering is deterministic: flight order, then path position, then time.
    A singleton window contributes no free column, only a fixed value.
    """
    columns: list[tuple[str, str, int]] = []
    index: dict[tuple[str, str, int], int] = {}
    fixed: dict[tuple[str, str, int], int] = {}
    for f in inst.flights:
        if not f.has_complete_windows():
            raise ValueError(f"flight {f.id} has missing windows; derive or supply them first")
        for i, j in enumerate(f.path):
            lo, hi = f.window(i)
            for t in range(lo, hi):
                index[(f.id, j, t)] = len(columns)
                columns.append((f.id, j, t))
            fixed[(f.id, j, hi)] = 1
    return VariableMap(tuple(columns), index, fixed)


class _RowAccumulator:
    """Collects one row's free coefficients and substituted constants."""

    def __init__(self):
        self.coefs: dict[int, int] = {}
        self.const = 0

    def add(self, term, sign: int):
        kind, v = term
        if kind == "col":
            c = self.coefs.get(v, 0) + sign
            if c:
                self.coefs[v] = c
            else:
                del self.coefs[v]
        else:
            self.const += sign * v

    def emit(self, rows: list[Row], sense: str, rhs: int, tag: RowTag):
        """Append the row with constants folded into the rhs, or drop/raise."""
        bound = rhs - self.const
        if not self.coefs:
            ok = self.const <= rhs if sense == LE else self.const >= rhs
            if not ok:
                raise InfeasibleConstruction(
                    f"row {tag} reduces to the false constant {self.const} {sense} {rhs}"
                )
            return
        cols = tuple(sorted(self.coefs))
        rows.append(Row(cols, tuple(self.coefs[c] for c in cols), sense, bound, tag))


def build_system(inst: Instance, variables: VariableMap) -> ConstraintSystem:
    """Emit all constraint rows and the delay-cost objective.

    The objective expands ``sum_f cg*ground_f + ca*air_f`` into arrive-by
    coefficients through the telescoping identity: the actual time at a
    sector is the window maximum minus the sum of the free indicators
    there.  The constant part is folded into ``objective_offset`` so the
    row value of an integral point equals its schedule cost exactly.
    """
    windows: dict[tuple[str, str], tuple[int, int]] = {}
    for f in inst.flights:
        for i, j in enumerate(f.path):
            windows[(f.id, j)] = f.window(i)

    def val(fid: str, j: str, t: int):
        lo, hi = windows[(fid, j)]
        if t < lo:
            return ("const", 0)
        if t >= hi:
            return ("const", 1)
        return ("col", variables.index[(fid, j, t)])

    rows: list[Row] = []
    T = inst.horizon
    caps = inst.capacities

    by_first: dict[str, list] = {}
    by_last: dict[str, list] = {}
    occupants: dict[str, list] = {}  # sector -> [(flight, next sector)]
    for f in inst.flights:
        by_first.setdefault(f.path[0], []).append(f)
        by_last.setdefault(f.path[-1], []).append(f)
        for i in range(len(f.path) - 1):
            occupants.setdefault(f.path[i], []).append((f, f.path[i + 1]))

    for k in inst.sectors:
        for t in range(1, T + 1):
            cap = caps.departure_at(k, t)
            if cap is None or k not in by_first:
                continue
            acc = _RowAccumulator()
            for f in by_first[k]:
                acc.add(val(f.id, k, t), +1)
                acc.add(val(f.id, k, t - 1), -1)
            acc.emit(rows, LE, cap, RowTag("DepCap", sector=k, time=t))

    for k in inst.sectors:
        for t in range(1, T + 1):
            cap = caps.arrival_at(k, t)
            if cap is None or k not in by_last:
                continue
            acc = _RowAccumulator()
            for f in by_last[k]:
                acc.add(val(f.id, k, t), +1)
                acc.add(val(f.id, k, t - 1), -1)
            acc.emit(rows, LE, cap, RowTag("ArrCap", sector=k, time=t))

    for j in inst.sectors:
        for t in range(1, T + 1):
            cap = caps.sector_at(j, t)
            if cap is None or j not in occupants:
                continue
            acc = _RowAccumulator()
            for f, nxt in occupants[j]:
                acc.add(val(f.id, j, t), +1)
                acc.add(val(f.id, nxt, t), -1)
            acc.emit(rows, LE, cap, RowTag("SectorCap", sector=j, time=t))

    for f in inst.flights:
        for i in range(len(f.path) - 1):
            j, nxt = f.path[i], f.path[i + 1]
            l = f.transit_times[i]
            lo, hi = windows[(f.id, j)]
            for t in range(lo, hi + 1):
                acc = _RowAccumulator()
                acc.add(val(f.id, nxt, t + l), +1)
                acc.add(val(f.id, j, t), -1)
                acc.emit(rows, LE, 0, RowTag("Transit", flight=f.id, leg=i, time=t))

    flights_by_id = {f.id: f for f in inst.flights}
    for prev_id, next_id in inst.continuations:
        prev, nxt = flights_by_id[prev_id], flights_by_id[next_id]
        k = nxt.path[0]
        s = prev.turnaround
        lo, hi = windows[(next_id, k)]
        for t in range(lo, hi + 1):
            earlier = val(prev_id, k, t - s)
            if earlier == ("const", 1):
                continue  # vacuous: the aircraft is certainly ready by t
            acc = _RowAccumulator()
            acc.add(val(next_id, k, t), +1)
            acc.add(earlier, -1)
            acc.emit(rows, LE, 0, RowTag("Turn", flight=next_id, flight2=prev_id, sector=k, time=t))

    for f in inst.flights:
        for i, j in enumerate(f.path):
            lo, hi = windows[(f.id, j)]
            for t in range(lo + 1, hi + 1):
                acc = _RowAccumulator()
                acc.add(val(f.id, j, t), +1)
                acc.add(val(f.id, j, t - 1), -1)
                acc.emit(rows, GE, 0, RowTag("Monotone", flight=f.id, sector=j, time=t))

    objective = [Fraction(0)] * len(variables)
    offset = Fraction(0)
    for f in inst.flights:
        cg, ca = f.ground_cost, f.air_cost
        dep_lo, dep_hi = windows[(f.id, f.path[0])]
        arr_lo, arr_hi = windows[(f.id, f.path[-1])]
        # actual departure D = dep_hi - sum(dep columns); cost (cg - ca) * D
        for t in range(dep_lo, dep_hi):
            objective[variables.index[(f.id, f.path[0], t)]] += ca - cg
        # actual arrival R = arr_hi - sum(arr columns); cost ca * R
        for t in range(arr_lo, arr_hi):
            objective[variables.index[(f.id, f.path[-1], t)]] -= ca
        offset += (cg - ca) * dep_hi + ca * arr_hi
        offset += -cg * f.scheduled_departure + ca * f.scheduled_departure - ca * f.scheduled_arrival

    return ConstraintSystem(
        n_columns=len(variables),
        rows=tuple(rows),
        objective=tuple(objective),
        objective_offset=offset,
        bounds=tuple((0, 1) for _ in range(len(variables))),
    )


def check_point(system: ConstraintSystem, point) -> list[int]:
    """Indices of rows the 0/1 point violates, in exact integer arithmetic."""
    violated = []
    for idx, row in enumerate(system.rows):
        lhs = sum(c * point[col] for col, c in zip(row.cols, row.coefs))
        ok = lhs <= row.rhs if row.sense == LE else lhs >= row.rhs
        if not ok:
            violated.append(idx)
    return violated


def extract_schedule(
    inst: Instance,
    variables: VariableMap,
    values,
    tol: float = INTEGRALITY_TOL,
    expected_objective: Optional[float] = None,
) -> list[FlightSchedule]:
    """Map solved column values back to per-flight timings, delays and costs.

    Values must be integral within ``tol``; the first offending column
    raises :class:`FractionalSolution`.  When ``expected_objective`` is
    given (normally the solver's objective value) the summed per-flight
    cost is checked against it to one part in 10^6.
    """
    rounded: list[int] = []
    for col, v in zip(variables.columns, values):
        r = round(float(v))
        dist = abs(float(v) - r)
        if dist > tol or r not in (0, 1):
            raise FractionalSolution(col, float(v), min(abs(float(v)), abs(1 - float(v))))
        rounded.append(int(r))

    schedules = []
    for f in inst.flights:
        times = []
        for i, j in enumerate(f.path):
            lo, hi = f.window(i)
            # telescoped arrive-by sum: actual time = hi - number of 1s before hi
            t_actual = hi - sum(rounded[variables.index[(f.id, j, t)]] for t in range(lo, hi))
            times.append(t_actual)
        dep, arr = times[0], times[-1]
        g = dep - f.scheduled_departure
        a = arr - f.scheduled_arrival - g
        beta = f.ground_cost * g + f.air_cost * a
        schedules.append(
            FlightSchedule(
                flight=f.id,
                dep_sched=f.scheduled_departure,
                dep_actual=dep,
                arr_sched=f.scheduled_arrival,
                arr_actual=arr,
                ground_delay=g,
                air_delay=a,
                cost_beta=beta,
                cost_alpha=max(Fraction(0), beta),
                sector_times=tuple(times),
            )
        )

    if expected_objective is not None:
        got = float(total_beta(schedules))
        if abs(got - float(expected_objective)) > 1e-6 * max(1.0, abs(float(expected_objective))):
            raise ValueError(
                f"schedule cost {got} disagrees with the solver objective {expected_objective}"
            )
    return schedules
