"""Domain types for traffic flow management instances.

An instance describes flight legs moving through a shared identifier space
of airports and en-route sectors on a discrete 1-based time grid ``1..T``
("time t" is the end of period t).  Each flight carries an ordered sector
path, a schedule, per-period ground and air holding costs, per-sector
transit times, and one inclusive "arrive-by" time window per path sector.
Windows may be supplied explicitly or derived from the schedule with
:func:`derive_time_windows`.

Instances are immutable after validation and safe to share across
concurrent solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

#: Capacity value meaning "no limit".  Missing capacity entries default to
#: this sentinel; a default of 0 would silently make instances infeasible.
UNBOUNDED = None

Window = tuple[int, int]


class ValidationError(Exception):
    """Instance data violates a structural invariant.

    Collects every violation found, not just the first, as
    ``(location, message)`` pairs on :attr:`violations`.
    """

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        detail = "; ".join(f"{loc}: {msg}" for loc, msg in self.violations)
        super().__init__(f"{len(self.violations)} violation(s): {detail}")


class WindowError(Exception):
    """A derived time window came out empty after clipping to the horizon."""


@dataclass(frozen=True)
class Flight:
    """One flight leg between two airports.

    ``path`` lists the sectors traversed in order; the first and last
    entries are the departure and arrival airports.  ``transit_times[i]``
    is the minimum number of periods spent in ``path[i]`` before entering
    ``path[i+1]``, so it has one entry fewer than ``path``.  ``windows``
    holds one inclusive arrive-by interval per path sector, ``None`` where
    not yet known.
    """

    id: str
    path: tuple[str, ...]
    scheduled_departure: int
    scheduled_arrival: int
    ground_cost: Fraction
    air_cost: Fraction
    transit_times: tuple[int, ...]
    turnaround: int = 0
    windows: tuple[Optional[Window], ...] | None = None

    def cumulative_transit(self) -> tuple[int, ...]:
        """Offsets from departure to the earliest entry into each path sector."""
        offs = [0]
        for l in self.transit_times:
            offs.append(offs[-1] + l)
        return tuple(offs)

    def window(self, i: int) -> Window:
        if self.windows is None or self.windows[i] is None:
            raise ValueError(f"flight {self.id}: window for path position {i} not set")
        return self.windows[i]

    def has_complete_windows(self) -> bool:
        return self.windows is not None and all(w is not None for w in self.windows)


@dataclass(frozen=True)
class CapacityProfile:
    """Time-varying departure, arrival and occupancy limits per sector.

    Each mapping is keyed by ``(sector, t)``; a missing key means
    :data:`UNBOUNDED`.  Arrival and departure limits only bind at sectors
    that are some flight's first or last path entry (airports).
    """

    departure: dict[tuple[str, int], int] = field(default_factory=dict)
    arrival: dict[tuple[str, int], int] = field(default_factory=dict)
    sector: dict[tuple[str, int], int] = field(default_factory=dict)

    def departure_at(self, k: str, t: int) -> Optional[int]:
        return self.departure.get((k, t), UNBOUNDED)

    def arrival_at(self, k: str, t: int) -> Optional[int]:
        return self.arrival.get((k, t), UNBOUNDED)

    def sector_at(self, j: str, t: int) -> Optional[int]:
        return self.sector.get((j, t), UNBOUNDED)


@dataclass(frozen=True)
class Instance:
    """A complete problem instance.

    ``continuations`` holds ordered pairs ``(earlier, later)`` meaning the
    aircraft flying ``earlier`` performs ``later`` next; ``later`` cannot
    depart until ``earlier`` has arrived plus ``earlier``'s turnaround.
    ``period_minutes`` is carried as metadata only and never enters the
    math.
    """

    sectors: tuple[str, ...]
    flights: tuple[Flight, ...]
    horizon: int
    capacities: CapacityProfile = field(default_factory=CapacityProfile)
    continuations: tuple[tuple[str, str], ...] = ()
    period_minutes: Optional[int] = None

    def flight(self, flight_id: str) -> Flight:
        for f in self.flights:
            if f.id == flight_id:
                return f
        raise KeyError(flight_id)


def validate_instance(inst: Instance) -> Instance:
    """Check every structural invariant and return the instance unchanged.

    All violations are collected before raising, so a bad data file is
    reported in one pass rather than one error at a time.
    """
    bad: list[tuple[str, str]] = []
    T = inst.horizon
    if T < 1:
        bad.append(("horizon", f"horizon must be >= 1, got {T}"))

    seen_sectors = set()
    for s in inst.sectors:
        if not s:
            bad.append(("sectors", "empty sector name"))
        elif s in seen_sectors:
            bad.append((f"sector {s}", "duplicate sector name"))
        seen_sectors.add(s)

    seen_flights = set()
    for f in inst.flights:
        loc = f"flight {f.id or '<unnamed>'}"
        if not f.id:
            bad.append(("flights", "empty flight id"))
        if f.id in seen_flights:
            bad.append((loc, "duplicate flight id"))
        seen_flights.add(f.id)

        if len(f.path) < 2:
            bad.append((loc, f"path needs departure and arrival airports, got {len(f.path)} sector(s)"))
        if len(set(f.path)) != len(f.path):
            bad.append((loc, "path revisits a sector; variables are keyed by (flight, sector)"))
        for s in f.path:
            if s not in seen_sectors:
                bad.append((loc, f"path sector {s} not in the instance sector set"))
        if len(f.transit_times) != max(len(f.path) - 1, 0):
            bad.append((loc, f"expected {len(f.path) - 1} transit times, got {len(f.transit_times)}"))
        for i, l in enumerate(f.transit_times):
            if l < 1:
                bad.append((loc, f"transit time through {f.path[i]} must be positive, got {l}"))
        if not (1 <= f.scheduled_departure <= T):
            bad.append((loc, f"scheduled departure {f.scheduled_departure} outside horizon 1..{T}"))
        if not (1 <= f.scheduled_arrival <= T):
            bad.append((loc, f"scheduled arrival {f.scheduled_arrival} outside horizon 1..{T}"))
        if f.turnaround < 0:
            bad.append((loc, f"turnaround must be non-negative, got {f.turnaround}"))
        if f.ground_cost < 0:
            bad.append((loc, f"ground cost must be non-negative, got {f.ground_cost}"))
        if f.air_cost < 0:
            bad.append((loc, f"air cost must be non-negative, got {f.air_cost}"))

        if f.windows is not None:
            if len(f.windows) != len(f.path):
                bad.append((loc, f"expected {len(f.path)} windows, got {len(f.windows)}"))
            else:
                for i, w in enumerate(f.windows):
                    if w is None:
                        continue
                    lo, hi = w
                    if lo > hi:
                        bad.append((loc, f"window at {f.path[i]} is empty: {lo}..{hi}"))
                    elif lo < 1 or hi > T:
                        bad.append((loc, f"window {lo}..{hi} at {f.path[i]} outside horizon 1..{T}"))

    continued = set()
    for prev_id, next_id in inst.continuations:
        loc = f"continuation ({prev_id}, {next_id})"
        if prev_id not in seen_flights or next_id not in seen_flights:
            bad.append((loc, "references an unknown flight"))
            continue
        if prev_id == next_id:
            bad.append((loc, "a flight cannot continue itself"))
            continue
        prev = inst.flight(prev_id)
        nxt = inst.flight(next_id)
        if prev.path and nxt.path and prev.path[-1] != nxt.path[0]:
            bad.append((loc, f"{prev_id} ends at {prev.path[-1]} but {next_id} departs from {nxt.path[0]}"))
        if next_id in continued:
            bad.append((loc, f"{next_id} appears twice as a continued flight"))
        continued.add(next_id)

    for kind, table in (
        ("departure", inst.capacities.departure),
        ("arrival", inst.capacities.arrival),
        ("sector", inst.capacities.sector),
    ):
        for (s, t), cap in table.items():
            loc = f"{kind} capacity ({s}, {t})"
            if s not in seen_sectors:
                bad.append((loc, "unknown sector"))
            if not (1 <= t <= T):
                bad.append((loc, f"time {t} outside horizon 1..{T}"))
            if cap is not None and cap < 0:
                bad.append((loc, f"capacity must be non-negative, got {cap}"))

    if bad:
        raise ValidationError(bad)
    return inst


def derive_time_windows(
    inst: Instance,
    max_ground_hold: int,
    max_air_hold: int = 0,
    allow_early: int = 0,
) -> Instance:
    """Fill in missing arrive-by windows from schedules and hold allowances.

    For path position i the earliest arrive-by time is the scheduled one
    (departure plus accumulated transit) minus ``allow_early``; the latest
    adds back ``allow_early`` plus both hold allowances.  Windows are
    clipped to ``[1, T]``.  Explicitly provided windows are never
    overwritten.

    Raises :class:`WindowError` if any derived window is empty after
    clipping, which means the horizon is too short for that flight.
    """
    if min(max_ground_hold, max_air_hold, allow_early) < 0:
        raise ValueError("hold allowances must be non-negative")
    T = inst.horizon
    span = allow_early + max_ground_hold + max_air_hold
    flights = []
    for f in inst.flights:
        given = f.windows if f.windows is not None else (None,) * len(f.path)
        offs = f.cumulative_transit()
        wins: list[Window] = []
        for i, j in enumerate(f.path):
            if given[i] is not None:
                wins.append(given[i])
                continue
            earliest = f.scheduled_departure + offs[i] - allow_early
            latest = earliest + span
            lo, hi = max(1, earliest), min(T, latest)
            if lo > hi:
                raise WindowError(
                    f"flight {f.id}: derived window for {j} is empty "
                    f"({earliest}..{latest} clipped to horizon 1..{T})"
                )
            wins.append((lo, hi))
        flights.append(replace(f, windows=tuple(wins)))
    return replace(inst, flights=tuple(flights))
