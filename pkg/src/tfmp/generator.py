"""Random instance generation for integrality experiments.

Instances are built backwards from a conflict dial: flights get random
simple paths over a random connected sector adjacency, schedules
consistent with their transit times, and capacities set per sector and
kind to ``ceil(peak zero-delay demand * tightness)``.  Tightness 1 leaves
the published schedule feasible (so the optimum costs nothing); anything
below 1 squeezes the peak and forces holds.  Continuation pairs are formed
as chains with matching airports so the requested fraction can exceed one
pair per two flights.  Everything is driven by one seed; equal seeds give
byte-identical instances.
"""

from __future__ import annotations

import math
import random
from dataclasses import replace
from fractions import Fraction

from .model import CapacityProfile, Flight, Instance, derive_time_windows, validate_instance
from .decomposition import zero_delay_schedule, _usage

_RETRIES = 200


class GenerationError(Exception):
    """The retry budget ran out, usually a horizon too short for the request."""


def _adjacency(rng: random.Random, names: list[str]) -> dict[str, list[str]]:
    """Connected undirected graph: a shuffled ring plus a few chords."""
    ring = names[:]
    rng.shuffle(ring)
    edges = set()
    m = len(ring)
    for i in range(m):
        if m > 1:
            edges.add(frozenset((ring[i], ring[(i + 1) % m])))
    for _ in range(m // 2):
        a, b = rng.sample(names, 2) if m > 1 else (names[0], names[0])
        if a != b:
            edges.add(frozenset((a, b)))
    adj: dict[str, list[str]] = {s: [] for s in names}
    for e in edges:
        a, b = sorted(e)
        adj[a].append(b)
        adj[b].append(a)
    return {s: sorted(n) for s, n in adj.items()}


def _random_path(rng, adj, start, length) -> list[str] | None:
    path = [start]
    while len(path) < length:
        options = [s for s in adj[path[-1]] if s not in path]
        if not options:
            return None
        path.append(rng.choice(options))
    return path


def generate_instance(
    flights: int,
    sectors: int,
    horizon: int,
    continued_fraction: float = 0.0,
    capacity_tightness: float = 1.0,
    seed: int = 0,
    max_ground_hold: int = 3,
    max_air_hold: int = 1,
) -> Instance:
    """Build a random validated instance with derived windows.

    ``continued_fraction`` p yields floor(p * flights) continuation pairs;
    ``capacity_tightness`` c scales every used resource's peak zero-delay
    demand (c < 1 induces conflicts).  Raises :class:`GenerationError`
    when schedules cannot be fitted into the horizon.
    """
    if min(flights, sectors, horizon) < 1:
        raise ValueError("flights, sectors and horizon must all be >= 1")
    if not (0.0 <= continued_fraction <= 1.0):
        raise ValueError("continued_fraction must lie in [0, 1]")
    if not (0.0 < capacity_tightness <= 1.0):
        raise ValueError("capacity_tightness must lie in (0, 1]")

    rng = random.Random(seed)
    if sectors < 2:
        raise GenerationError("flight paths need at least 2 sectors")
    names = [f"S{i + 1:02d}" for i in range(sectors)]
    adj = _adjacency(rng, names)
    n_pairs = math.floor(continued_fraction * flights)
    if n_pairs > flights - 1:
        raise ValueError("cannot chain more pairs than flights minus one")

    ids = [f"F{i + 1:02d}" for i in range(flights)]
    for _ in range(_RETRIES):
        # chains come from marking adjacencies of a shuffled flight sequence
        # as continuation links; a flight may be first in one pair and second
        # in another, so any count up to flights - 1 is reachable
        perm = ids[:]
        rng.shuffle(perm)
        link_at = rng.sample(range(flights - 1), n_pairs) if n_pairs else []
        chain_prev = {perm[i + 1]: perm[i] for i in link_at}
        built = _build_flights(rng, ids, chain_prev, adj, names, horizon,
                               max_ground_hold, max_air_hold)
        if built is not None:
            break
    else:
        raise GenerationError(
            f"could not fit {flights} flights into horizon {horizon} after {_RETRIES} attempts"
        )

    inst = Instance(
        sectors=tuple(names),
        flights=tuple(built[fid] for fid in ids),
        horizon=horizon,
        capacities=CapacityProfile(),
        continuations=tuple((chain_prev[fid], fid) for fid in ids if fid in chain_prev),
    )
    inst = derive_time_windows(inst, max_ground_hold, max_air_hold, 0)
    inst = _with_tight_capacities(inst, capacity_tightness)
    return validate_instance(inst)


def _build_flights(rng, ids, chain_prev, adj, names, horizon, ghold, ahold):
    margin = ghold + ahold
    flights: dict[str, Flight] = {}
    chain_next = {prev: nxt for nxt, prev in chain_prev.items()}

    def descendants(fid: str) -> int:
        count = 0
        while fid in chain_next:
            fid = chain_next[fid]
            count += 1
        return count

    def make(fid: str) -> bool:
        if fid in flights:
            return True
        prev_id = chain_prev.get(fid)
        if prev_id is not None and not make(prev_id):
            return False
        # every chain successor needs at least a turnaround plus one leg
        reserve = 2 * descendants(fid)
        for attempt in range(_RETRIES):
            # late retries fall back to minimal legs so long chains still fit
            squeeze = attempt > _RETRIES // 2
            length = 2 if squeeze else rng.randint(2, min(4, len(names)))
            start = flights[prev_id].path[-1] if prev_id else rng.choice(names)
            path = _random_path(rng, adj, start, length)
            if path is None:
                continue
            transit = tuple(
                1 if squeeze else rng.randint(1, 2) for _ in range(length - 1)
            )
            total = sum(transit)
            if prev_id is not None:
                prev = flights[prev_id]
                earliest = prev.scheduled_arrival + prev.turnaround
            else:
                earliest = 1
            latest = horizon - total - margin - reserve
            if latest < earliest:
                continue
            dep = earliest if squeeze else rng.randint(earliest, min(latest, earliest + 3))
            cg = Fraction(rng.randint(1, 9) * 100)
            ca = cg + Fraction(rng.randint(1, 9) * 100)
            flights[fid] = Flight(
                id=fid,
                path=tuple(path),
                scheduled_departure=dep,
                scheduled_arrival=dep + total,
                turnaround=rng.randint(0, 1) if fid in set(chain_prev.values()) else 0,
                ground_cost=cg,
                air_cost=ca,
                transit_times=transit,
            )
            return True
        return False

    for fid in ids:
        if not make(fid):
            return None
    return flights


def _with_tight_capacities(inst: Instance, tightness: float) -> Instance:
    """Capacities at ceil(peak zero-delay demand * tightness), constant in time."""
    dep, arr, occ = _usage(inst, zero_delay_schedule(inst))
    tables = {}
    for kind, usage in (("departure", dep), ("arrival", arr), ("sector", occ)):
        peaks: dict[str, int] = {}
        for (s, _t), users in usage.items():
            peaks[s] = max(peaks.get(s, 0), len(users))
        table = {}
        for s, peak in peaks.items():
            cap = math.ceil(peak * tightness)
            for t in range(1, inst.horizon + 1):
                table[(s, t)] = cap
        tables[kind] = table
    return replace(inst, capacities=CapacityProfile(**tables))
