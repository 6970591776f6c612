"""Reading and writing the line-oriented instance file format.

A file has sections ``[horizon]``, ``[sectors]``, ``[flights]``,
``[capacities]``, ``[continuations]`` and optional ``[windows]``; ``#``
starts a comment anywhere on a line.  See ``docs/instance_format.md`` for
the full grammar.  Parsing reports the file name and line number of the
first syntactic problem; structural problems (duplicate ids, mismatched
continuations and so on) surface afterwards as a ValidationError listing
every violation.
"""

from __future__ import annotations

import os
from dataclasses import replace
from fractions import Fraction
from typing import Optional

from .model import CapacityProfile, Flight, Instance, validate_instance

SECTIONS = ("horizon", "sectors", "flights", "capacities", "continuations", "windows")


class ParseError(Exception):
    """Malformed instance file syntax."""

    def __init__(self, path: str, line: Optional[int], message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


def _int(token: str, path, line, what) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(path, line, f"{what}: expected an integer, got {token!r}") from None


def _cost(token: str, path, line, what) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(path, line, f"{what}: expected a rational number, got {token!r}") from None


def _timespan(token: str, path, line) -> tuple[int, int]:
    if ".." in token:
        a, _, b = token.partition("..")
        return _int(a, path, line, "time span"), _int(b, path, line, "time span")
    t = _int(token, path, line, "time")
    return t, t


def _keyvals(tokens, path, line) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(path, line, f"expected key=value, got {tok!r}")
        key, _, val = tok.partition("=")
        if key in out:
            raise ParseError(path, line, f"duplicate key {key!r}")
        out[key] = val
    return out


def parse_instance(path: str) -> Instance:
    """Parse and validate an instance file.

    Raises :class:`ParseError` for syntax problems and ValidationError for
    structural ones; on success the returned instance has passed
    validation (windows may still be partial or absent).
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.readlines()

    section = None
    seen: dict[str, list[tuple[int, str]]] = {}
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ParseError(path, lineno, f"unknown section [{section}]")
            seen.setdefault(section, [])
            continue
        if section is None:
            raise ParseError(path, lineno, "content before the first section header")
        seen[section].append((lineno, line))

    if "horizon" not in seen:
        raise ParseError(path, None, "missing [horizon] section")
    horizon = None
    minutes = None
    for lineno, line in seen["horizon"]:
        kv = _keyvals(line.split(), path, lineno)
        for key, val in kv.items():
            if key == "periods":
                horizon = _int(val, path, lineno, "periods")
            elif key == "minutes":
                minutes = _int(val, path, lineno, "minutes")
            else:
                raise ParseError(path, lineno, f"unknown horizon key {key!r}")
    if horizon is None:
        raise ParseError(path, None, "the [horizon] section never sets periods=")

    sectors = tuple(line for _, line in seen.get("sectors", []))
    for lineno, line in seen.get("sectors", []):
        if len(line.split()) != 1:
            raise ParseError(path, lineno, "a sector line holds exactly one name")

    flights = []
    order: dict[str, int] = {}
    for lineno, line in seen.get("flights", []):
        tokens = line.split()
        fid = tokens[0]
        if "=" in fid:
            raise ParseError(path, lineno, "a flight line starts with the flight id")
        kv = _keyvals(tokens[1:], path, lineno)
        unknown = set(kv) - {"path", "dep", "arr", "turn", "cg", "ca", "transit"}
        if unknown:
            raise ParseError(path, lineno, f"unknown flight key(s): {', '.join(sorted(unknown))}")
        for req in ("path", "dep", "arr", "cg", "ca", "transit"):
            if req not in kv:
                raise ParseError(path, lineno, f"flight {fid} is missing {req}=")
        flights.append(
            Flight(
                id=fid,
                path=tuple(kv["path"].split(">")),
                scheduled_departure=_int(kv["dep"], path, lineno, "dep"),
                scheduled_arrival=_int(kv["arr"], path, lineno, "arr"),
                turnaround=_int(kv.get("turn", "0"), path, lineno, "turn"),
                ground_cost=_cost(kv["cg"], path, lineno, "cg"),
                air_cost=_cost(kv["ca"], path, lineno, "ca"),
                transit_times=tuple(
                    _int(tok, path, lineno, "transit") for tok in kv["transit"].split(",")
                ),
            )
        )
        order.setdefault(fid, len(flights) - 1)

    departure: dict[tuple[str, int], int] = {}
    arrival: dict[tuple[str, int], int] = {}
    sector_cap: dict[tuple[str, int], int] = {}
    tables = {"D": departure, "A": arrival, "S": sector_cap}
    for lineno, line in seen.get("capacities", []):
        tokens = line.split()
        if len(tokens) < 3:
            raise ParseError(path, lineno, "capacity line: sector span D=.. A=.. S=..")
        name = tokens[0]
        t0, t1 = _timespan(tokens[1], path, lineno)
        kv = _keyvals(tokens[2:], path, lineno)
        unknown = set(kv) - set(tables)
        if unknown:
            raise ParseError(path, lineno, f"unknown capacity key(s): {', '.join(sorted(unknown))}")
        for key, val in kv.items():
            table = tables[key]
            for t in range(t0, t1 + 1):
                if val == "*":
                    table.pop((name, t), None)  # the unbounded sentinel
                else:
                    table[(name, t)] = _int(val, path, lineno, f"{key} capacity")

    continuations = []
    for lineno, line in seen.get("continuations", []):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(path, lineno, "continuation line: earlier_flight later_flight")
        continuations.append((tokens[0], tokens[1]))

    windows: dict[str, dict[str, tuple[int, int]]] = {}
    for lineno, line in seen.get("windows", []):
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(path, lineno, "window line: flight sector lo..hi")
        fid, sect, span = tokens
        if fid not in order:
            raise ParseError(path, lineno, f"window for unknown flight {fid}")
        flight = flights[order[fid]]
        if sect not in flight.path:
            raise ParseError(path, lineno, f"sector {sect} is not on {fid}'s path")
        windows.setdefault(fid, {})[sect] = _timespan(span, path, lineno)

    for fid, per_sector in windows.items():
        f = flights[order[fid]]
        flights[order[fid]] = replace(f, windows=tuple(per_sector.get(s) for s in f.path))

    inst = Instance(
        sectors=sectors,
        flights=tuple(flights),
        horizon=horizon,
        capacities=CapacityProfile(departure, arrival, sector_cap),
        continuations=tuple(continuations),
        period_minutes=minutes,
    )
    return validate_instance(inst)


def emit_instance(inst: Instance) -> str:
    """Render an instance in the file format; parse(emit(i)) == i."""
    out = ["[horizon]", f"periods={inst.horizon}"]
    if inst.period_minutes is not None:
        out.append(f"minutes={inst.period_minutes}")
    out += ["", "[sectors]"]
    out.extend(inst.sectors)

    out += ["", "[flights]"]
    for f in inst.flights:
        out.append(
            f"{f.id} path={'>'.join(f.path)} dep={f.scheduled_departure} "
            f"arr={f.scheduled_arrival} turn={f.turnaround} cg={f.ground_cost} "
            f"ca={f.air_cost} transit={','.join(str(l) for l in f.transit_times)}"
        )

    caps = inst.capacities
    lines = []
    for s in inst.sectors:
        run_start = None
        run_val = None
        for t in range(1, inst.horizon + 2):
            triple = (
                (caps.departure.get((s, t)), caps.arrival.get((s, t)), caps.sector.get((s, t)))
                if t <= inst.horizon
                else None
            )
            if triple == run_val and t <= inst.horizon:
                continue
            if run_val is not None and run_val != (None, None, None):
                d, a, cap = run_val
                span = f"{run_start}..{t - 1}" if t - 1 > run_start else f"{run_start}"
                fmt = lambda v: "*" if v is None else str(v)
                lines.append(f"{s} {span} D={fmt(d)} A={fmt(a)} S={fmt(cap)}")
            run_start, run_val = t, triple
    if lines:
        out += ["", "[capacities]"]
        out.extend(lines)

    if inst.continuations:
        out += ["", "[continuations]"]
        for prev_id, next_id in inst.continuations:
            out.append(f"{prev_id} {next_id}")

    window_lines = []
    for f in inst.flights:
        if f.windows is None:
            continue
        for i, w in enumerate(f.windows):
            if w is None:
                continue
            lo, hi = w
            span = f"{lo}..{hi}" if hi > lo else f"{lo}"
            window_lines.append(f"{f.id} {f.path[i]} {span}")
    if window_lines:
        out += ["", "[windows]"]
        out.extend(window_lines)

    return "\n".join(out) + "\n"


def write_instance(inst: Instance, path: str, header: Optional[str] = None) -> None:
    text = emit_instance(inst)
    if header:
        text = "".join(f"# {line}\n" for line in header.splitlines()) + text
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
