"""Bundled instance fixtures.

Four small south-west India networks over 7 sectors, 4 flights and an
11-period horizon, one per solution scenario: conflicting Bangalore
arrivals under capacity 1, the conflict-free baseline under capacity 2,
early departures through backward-extended windows, and an inconsistent
connection timing resolved by the turnaround constraint.
"""

from __future__ import annotations

from importlib.resources import files

SCENARIOS = ("scenario1", "scenario2", "scenario3", "scenario4")


def scenario_path(name: str) -> str:
    """Filesystem path of a bundled ``.tfmp`` fixture, e.g. ``scenario1``."""
    if name not in SCENARIOS:
        raise KeyError(f"unknown fixture {name!r}; choose from {SCENARIOS}")
    return str(files(__package__).joinpath(f"{name}.tfmp"))


def load_scenario(name: str):
    """Parse and validate a bundled fixture."""
    from ..fileio import parse_instance

    return parse_instance(scenario_path(name))
