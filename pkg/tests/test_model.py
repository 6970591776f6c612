"""Core model validation and window derivation."""

import random

import pytest

from conftest import load_fixture, make_flight
from tfmp.model import (
    CapacityProfile,
    Instance,
    ValidationError,
    WindowError,
    derive_time_windows,
    validate_instance,
)


def test_baseline_fixture_is_valid():
    inst = load_fixture("scenario1")  # parse_instance validates on the way in
    assert len(inst.flights) == 4
    assert len(inst.sectors) == 7
    assert inst.horizon == 11
    assert validate_instance(inst) is inst


def test_zero_flights_is_vacuously_valid():
    inst = Instance(sectors=("Solo",), flights=(), horizon=3)
    assert validate_instance(inst) is inst


def test_validation_is_idempotent():
    inst = load_fixture("scenario2")
    assert validate_instance(validate_instance(inst)) is inst


def test_continuation_airport_mismatch():
    f1 = make_flight("Mu_Pu_Go", ("Mumbai", "Pune", "Goa"), dep=1, arr=3)
    f2 = make_flight("Pu_Be_Ba", ("Pune", "Belgaum", "Bangalore"), dep=3, arr=5)
    inst = Instance(
        sectors=("Mumbai", "Pune", "Goa", "Belgaum", "Bangalore"),
        flights=(f1, f2),
        horizon=8,
        continuations=(("Mu_Pu_Go", "Pu_Be_Ba"),),
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(inst)
    assert "ends at Goa" in str(err.value)
    assert "departs from Pune" in str(err.value)


def test_all_violations_collected():
    bad = Instance(
        sectors=("A", "A"),
        flights=(
            make_flight("F", ("A", "Z"), dep=0, arr=99),
            make_flight("F", ("A",), transit=()),
        ),
        horizon=5,
        continuations=(("F", "F"),),
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(bad)
    locations = [loc for loc, _ in err.value.violations]
    assert len(err.value.violations) >= 5
    assert any("sector A" in loc for loc in locations)
    assert any("flight F" in loc for loc in locations)
    assert any("continuation" in loc for loc in locations)


def test_duplicate_flight_and_unknown_sector_messages():
    inst = Instance(
        sectors=("A", "B"),
        flights=(make_flight("F1", ("A", "C")), make_flight("F1", ("A", "B"))),
        horizon=4,
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(inst)
    text = str(err.value)
    assert "duplicate flight id" in text
    assert "sector C" in text


def test_path_revisit_rejected():
    inst = Instance(
        sectors=("A", "B"),
        flights=(make_flight("F1", ("A", "B", "A"), transit=(1, 1)),),
        horizon=6,
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(inst)
    assert "revisits" in str(err.value)


def test_capacity_table_checked():
    inst = Instance(
        sectors=("A", "B"),
        flights=(make_flight(),),
        horizon=4,
        capacities=CapacityProfile(arrival={("Z", 2): 1, ("A", 9): 1, ("B", 1): -2}),
    )
    with pytest.raises(ValidationError) as err:
        validate_instance(inst)
    text = str(err.value)
    assert "unknown sector" in text
    assert "outside horizon" in text
    assert "non-negative" in text


def test_derive_windows_basic():
    inst = Instance(
        sectors=("A", "B", "C"),
        flights=(make_flight("F", ("A", "B", "C"), dep=3, arr=5, transit=(1, 1)),),
        horizon=11,
    )
    out = derive_time_windows(inst, max_ground_hold=2, max_air_hold=1, allow_early=0)
    assert out.flights[0].windows == ((3, 6), (4, 7), (5, 8))


def test_derive_allow_early_extends_backward():
    inst = Instance(
        sectors=("Goa", "Coimbatore", "Bangalore"),
        flights=(make_flight("Go_Co_Ba", ("Goa", "Coimbatore", "Bangalore"), dep=3, arr=5, transit=(1, 1)),),
        horizon=11,
    )
    out = derive_time_windows(inst, max_ground_hold=6, max_air_hold=0, allow_early=2)
    wins = out.flights[0].windows
    assert wins[0] == (1, 9)  # departure may run 2 periods ahead of dep=3
    assert wins[1] == (2, 10)
    assert wins[2] == (3, 11)


def test_derive_zero_holds_gives_singletons():
    inst = Instance(
        sectors=("A", "B"),
        flights=(make_flight("F", ("A", "B"), dep=2, arr=3),),
        horizon=5,
    )
    out = derive_time_windows(inst, 0, 0, 0)
    assert out.flights[0].windows == ((2, 2), (3, 3))


def test_derive_window_error_when_horizon_short():
    inst = Instance(
        sectors=("A", "B"),
        flights=(make_flight("F", ("A", "B"), dep=1, arr=3, transit=(2,)),),
        horizon=2,
    )
    with pytest.raises(WindowError) as err:
        derive_time_windows(inst, max_ground_hold=1)
    assert "F" in str(err.value)
    assert "B" in str(err.value)


def test_derive_never_overwrites_explicit():
    f = make_flight("F", ("A", "B"), dep=2, arr=3, windows=((2, 4), None))
    inst = Instance(sectors=("A", "B"), flights=(f,), horizon=9)
    out = derive_time_windows(inst, 3)
    assert out.flights[0].windows[0] == (2, 4)  # kept verbatim
    assert out.flights[0].windows[1] == (3, 6)  # derived


def test_derive_monotone_in_hold_parameters():
    rng = random.Random(4)
    for _ in range(40):
        dep = rng.randint(1, 3)
        legs = rng.randint(1, 3)
        transit = tuple(rng.randint(1, 2) for _ in range(legs))
        path = tuple(f"S{i}" for i in range(legs + 1))
        inst = Instance(
            sectors=path,
            flights=(make_flight("F", path, dep=dep, arr=dep + sum(transit), transit=transit),),
            horizon=30,
        )
        g, a, e = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 2)
        base = derive_time_windows(inst, g, a, e).flights[0].windows
        for dg, da, de in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            wider = derive_time_windows(inst, g + dg, a + da, e + de).flights[0].windows
            for (lo1, hi1), (lo2, hi2) in zip(base, wider):
                assert lo2 <= lo1 and hi2 >= hi1


def test_derived_window_minima_respect_transit():
    from dataclasses import replace

    inst = load_fixture("scenario2")
    stripped = replace(inst, flights=tuple(replace(f, windows=None) for f in inst.flights))
    out = derive_time_windows(stripped, 3, 1, 0)
    for f in out.flights:
        for i in range(len(f.path) - 1):
            assert f.windows[i + 1][0] >= f.windows[i][0] + f.transit_times[i]
