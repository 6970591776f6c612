"""Random instance generation: determinism, structure, tightness."""

import pytest

from conftest import built
from tfmp.fileio import emit_instance
from tfmp.formulation import check_point
from tfmp.generator import GenerationError, generate_instance
from tfmp.model import validate_instance
from tfmp.simplex import solve_lp


def test_zero_fraction_means_no_pairs():
    inst = generate_instance(5, 5, 12, continued_fraction=0.0, seed=3)
    assert inst.continuations == ()


def test_same_seed_byte_identical():
    a = generate_instance(6, 5, 14, continued_fraction=0.4, capacity_tightness=0.8, seed=123)
    b = generate_instance(6, 5, 14, continued_fraction=0.4, capacity_tightness=0.8, seed=123)
    assert emit_instance(a) == emit_instance(b)
    assert a == b
    c = generate_instance(6, 5, 14, continued_fraction=0.4, capacity_tightness=0.8, seed=124)
    assert emit_instance(c) != emit_instance(a)


def test_pair_count_and_airport_matching():
    for p, n in ((0.2, 10), (0.5, 8), (0.8, 5)):
        inst = generate_instance(n, 6, 20, continued_fraction=p, seed=7)
        assert len(inst.continuations) == int(p * n)
        by_id = {f.id: f for f in inst.flights}
        seconds = [nxt for _, nxt in inst.continuations]
        assert len(seconds) == len(set(seconds))  # at most once as continued
        for prev_id, next_id in inst.continuations:
            assert by_id[prev_id].path[-1] == by_id[next_id].path[0]


def test_instances_validate_and_have_windows():
    for seed in range(6):
        inst = generate_instance(5, 6, 14, continued_fraction=0.4, capacity_tightness=0.75, seed=seed)
        assert validate_instance(inst) is inst
        assert all(f.has_complete_windows() for f in inst.flights)


def test_tightness_one_has_free_zero_delay_optimum():
    for seed in (0, 5, 9):
        inst = generate_instance(5, 6, 14, continued_fraction=0.4, capacity_tightness=1.0, seed=seed)
        variables, system = built(inst)
        # the zero-delay point itself is feasible
        point = []
        for fid, j, t in variables.columns:
            f = inst.flight(fid)
            i = f.path.index(j)
            sched = f.scheduled_departure + f.cumulative_transit()[i]
            point.append(1 if t >= sched else 0)
        assert check_point(system, point) == []
        assert system.evaluate_objective(point) == 0
        sol = solve_lp(system)
        assert sol.status == "optimal"
        assert abs(sol.objective) <= 1e-7


def test_tightness_below_one_creates_conflicts():
    from tfmp.decomposition import detect_conflicts, zero_delay_schedule

    conflicted = 0
    for seed in range(10):
        inst = generate_instance(6, 5, 14, continued_fraction=0.2, capacity_tightness=0.5, seed=seed)
        if detect_conflicts(inst, zero_delay_schedule(inst)).evidence:
            conflicted += 1
    assert conflicted >= 5


def test_too_few_sectors_raises():
    with pytest.raises(GenerationError):
        generate_instance(2, 1, 10, seed=0)


def test_hopeless_horizon_raises():
    with pytest.raises(GenerationError):
        generate_instance(3, 5, 1, seed=0)


def test_bad_parameters_rejected():
    with pytest.raises(ValueError):
        generate_instance(0, 5, 10)
    with pytest.raises(ValueError):
        generate_instance(3, 5, 10, continued_fraction=1.5)
    with pytest.raises(ValueError):
        generate_instance(3, 5, 10, capacity_tightness=0.0)
