"""Acceptance suite: one test per primary criterion, each printing a
pass line (visible with ``pytest -s``).  Tolerances are pinned here and
nowhere else: exact integer equality where the data are integral, 1e-7
for floating LP comparisons, wall-clock ceilings where stated.
"""

import time
from fractions import Fraction

import pytest
import sympy

from conftest import built, load_fixture
from tfmp.branch_bound import solve_ip
from tfmp.data import scenario_path
from tfmp.decomposition import detect_conflicts, iterative_solve
from tfmp.experiment import run_experiment
from tfmp.fileio import parse_instance
from tfmp.formulation import build_variables
from tfmp.generator import generate_instance
from tfmp.polyhedra import classify_faces, enumerate_feasible, verify_main_theorem
from tfmp.reporting import run_scenario
from tfmp.simplex import is_integral, solve_lp

LP_TOL = 1e-7


def _ok(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def _rows(report):
    return {
        s.flight: (s.dep_sched, s.dep_actual, s.arr_sched, s.arr_actual,
                   s.ground_delay, s.air_delay)
        for s in report.schedules
    }


def test_c01_conflicting_arrivals_golden():
    start = time.perf_counter()
    report = run_scenario(scenario_path("scenario1"), "relax")
    elapsed = time.perf_counter() - start
    assert report.integral is True
    assert report.objective_beta == Fraction(800)
    assert _rows(report) == {
        "Mu_Pu_Go": (1, 1, 3, 3, 0, 0),
        "Go_Ca": (4, 4, 5, 5, 0, 0),
        "Pu_Be_Ba": (3, 4, 5, 6, 1, 0),
        "Go_Co_Ba": (3, 3, 5, 5, 0, 0),
    }
    assert elapsed < 1.0
    _ok("C01 conflicting-arrivals golden (objective 800, one ground hold)")


def test_c02_baseline_golden():
    report = run_scenario(scenario_path("scenario2"), "relax")
    assert report.integral is True
    assert report.objective_beta == Fraction(0)
    for s in report.schedules:
        assert s.ground_delay == 0 and s.air_delay == 0
        assert s.dep_actual == s.dep_sched and s.arr_actual == s.arr_sched
    _ok("C02 baseline golden (zero cost, zero delays)")


def test_c03_early_departure_golden():
    report = run_scenario(scenario_path("scenario3"), "relax")
    assert report.integral is True
    by_id = {s.flight: s for s in report.schedules}
    early = by_id["Go_Co_Ba"]
    assert (early.dep_sched, early.dep_actual) == (3, 1)
    assert early.ground_delay == -2
    assert early.air_delay == 0
    assert early.cost_beta < 0
    assert early.cost_alpha == Fraction(0)  # the alpha column clamps at zero
    for other in ("Mu_Pu_Go", "Go_Ca", "Pu_Be_Ba"):
        assert by_id[other].ground_delay == 0 and by_id[other].air_delay == 0
    assert report.objective_alpha == Fraction(0)
    _ok("C03 early-departure golden (ground delay -2, clamped real cost 0)")


def test_c04_turnaround_golden():
    report = run_scenario(scenario_path("scenario4"), "relax")
    assert report.integral is True
    assert _rows(report)["Go_Ca"] == (2, 4, 4, 6, 2, 0)
    for fid, row in _rows(report).items():
        if fid != "Go_Ca":
            assert row[4] == 0 and row[5] == 0
    assert report.objective_beta == Fraction(1400)
    _ok("C04 turnaround golden (Go_Ca held 2 periods)")


@pytest.fixture(scope="module")
def oracle_corpus():
    """Generated systems small enough for exhaustive 0/1 enumeration."""
    records = []
    seed = 0
    while len(records) < 205 and seed < 3000:
        tightness = (0.5, 0.75, 1.0)[seed % 3]
        flights = 2 + seed % 2
        inst = generate_instance(
            flights, 4, 8,
            continued_fraction=0.5,
            capacity_tightness=tightness,
            seed=seed,
            max_ground_hold=1,
            max_air_hold=seed % 2,
        )
        seed += 1
        variables = build_variables(inst)
        if not 1 <= len(variables) <= 20:
            continue
        _, system = built(inst)
        points = enumerate_feasible(system, cap=20)
        lp = solve_lp(system)
        ip = solve_ip(system)
        records.append((system, points, lp, ip))
    return records


def test_c05_branch_bound_matches_enumeration(oracle_corpus):
    checked = 0
    for system, points, _lp, ip in oracle_corpus:
        if not points.points:
            assert ip.status == "infeasible"
        else:
            best = min(system.evaluate_objective(p) for p in points.points)
            assert ip.status == "optimal"
            assert ip.objective == best  # exact equality, integer data
        checked += 1
    assert checked >= 200
    _ok(f"C05 oracle equivalence on {checked} instances (<= 20 columns, exact)")


def test_c06_relaxation_bounds_integer_optimum(oracle_corpus):
    solved = 0
    for name in ("scenario1", "scenario2", "scenario3", "scenario4"):
        _, system = built(load_fixture(name))
        lp, ip = solve_lp(system), solve_ip(system)
        assert lp.objective <= float(ip.objective) + LP_TOL
        assert abs(lp.objective - float(ip.objective)) <= LP_TOL  # all four are integral
        solved += 1
    for _system, _points, lp, ip in oracle_corpus:
        if lp.status != "optimal":
            assert ip.status == "infeasible"
            continue
        assert ip.status == "optimal"
        assert lp.objective <= float(ip.objective) + LP_TOL
        integral, _, _ = is_integral(lp)
        if integral:
            assert abs(lp.objective - float(ip.objective)) <= LP_TOL
        solved += 1
    _ok(f"C06 relaxation bound holds on {solved} solved instances")


def test_c07_hull_theorem_suite(oracle_corpus):
    verified = 0
    for i, (system, points, _lp, _ip) in enumerate(oracle_corpus):
        if not points.points or system.n_columns > 14 or len(points.points) > 1500:
            continue
        report = verify_main_theorem(system, points, trials=50, seed=1000 + i)
        assert report.conv_agreements == 50  # disagreement raises inside
        assert report.relaxation_matches + report.relaxation_strictly_below == 50
        verified += 1
        if verified >= 20:
            break
    assert verified >= 20
    _ok(f"C07 hull-vs-enumeration agreement 100% on {verified} instances x 50 objectives")


def test_c08_facet_witnesses_independently_verified(oracle_corpus):
    def sympy_rank_of_diffs(points):
        pts = [sympy.Matrix(list(p)) for p in points]
        if len(pts) <= 1:
            return 0
        return sympy.Matrix.hstack(*[p - pts[0] for p in pts[1:]]).rank()

    facets = 0
    instances = 0
    for system, points, _lp, _ip in oracle_corpus:
        if not points.points or system.n_columns > 12:
            continue
        for report in classify_faces(system, points):
            if not report.is_facet:
                continue
            facets += 1
            assert len(report.witnesses) == report.face_dim + 1
            assert sympy_rank_of_diffs(report.witnesses) == report.face_dim
            for w in report.witnesses:
                assert w in report.tight_points
        instances += 1
        if instances >= 8:
            break
    assert instances >= 8
    assert facets > 0
    _ok(f"C08 all {facets} facet reports carry affinely independent witnesses")


def test_c09_integrality_frequency_experiment():
    start = time.perf_counter()
    grid = [(c, p) for c in (0.5, 0.75, 1.0) for p in (0.2, 0.8)]
    counts = [84, 84, 83, 83, 83, 83]
    assert sum(counts) == 500
    total = integral = fractional = infeasible = 0
    for i, ((c, p), count) in enumerate(zip(grid, counts)):
        stats = run_experiment(
            count, flights=5, sectors=6, horizon=14,
            continued_fraction=p, capacity_tightness=c, seed=7000 + i,
        )
        assert stats.integral_lp + stats.fractional_lp + stats.infeasible == count
        total += stats.instances
        integral += stats.integral_lp
        fractional += stats.fractional_lp
        infeasible += stats.infeasible
        print(f"  tightness={c} continued={p}: {stats.summary()}")
    elapsed = time.perf_counter() - start
    assert total == 500
    assert integral + fractional + infeasible == 500
    frac = integral / total
    print(f"  overall integral fraction {frac:.3f} across 500 instances")
    print("  comparison: the arrive-by formulation is reputed to solve integrally "
          "in practice; desk-scale conflict dials reproduce a high integral share")
    assert elapsed < 300.0
    _ok(f"C09 experiment classified 500/500 in {elapsed:.1f}s, integral fraction {frac:.3f}")


def test_c10_performance_floor_and_variable_tally():
    inst = parse_instance(scenario_path("scenario1"))
    # independent closed-form tally straight from the fixture windows
    tally = sum(hi - lo for f in inst.flights for (lo, hi) in f.windows)
    variables, system = built(inst)
    assert len(variables.columns) == tally
    start = time.perf_counter()
    sol = solve_lp(system)
    elapsed = time.perf_counter() - start
    assert sol.status == "optimal"
    assert elapsed < 1.0
    _ok(f"C10 baseline relaxation in {elapsed * 1000:.1f} ms, {tally} free columns")


def _trajectory_point(inst, variables, schedules):
    """Arrive-by 0/1 point encoding fixed trajectories, or None if some
    time falls outside its window (then the point is not representable)."""
    times = {}
    for s in schedules:
        f = inst.flight(s.flight)
        for i, j in enumerate(f.path):
            lo, hi = f.window(i)
            if not lo <= s.sector_times[i] <= hi:
                return None
            times[(s.flight, j)] = s.sector_times[i]
    return [1 if t >= times[(fid, j)] else 0 for fid, j, t in variables.columns]


def _fully_verified(inst, schedules):
    from tfmp.formulation import build_system, check_point

    if detect_conflicts(inst, list(schedules)).evidence != ():
        return False
    variables = build_variables(inst)
    system = build_system(inst, variables)
    point = _trajectory_point(inst, variables, schedules)
    return point is not None and check_point(system, point) == []


def test_c11_decomposition_soundness():
    for name in ("scenario1", "scenario2", "scenario4"):
        inst = load_fixture(name)
        trace = iterative_solve(inst, compare_full=True)
        assert trace.converged
        assert _fully_verified(inst, trace.final_schedule)
        if name == "scenario1":
            total = sum(s.cost_beta for s in trace.final_schedule)
            assert total == Fraction(800) == trace.full_objective

    verified = 0
    seed = 0
    while verified < 50:
        inst = generate_instance(
            4, 5, 12, continued_fraction=0.5, capacity_tightness=0.6, seed=40_000 + seed,
        )
        seed += 1
        trace = iterative_solve(inst)
        assert trace.converged
        assert _fully_verified(inst, trace.final_schedule)
        verified += 1
    _ok(f"C11 decomposition schedules re-verified on 3 fixtures + {verified} generated")
