"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own code paths: the
naive 0/1 filter enumerates raw bit patterns, the vertex oracle solves
square active-set systems, and exact ranks come from sympy, so each
cross-check really is a second route to the same answer.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from tfmp.data import scenario_path
from tfmp.fileio import parse_instance
from tfmp.formulation import GE, LE, ConstraintSystem, Row, RowTag, build_system, build_variables
from tfmp.generator import generate_instance
from tfmp.model import CapacityProfile, Flight, Instance, validate_instance


def load_fixture(name: str) -> Instance:
    return parse_instance(scenario_path(name))


def built(inst: Instance):
    variables = build_variables(inst)
    return variables, build_system(inst, variables)


def make_flight(
    fid="F1",
    path=("A", "B"),
    dep=1,
    arr=2,
    cg=100,
    ca=300,
    transit=None,
    turn=0,
    windows=None,
) -> Flight:
    transit = transit if transit is not None else (1,) * (len(path) - 1)
    return Flight(
        id=fid,
        path=tuple(path),
        scheduled_departure=dep,
        scheduled_arrival=arr,
        ground_cost=Fraction(cg),
        air_cost=Fraction(ca),
        transit_times=tuple(transit),
        turnaround=turn,
        windows=windows,
    )


def toy_system(rows, n, objective=None, bounds=None) -> ConstraintSystem:
    """Hand-build a system from (cols, coefs, sense, rhs) tuples."""
    tagged = tuple(
        Row(tuple(cols), tuple(coefs), sense, rhs, RowTag("Toy", time=i))
        for i, (cols, coefs, sense, rhs) in enumerate(rows)
    )
    objective = objective if objective is not None else [0] * n
    return ConstraintSystem(
        n_columns=n,
        rows=tagged,
        objective=tuple(Fraction(c) for c in objective),
        objective_offset=Fraction(0),
        bounds=tuple(bounds) if bounds is not None else ((0, 1),) * n,
    )


def tiny_instance(seed: int, tightness=0.75, flights=2, sectors=4, horizon=8) -> Instance:
    """A generated instance small enough for exhaustive enumeration."""
    return generate_instance(
        flights,
        sectors,
        horizon,
        continued_fraction=0.5 if flights >= 2 else 0.0,
        capacity_tightness=tightness,
        seed=seed,
        max_ground_hold=1,
        max_air_hold=1,
    )


def naive_points(system: ConstraintSystem):
    """Raw 2^n filter; the independent enumeration oracle."""
    out = []
    lo = [b[0] for b in system.bounds]
    hi = [b[1] for b in system.bounds]
    for bits in itertools.product((0, 1), repeat=system.n_columns):
        if any(v < l or v > h for v, l, h in zip(bits, lo, hi)):
            continue
        ok = True
        for row in system.rows:
            lhs = sum(c * bits[col] for col, c in zip(row.cols, row.coefs))
            ok = lhs <= row.rhs if row.sense == LE else lhs >= row.rhs
            if not ok:
                break
        if ok:
            out.append(tuple(bits))
    return sorted(out)


def vertex_oracle(system: ConstraintSystem):
    """Minimum objective over all basic feasible points, by brute force.

    Candidate vertices come from every n-subset of {rows as equalities,
    bounds as equalities}; each square system is solved and kept when it
    satisfies all rows and bounds.  Exponential, for cross-checks only.
    """
    n = system.n_columns
    cons = []
    for row in system.rows:
        a = np.zeros(n)
        for col, coef in zip(row.cols, row.coefs):
            a[col] = coef
        cons.append((a, float(row.rhs), row.sense))
    eqs = [(a, b) for a, b, _ in cons]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        eqs.append((e.copy(), float(system.bounds[j][0])))
        eqs.append((e.copy(), float(system.bounds[j][1])))

    c = np.array([float(v) for v in system.objective])
    best = None
    for combo in itertools.combinations(range(len(eqs)), n):
        A = np.array([eqs[i][0] for i in combo])
        b = np.array([eqs[i][1] for i in combo])
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        if any(x[j] < system.bounds[j][0] - 1e-9 or x[j] > system.bounds[j][1] + 1e-9 for j in range(n)):
            continue
        feas = True
        for a, rhs, sense in cons:
            v = float(a @ x)
            if sense == LE and v > rhs + 1e-9:
                feas = False
            if sense == GE and v < rhs - 1e-9:
                feas = False
            if not feas:
                break
        if not feas:
            continue
        val = float(c @ x) + float(system.objective_offset)
        if best is None or val < best:
            best = val
    return best


def single_airport_clash(cap=1, cg1=100, cg2=400, hold=2) -> Instance:
    """Two flights due at the same airport at the same time."""
    f1 = make_flight("F1", ("A", "H"), dep=2, arr=3, cg=cg1, ca=cg1 + 200)
    f2 = make_flight("F2", ("B", "H"), dep=2, arr=3, cg=cg2, ca=cg2 + 200)
    arrival = {("H", t): cap for t in range(1, 9)}
    inst = Instance(
        sectors=("A", "B", "H"),
        flights=(f1, f2),
        horizon=8,
        capacities=CapacityProfile(arrival=arrival),
    )
    from tfmp.model import derive_time_windows

    return validate_instance(derive_time_windows(inst, hold))
