# How an instance becomes a 0/1 linear program.
#
# A single two-leg flight is enough to see every moving part: arrive-by
# columns per (sector, time), the eliminated last-window variable, the
# transit and monotonicity rows, and the telescoped delay-cost objective.

from fractions import Fraction

from tfmp import (
    Flight, Instance, build_system, build_variables, derive_time_windows,
    extract_schedule, solve_lp, validate_instance,
)

flight = Flight(
    id="DEMO",
    path=("Origin", "Enroute", "Destination"),
    scheduled_departure=2,
    scheduled_arrival=4,
    ground_cost=Fraction(100),
    air_cost=Fraction(250),
    transit_times=(1, 1),
)
inst = Instance(sectors=flight.path, flights=(flight,), horizon=8)
inst = validate_instance(derive_time_windows(inst, max_ground_hold=2))

print("windows per path sector:")
for sector, window in zip(flight.path, inst.flights[0].windows):
    print(f"  {sector:12s} arrive by {window[0]}..{window[1]}")

variables = build_variables(inst)
print(f"\nfree columns ({len(variables.columns)}):")
for i, (fid, sector, t) in enumerate(variables.columns):
    print(f"  x{i}: {fid} has reached {sector} by t={t}")
print("eliminated (pinned to 1):", sorted(variables.fixed))

system = build_system(inst, variables)
print(f"\nrows ({len(system.rows)}):")
for row in system.rows:
    terms = " + ".join(f"{c:+d}*x{col}" for col, c in zip(row.cols, row.coefs))
    print(f"  {str(row.tag):28s} {terms} {row.sense} {row.rhs}")

print("\nobjective coefficients (air minus ground on departure columns,")
print("minus air on arrival columns, constant folded into the offset):")
print(" ", [str(c) for c in system.objective], "offset", system.objective_offset)

sol = solve_lp(system)
schedule = extract_schedule(inst, variables, sol.values, expected_objective=sol.objective)[0]
print(f"\nrelaxation optimum {sol.objective}: departs {schedule.dep_actual}, "
      f"arrives {schedule.arr_actual}, cost {schedule.cost_beta}")
