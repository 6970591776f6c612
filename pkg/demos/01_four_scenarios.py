# Walk through the four bundled scenarios end to end.
#
# Each fixture is a 7-sector, 4-flight network over an 11-period grid.
# The LP relaxation is solved and the per-flight schedule table printed;
# on all four the relaxation comes out integral, so no branching is ever
# needed.

from tfmp import run_scenario, render
from tfmp.data import SCENARIOS, scenario_path

blurbs = {
    "scenario1": "two flights contest one Bangalore arrival slot at t=5",
    "scenario2": "same network, arrival capacity 2: nothing has to move",
    "scenario3": "Go_Co_Ba may run 2 periods early: negative computed cost",
    "scenario4": "Go_Ca is scheduled out before its own aircraft lands",
}

for name in SCENARIOS:
    print("=" * 72)
    print(f"{name}: {blurbs[name]}")
    print("=" * 72)
    report = run_scenario(scenario_path(name), "relax")
    print(render(report, "table"))
    print()
