"""Command-line interface.

Verbs map one-to-one onto the library's capabilities: ``solve`` runs an
instance file in relax, exact or decompose mode; ``analyze`` runs the
polyhedral lab on a tiny instance; ``gen`` writes a random instance file;
``experiment`` runs an integrality-frequency batch.  Exit codes: 0
success, 1 infeasible (no schedule produced), 2 input error, 3 internal
limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from .branch_bound import NodeLimit
from .decomposition import InfeasibleSubproblem, NonConvergence
from .experiment import run_experiment
from .fileio import ParseError, parse_instance, write_instance
from .formulation import FractionalSolution, InfeasibleConstruction
from .generator import GenerationError, generate_instance
from .model import ValidationError, WindowError
from .polyhedra import CapExceeded, classify_faces, enumerate_feasible, verify_main_theorem
from .reporting import InfeasibleInstance, SolveOptions, prepare, render, run_scenario
from .simplex import CycleLimit

_INPUT_ERRORS = (ParseError, ValidationError, WindowError, FileNotFoundError,
                 IsADirectoryError, GenerationError, ValueError)
_INFEASIBLE_ERRORS = (InfeasibleInstance, InfeasibleConstruction, InfeasibleSubproblem,
                      FractionalSolution)
_LIMIT_ERRORS = (CycleLimit, NodeLimit, CapExceeded, NonConvergence)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfmp",
        description="Traffic flow management optimization toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_window_opts(p):
        p.add_argument("--max-ground-hold", type=int, default=4,
                       help="window slack for ground holding when the file has no [windows]")
        p.add_argument("--max-air-hold", type=int, default=2)
        p.add_argument("--allow-early", type=int, default=0,
                       help="periods a flight may run ahead of schedule")

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("file")
    mode = p_solve.add_mutually_exclusive_group()
    mode.add_argument("--relax", dest="mode", action="store_const", const="relax")
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--decompose", dest="mode", action="store_const", const="decompose")
    p_solve.set_defaults(mode="relax")
    p_solve.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")
    p_solve.add_argument("--node-limit", type=int, default=1_000_000)
    p_solve.add_argument("--compare-full", action="store_true",
                         help="decompose mode: also solve the full instance for comparison")
    add_window_opts(p_solve)

    p_an = sub.add_parser("analyze", help="polyhedral analysis of a tiny instance")
    p_an.add_argument("file")
    p_an.add_argument("--cap", type=int, default=24,
                      help="refuse to enumerate above this many free columns")
    p_an.add_argument("--trials", type=int, default=50)
    p_an.add_argument("--seed", type=int, default=0)
    add_window_opts(p_an)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--output", "-o", required=True)
    p_gen.add_argument("--flights", type=int, required=True)
    p_gen.add_argument("--sectors", type=int, required=True)
    p_gen.add_argument("--horizon", type=int, required=True)
    p_gen.add_argument("--continued-fraction", type=float, default=0.0)
    p_gen.add_argument("--capacity-tightness", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)

    p_exp = sub.add_parser("experiment", help="integrality-frequency batch run")
    p_exp.add_argument("--count", type=int, required=True)
    p_exp.add_argument("--flights", type=int, default=5)
    p_exp.add_argument("--sectors", type=int, default=6)
    p_exp.add_argument("--horizon", type=int, default=14)
    p_exp.add_argument("--continued-fraction", type=float, default=0.4)
    p_exp.add_argument("--capacity-tightness", type=float, default=0.75)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")

    return parser


def _cmd_solve(args) -> int:
    options = SolveOptions(
        max_ground_hold=args.max_ground_hold,
        max_air_hold=args.max_air_hold,
        allow_early=args.allow_early,
        node_limit=args.node_limit,
        compare_full=args.compare_full,
    )
    report = run_scenario(args.file, args.mode, options)
    print(render(report, args.format))
    if args.format != "table":
        beta = float(report.objective_beta)
        print(f"objective={beta:g} elapsed={report.elapsed_seconds:.4f}s", file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    inst = parse_instance(args.file)
    options = SolveOptions(
        max_ground_hold=args.max_ground_hold,
        max_air_hold=args.max_air_hold,
        allow_early=args.allow_early,
    )
    inst, variables, system = prepare(inst, options)
    points = enumerate_feasible(system, cap=args.cap)
    print(f"free columns        {system.n_columns}")
    print(f"rows                {len(system.rows)}")
    print(f"feasible 0/1 points {len(points)}")
    reports = classify_faces(system, points)
    pdim = reports[0].polytope_dim if reports else -1
    print(f"dim conv(S)         {pdim}")
    facets = [r for r in reports if r.is_facet]
    print(f"facet rows          {len(facets)} of {len(reports)}")
    for r in reports:
        mark = "facet" if r.is_facet else f"face dim {r.face_dim}"
        print(f"  [{r.row_index:3d}] {str(r.row_tag):32s} tight={len(r.tight_points):4d}  {mark}")
    theorem = verify_main_theorem(system, points, trials=args.trials, seed=args.seed)
    print(
        f"objective trials    {theorem.trials} (seed={args.seed}): "
        f"conv(S) agreement {theorem.conv_agreements}, "
        f"relaxation matches {theorem.relaxation_matches}, "
        f"strictly below {theorem.relaxation_strictly_below}"
    )
    return 0


def _cmd_gen(args) -> int:
    inst = generate_instance(
        args.flights, args.sectors, args.horizon,
        continued_fraction=args.continued_fraction,
        capacity_tightness=args.capacity_tightness,
        seed=args.seed,
    )
    header = (
        f"generated instance: flights={args.flights} sectors={args.sectors} "
        f"horizon={args.horizon} continued_fraction={args.continued_fraction} "
        f"capacity_tightness={args.capacity_tightness} seed={args.seed}"
    )
    write_instance(inst, args.output, header=header)
    print(f"wrote {args.output} (seed={args.seed})")
    return 0


def _cmd_experiment(args) -> int:
    stats = run_experiment(
        args.count,
        flights=args.flights,
        sectors=args.sectors,
        horizon=args.horizon,
        continued_fraction=args.continued_fraction,
        capacity_tightness=args.capacity_tightness,
        seed=args.seed,
    )
    record = {
        "instances": stats.instances,
        "integral_lp": stats.integral_lp,
        "fractional_lp": stats.fractional_lp,
        "infeasible": stats.infeasible,
        "mean_objective_gap": stats.mean_objective_gap,
        "seed": stats.seed,
        **{f"param_{k}": v for k, v in sorted(stats.params.items())},
    }
    if args.format == "json-lines":
        print(json.dumps(record, sort_keys=True))
    elif args.format == "csv":
        keys = sorted(record)
        print(",".join(keys))
        print(",".join(str(record[k]) for k in keys))
    else:
        print(stats.summary())
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "analyze": _cmd_analyze,
        "gen": _cmd_gen,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except _LIMIT_ERRORS as exc:
        print(f"tfmp: limit: {exc}", file=sys.stderr)
        return 3
    except _INFEASIBLE_ERRORS as exc:
        print(f"tfmp: no schedule: {exc}", file=sys.stderr)
        if isinstance(exc, FractionalSolution):
            print("tfmp: the relaxation optimum is fractional; rerun with --exact", file=sys.stderr)
        return 1
    except _INPUT_ERRORS as exc:
        print(f"tfmp: input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
