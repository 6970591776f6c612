"""Traffic flow management optimization toolkit.

Build the time-indexed arrive-by 0/1 formulation of a flight scheduling
instance, solve its LP relaxation with a bounded-variable simplex, fall
back to branch and bound when the relaxation is fractional, inspect the
underlying 0/1 polytope at desk scale, and run the iterative conflict-set
decomposition.
"""

from .model import (
    UNBOUNDED,
    CapacityProfile,
    Flight,
    Instance,
    ValidationError,
    WindowError,
    derive_time_windows,
    validate_instance,
)
from .formulation import (
    ConstraintSystem,
    FlightSchedule,
    FractionalSolution,
    InfeasibleConstruction,
    Row,
    RowTag,
    VariableMap,
    build_system,
    build_variables,
    check_point,
    extract_schedule,
    total_alpha,
    total_beta,
)
from .simplex import CycleLimit, LpSolution, is_integral, solve_lp
from .branch_bound import IpSolution, NodeLimit, solve_ip
from .polyhedra import (
    CapExceeded,
    FaceReport,
    InvalidInequality,
    PointSet,
    TheoremReport,
    TheoremViolation,
    affine_dimension,
    classify_faces,
    enumerate_feasible,
    verify_main_theorem,
)
from .decomposition import (
    ConflictEvidence,
    ConflictSet,
    DecompositionTrace,
    InfeasibleSubproblem,
    NonConvergence,
    detect_conflicts,
    iterative_solve,
    zero_delay_schedule,
)
from .fileio import ParseError, emit_instance, parse_instance, write_instance
from .generator import GenerationError, generate_instance
from .experiment import ExperimentStats, run_experiment
from .reporting import (
    InfeasibleInstance,
    ScenarioReport,
    SolveOptions,
    prepare,
    render,
    run_scenario,
)

__version__ = "0.1.0"
