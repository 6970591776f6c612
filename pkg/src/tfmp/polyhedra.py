"""Executable polyhedral analysis of tiny 0/1 systems.

Enumerates the feasible 0/1 set S of a constraint system, measures affine
dimensions, classifies which rows define faces and facets of conv(S), and
checks that optimizing random linear objectives over conv(S) and over S
by enumeration always agree, recording how often the plain [0,1]
relaxation agrees as well.

Everything here runs in exact integer and rational arithmetic: rank and
tightness decisions must be certain, never subject to float rounding.
conv(S) is represented only implicitly by its vertex set; no general hull
or facet discovery is attempted beyond testing the rows we were given.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .formulation import ConstraintSystem, GE, LE, Row, RowTag
from . import simplex
from .simplex import solve_lp

#: Hard ceiling on candidate assignments visited by the enumerator.
_WORK_CAP = 2_000_000


class CapExceeded(Exception):
    """System too large for exhaustive enumeration."""


class InvalidInequality(Exception):
    """A system row is violated by a feasible point: a formulation bug."""


class TheoremViolation(AssertionError):
    """Enumeration and conv(S) optimization disagreed; must never happen."""


@dataclass(frozen=True)
class PointSet:
    """All feasible 0/1 points of a system, in a canonical sorted order."""

    dimension: int
    points: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FaceReport:
    """Face data for one row: tight subset, dimensions, facet flag, witnesses."""

    row_index: int
    row_tag: RowTag
    tight_points: tuple[tuple[int, ...], ...]
    face_dim: int
    polytope_dim: int
    is_facet: bool
    witnesses: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class TheoremReport:
    trials: int
    conv_agreements: int
    relaxation_matches: int
    relaxation_strictly_below: int
    tolerance: float


class _RankTracker:
    """Incremental exact rank via row reduction over the rationals."""

    def __init__(self):
        self.echelon: list[list[Fraction]] = []

    def rank(self) -> int:
        return len(self.echelon)

    def add(self, vec) -> bool:
        """Reduce vec against the basis; keep it if independent."""
        v = [Fraction(x) for x in vec]
        for row in self.echelon:
            lead = next((i for i, x in enumerate(row) if x), None)
            if lead is not None and v[lead]:
                factor = v[lead] / row[lead]
                v = [a - factor * b for a, b in zip(v, row)]
        if any(v):
            self.echelon.append(v)
            return True
        return False


def affine_dimension(points) -> int:
    """Dimension of the affine hull: -1 empty, 0 a single point, else the
    exact rank of the differences against the first point."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    tracker = _RankTracker()
    for p in pts[1:]:
        tracker.add([a - b for a, b in zip(p, p0)])
    return tracker.rank()


def _row_holds(row: Row, point) -> bool:
    lhs = sum(c * point[col] for col, c in zip(row.cols, row.coefs))
    return lhs <= row.rhs if row.sense == LE else lhs >= row.rhs


def _monotone_chains(system: ConstraintSystem) -> list[list[int]]:
    """Column chains implied by two-term monotone rows (lower <= higher)."""
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for row in system.rows:
        if row.tag.kind != "Monotone" or len(row.cols) != 2 or row.sense != GE or row.rhs != 0:
            continue
        coef = dict(zip(row.cols, row.coefs))
        highs = [c for c, v in coef.items() if v == 1]
        lows = [c for c, v in coef.items() if v == -1]
        if len(highs) != 1 or len(lows) != 1:
            continue
        lo, hi = lows[0], highs[0]
        if lo in succ or hi in pred:
            continue  # never expected; extra edges are safe to ignore
        succ[lo] = hi
        pred[hi] = lo
    chains = []
    for start in sorted(succ):
        if start in pred:
            continue
        chain = [start]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        chains.append(chain)
    return chains


def enumerate_feasible(system: ConstraintSystem, cap: int = 24) -> PointSet:
    """Exactly the 0/1 points satisfying every row.

    Monotone rows are exploited structurally: each chain of columns linked
    by ``w(t) >= w(t-1)`` can only take prefix-of-zeros patterns, so a
    window of size W contributes W choices rather than 2^(W-1) raw bits.
    Columns outside any chain are enumerated as raw bits.  All rows are
    still checked on every candidate, so the result does not depend on the
    chain detection being complete.
    """
    n = system.n_columns
    if n > cap:
        raise CapExceeded(f"{n} free columns exceed the cap of {cap}")

    chains = _monotone_chains(system)
    chained = {c for chain in chains for c in chain}
    loose = [c for c in range(n) if c not in chained]

    work = 1
    for chain in chains:
        work *= len(chain) + 1
    work <<= len(loose)
    if work > _WORK_CAP:
        raise CapExceeded(f"enumeration would visit {work} assignments")

    # respect pinned bounds so branch-restricted systems enumerate correctly
    lo_bound = [b[0] for b in system.bounds]
    hi_bound = [b[1] for b in system.bounds]

    points = []
    chain_options = [range(len(chain) + 1) for chain in chains]
    loose_options = [range(2)] * len(loose)
    for combo in itertools.product(*chain_options, *loose_options):
        point = [0] * n
        for chain, zeros in zip(chains, combo):
            for i, col in enumerate(chain):
                point[col] = 0 if i < zeros else 1
        for col, bit in zip(loose, combo[len(chains):]):
            point[col] = bit
        if any(v < lo_bound[c] or v > hi_bound[c] for c, v in enumerate(point)):
            continue
        if all(_row_holds(row, point) for row in system.rows):
            points.append(tuple(point))
    return PointSet(n, tuple(sorted(points)))


def classify_faces(system: ConstraintSystem, point_set: PointSet) -> list[FaceReport]:
    """One report per row: validity over S, tight set, dimension, facet flag.

    Witnesses are ``face_dim + 1`` affinely independent tight points,
    selected greedily; an independent rank routine can re-verify them.
    """
    points = point_set.points
    polytope_dim = affine_dimension(points)
    reports = []
    for idx, row in enumerate(system.rows):
        tight = []
        for p in points:
            lhs = sum(c * p[col] for col, c in zip(row.cols, row.coefs))
            ok = lhs <= row.rhs if row.sense == LE else lhs >= row.rhs
            if not ok:
                raise InvalidInequality(
                    f"row {idx} ({row.tag}) is violated by feasible point {p}"
                )
            if lhs == row.rhs:
                tight.append(p)
        face_dim = affine_dimension(tight)
        witnesses: list[tuple[int, ...]] = []
        if tight:
            tracker = _RankTracker()
            witnesses.append(tight[0])
            for p in tight[1:]:
                if len(witnesses) == face_dim + 1:
                    break
                if tracker.add([a - b for a, b in zip(p, tight[0])]):
                    witnesses.append(p)
        reports.append(
            FaceReport(
                row_index=idx,
                row_tag=row.tag,
                tight_points=tuple(tight),
                face_dim=face_dim,
                polytope_dim=polytope_dim,
                is_facet=face_dim == polytope_dim - 1,
                witnesses=tuple(witnesses),
            )
        )
    return reports


def _convex_hull_system(point_set: PointSet) -> ConstraintSystem:
    """LP over convex-combination weights of the points (sum to 1)."""
    k = len(point_set.points)
    ones = tuple(range(k))
    coefs = (1,) * k
    rows = (
        Row(ones, coefs, LE, 1, RowTag("ConvexCombination", time=None)),
        Row(ones, coefs, GE, 1, RowTag("ConvexCombination", time=None)),
    )
    return ConstraintSystem(
        n_columns=k,
        rows=rows,
        objective=(Fraction(0),) * k,
        objective_offset=Fraction(0),
        bounds=((0, 1),) * k,
    )


def verify_main_theorem(
    system: ConstraintSystem,
    point_set: PointSet,
    trials: int = 50,
    seed: int = 0,
    tol: float = 1e-7,
) -> TheoremReport:
    """Random-objective agreement check between S, conv(S) and the relaxation.

    For each trial objective: the enumeration optimum over S must equal
    the LP optimum over conv(S), computed independently as a simplex solve
    over convex-combination weights (disagreement raises, it falsifies the
    reduction of integer optimization to the hull).  The plain relaxation
    optimum is then compared and counted as a match or as strictly below,
    which happens exactly when the rows describe more than conv(S).
    """
    if not point_set.points:
        raise ValueError("the feasible set is empty; nothing to verify")
    rng = random.Random(seed)
    hull = _convex_hull_system(point_set)
    matches = 0
    below = 0
    agreements = 0
    for _ in range(trials):
        c = [rng.randint(-9, 9) for _ in range(system.n_columns)]
        values = [sum(ci * pi for ci, pi in zip(c, p)) for p in point_set.points]
        enum_min = min(values)
        scale = max(1.0, abs(float(enum_min)))

        conv = solve_lp(hull.with_objective(values))
        if conv.status != simplex.OPTIMAL:
            raise TheoremViolation("convex-combination LP must be solvable")
        if abs(conv.objective - enum_min) > tol * scale:
            raise TheoremViolation(
                f"conv(S) optimum {conv.objective} != enumeration optimum {enum_min}"
            )
        agreements += 1

        relax = solve_lp(system.with_objective(c))
        if relax.status != simplex.OPTIMAL:
            raise TheoremViolation("relaxation with bounded columns must be solvable")
        if relax.objective > enum_min + tol * scale:
            raise TheoremViolation(
                f"relaxation optimum {relax.objective} above enumeration optimum {enum_min}"
            )
        if abs(relax.objective - enum_min) <= tol * scale:
            matches += 1
        else:
            below += 1
    return TheoremReport(trials, agreements, matches, below, tol)
