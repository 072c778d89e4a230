"""Independent brute-force cross-checks for region and scheme results.

Everything here deliberately re-derives its answers from first
principles (exact LP feasibility, rank computations, exhaustive message
scans) instead of reusing the code paths it is meant to check; the only
shared ingredients are the plain data types.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .channel import ChannelConfig
from .errors import NotInRegionError
from .region import (
    Inequality,
    RateTuple,
    Region,
    Vertex,
    integer_points,
    matrix_rank,
    outer_bound,
)
from .scheme import build_plan
from .simulator import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    DEFAULT_TRIALS,
    auto_mode,
    verify_plan,
)


def lp_feasible(inequalities: Sequence[Inequality], objective: Sequence) -> lp.LpResult:
    """Exact optimum of a linear objective over labelled constraints.

    Thin entry point over the rational simplex; INFEASIBLE and UNBOUNDED
    come back as distinguished result statuses, never as exceptions.
    """
    rows = [(iq.coeffs, lp.LE, iq.bound) for iq in inequalities]
    return lp.solve_lp(objective, rows, maximize=True)


def in_convex_hull(point: RateTuple, vertex_points: Sequence[RateTuple]) -> bool:
    """Whether ``point`` is a convex combination of the given vertices.

    Solved as an exact LP feasibility problem over the combination
    weights; completely independent of the inequality description.
    """
    nvars = len(vertex_points)
    if nvars == 0:
        return False
    rows = []
    for coord in range(6):
        coeffs = [v[coord] for v in vertex_points]
        rows.append((coeffs, lp.EQ, point[coord]))
    rows.append(([1] * nvars, lp.EQ, 1))
    return lp.feasible(rows, nvars)


def sample_rational_tuples(config: ChannelConfig, count: int, seed: int) -> list[RateTuple]:
    """Seeded rational sample straddling the region boundary.

    Components are drawn with small denominators in ``[0, n1 + 1]`` so
    that both members and non-members occur for every non-trivial
    configuration.
    """
    rng = random.Random(seed)
    span = 2 * (config.n1 + 1)
    out = []
    for _ in range(count):
        values = []
        for _ in range(6):
            den = rng.randint(1, 4)
            num = rng.randint(0, span * den // 2)
            values.append(Fraction(num, den))
        out.append(RateTuple.make(*values))
    return out


@dataclass(frozen=True)
class VertexCheck:
    point: RateTuple
    feasible: bool
    tight_rank: int

    @property
    def is_vertex(self) -> bool:
        return self.feasible and self.tight_rank == 6


@dataclass(frozen=True)
class VertexValidationReport:
    config: ChannelConfig
    checks: tuple[VertexCheck, ...]
    hull_samples: int
    hull_disagreements: int

    @property
    def passed(self) -> bool:
        return all(c.is_vertex for c in self.checks) and self.hull_disagreements == 0


def vertex_validate(
    region: Region,
    points: Iterable[Vertex | RateTuple],
    *,
    hull_vertices: Sequence[RateTuple] | None = None,
    samples: int = 200,
    seed: int = 7,
) -> VertexValidationReport:
    """Check claimed vertices and cross-check membership against the hull.

    Each point is re-tested for feasibility and for having six linearly
    independent constraints active.  Additionally a seeded sample of
    rational tuples must agree between direct inequality membership and
    exact-LP membership in the convex hull of ``hull_vertices``.
    """
    checks = []
    for entry in points:
        point = entry.point if isinstance(entry, Vertex) else entry
        feasible = region.contains(point)
        tight_rows = [region.by_label(lab).coeffs for lab in region.tight_labels(point)]
        rank = matrix_rank(tight_rows) if tight_rows else 0
        checks.append(VertexCheck(point, feasible, rank))

    disagreements = 0
    n_samples = 0
    if hull_vertices is not None:
        for rates in sample_rational_tuples(region.config, samples, seed):
            n_samples += 1
            direct = region.contains(rates)
            hull = in_convex_hull(rates, hull_vertices)
            if direct != hull:
                disagreements += 1
    return VertexValidationReport(region.config, tuple(checks), n_samples, disagreements)


@dataclass(frozen=True)
class ScanLimits:
    """Effort knobs for the achievability scan."""

    seed: int = 0
    probes: int = 25
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT
    random_trials: int = DEFAULT_TRIALS
    point_sample: int | None = None  # None: every integer point


@dataclass(frozen=True)
class ScanViolation:
    rates: RateTuple
    problem: str


@dataclass(frozen=True)
class ScanReport:
    config: ChannelConfig
    points_checked: int
    trials_run: int
    probes_tried: int
    probes_rejected: int
    violations: tuple[ScanViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations and self.probes_rejected == self.probes_tried


def out_of_bound_probes(config: ChannelConfig, count: int, seed: int,
                        members: Sequence[RateTuple] | None = None) -> list[RateTuple]:
    """Integer tuples sitting exactly one unit beyond a region constraint.

    Each probe starts from a random integer member, picks a substantive
    inequality and pushes one of its coordinates until the inequality is
    exceeded by exactly one unit.
    """
    region = outer_bound(config)
    if members is None:
        members = list(integer_points(region))
    rng = random.Random(seed)
    substantive = region.substantive
    probes = []
    while len(probes) < count:
        base = members[rng.randrange(len(members))]
        ineq = substantive[rng.randrange(len(substantive))]
        coords = [i for i, c in enumerate(ineq.coeffs) if c > 0]
        coord = coords[rng.randrange(len(coords))]
        slack = ineq.bound - ineq.lhs(base)
        bumped = list(base)
        bumped[coord] += slack + 1
        probes.append(RateTuple.make(*bumped))
    return probes


def achievability_scan(config: ChannelConfig, limits: ScanLimits = ScanLimits()) -> ScanReport:
    """Plan and simulate every integer point of the capacity region.

    For each point the plan must build, satisfy its invariants and
    survive end-to-end simulation with zero decode failures; seeded
    integer probes one unit outside the region must all be rejected
    with NotInRegionError.
    """
    region = outer_bound(config)
    points = list(integer_points(region))
    if limits.point_sample is not None and limits.point_sample < len(points):
        rng = random.Random(limits.seed)
        points = rng.sample(points, limits.point_sample)

    violations: list[ScanViolation] = []
    trials = 0
    for rates in points:
        try:
            plan = build_plan(rates, config)
        except Exception as exc:  # noqa: BLE001 - recorded, not raised
            violations.append(ScanViolation(rates, f"planning failed: {exc!r}"))
            continue
        acct = plan.stage_accounting()
        if (
            acct["bidir"]["bits"] != 2 * acct["bidir"]["levels"]
            or 2 * acct["cyclic"]["bits"] != 3 * acct["cyclic"]["levels"]
            or acct["uni"]["bits"] != acct["uni"]["levels"]
        ):
            violations.append(ScanViolation(rates, f"stage accounting off: {acct}"))
            continue
        mode = auto_mode(plan, limit=limits.exhaustive_limit,
                         seed=limits.seed, trials=limits.random_trials)
        report = verify_plan(plan, mode)
        trials += report.trials
        if not report.passed:
            violations.append(
                ScanViolation(rates, f"{report.failures} decode failures in {report.trials} trials")
            )

    rejected = 0
    probes = out_of_bound_probes(config, limits.probes, limits.seed, members=points or None)
    for probe in probes:
        try:
            build_plan(probe, config)
        except NotInRegionError:
            rejected += 1
        except Exception as exc:  # noqa: BLE001
            violations.append(ScanViolation(probe, f"probe raised {exc!r} instead of NotInRegionError"))
    return ScanReport(
        config=config,
        points_checked=len(points),
        trials_run=trials,
        probes_tried=len(probes),
        probes_rejected=rejected,
        violations=tuple(violations),
    )
