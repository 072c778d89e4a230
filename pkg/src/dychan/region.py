"""Capacity region polytope of the deterministic Y-channel.

Six unicast rates live in the fixed component order

    (R12, R13, R21, R23, R31, R32),

all exact rationals.  The capacity region of a channel with gains
``(n1, n2, n3)`` is the polytope cut out by six triple-rate bounds
(TRB1..TRB6) plus the two user-3 cut-set bounds (CS3a, CS3b):

    TRB1:  R12 + R32 + R13 <= n2        TRB2:  R12 + R32 + R31 <= n1
    TRB3:  R21 + R31 + R32 <= n2        TRB4:  R21 + R31 + R23 <= n2
    TRB5:  R13 + R23 + R12 <= n2        TRB6:  R13 + R23 + R21 <= n1
    CS3a:  R31 + R32 <= n3              CS3b:  R13 + R23 <= n3

The remaining cut-set bounds and all single-rate bounds are implied by
these; ``redundancy_report`` proves that mechanically per configuration
by exact LP.  Everything in this module is exact rational arithmetic,
there are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Iterator, NamedTuple

from . import lp
from .channel import ChannelConfig
from .errors import RateParseError

#: Ordered user pairs matching the rate component order.
PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
PAIR_INDEX = {pair: i for i, pair in enumerate(PAIRS)}

REDUNDANT = "REDUNDANT"
ESSENTIAL = "ESSENTIAL"


class RateTuple(NamedTuple):
    """Six non-negative exact rates, in bits per channel use."""

    r12: Fraction
    r13: Fraction
    r21: Fraction
    r23: Fraction
    r31: Fraction
    r32: Fraction

    @classmethod
    def make(cls, *values) -> "RateTuple":
        if len(values) == 1 and isinstance(values[0], (tuple, list)):
            values = tuple(values[0])
        if len(values) != 6:
            raise RateParseError(f"expected 6 rate components, got {len(values)}")
        rates = []
        for v in values:
            if isinstance(v, float):
                raise RateParseError(
                    f"refusing float rate {v!r}; pass an int, Fraction or 'p/q' string"
                )
            try:
                f = Fraction(v)
            except (ValueError, ZeroDivisionError, TypeError) as exc:
                raise RateParseError(f"cannot parse rate {v!r}: {exc}") from exc
            if f < 0:
                raise RateParseError(f"rates must be non-negative, got {f}")
            rates.append(f)
        return cls(*rates)

    @classmethod
    def zero(cls) -> "RateTuple":
        return cls.make(0, 0, 0, 0, 0, 0)

    def rate(self, j: int, k: int) -> Fraction:
        return self[PAIR_INDEX[(j, k)]]

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self)

    @property
    def total(self) -> Fraction:
        return sum(self, Fraction(0))

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral:
            raise ValueError(f"rate tuple {self} is not integral")
        return tuple(int(v) for v in self)

    def scaled(self, factor: int) -> "RateTuple":
        return RateTuple(*(v * factor for v in self))

    def to_strings(self) -> tuple[str, ...]:
        return tuple(str(v) for v in self)


@dataclass(frozen=True)
class Inequality:
    """One linear constraint ``coeffs . R <= bound`` with a stable label."""

    label: str
    coeffs: tuple[int, int, int, int, int, int]
    bound: int

    def lhs(self, rates: RateTuple) -> Fraction:
        return sum((c * r for c, r in zip(self.coeffs, rates)), Fraction(0))

    def holds(self, rates: RateTuple) -> bool:
        return self.lhs(rates) <= self.bound

    def tight_at(self, rates: RateTuple) -> bool:
        return self.lhs(rates) == self.bound


def _nonneg_constraints() -> tuple[Inequality, ...]:
    out = []
    for i, (j, k) in enumerate(PAIRS):
        coeffs = [0] * 6
        coeffs[i] = -1
        out.append(Inequality(f"NONNEG_{j}{k}", tuple(coeffs), 0))
    return tuple(out)


@dataclass(frozen=True)
class Region:
    """A finite list of labelled inequalities over the six rates."""

    config: ChannelConfig
    inequalities: tuple[Inequality, ...]

    def __post_init__(self) -> None:
        labels = [iq.label for iq in self.inequalities]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate inequality labels in region")
        missing = {f"NONNEG_{j}{k}" for j, k in PAIRS} - set(labels)
        if missing:
            raise ValueError(f"region is missing non-negativity constraints: {missing}")

    @property
    def substantive(self) -> tuple[Inequality, ...]:
        return tuple(iq for iq in self.inequalities if not iq.label.startswith("NONNEG"))

    def by_label(self, label: str) -> Inequality:
        for iq in self.inequalities:
            if iq.label == label:
                return iq
        raise KeyError(label)

    def contains(self, rates: RateTuple) -> bool:
        return all(iq.holds(rates) for iq in self.inequalities)

    def violations(self, rates: RateTuple) -> tuple[str, ...]:
        return tuple(iq.label for iq in self.inequalities if not iq.holds(rates))

    def tight_labels(self, rates: RateTuple) -> tuple[str, ...]:
        return tuple(iq.label for iq in self.inequalities if iq.tight_at(rates))

    def union(self, extra: Iterable[Inequality]) -> "Region":
        """This region plus any new constraints, deduplicated by label."""
        seen = {iq.label for iq in self.inequalities}
        merged = list(self.inequalities)
        for iq in extra:
            if iq.label not in seen:
                merged.append(iq)
                seen.add(iq.label)
        return Region(self.config, tuple(merged))

    def lp_rows(self) -> list[tuple[tuple[int, ...], str, int]]:
        """All constraints in the form consumed by :mod:`dychan.lp`."""
        return [(iq.coeffs, lp.LE, iq.bound) for iq in self.inequalities]


def outer_bound(config: ChannelConfig) -> Region:
    """The capacity region: six triple-rate bounds plus the two CS3 bounds."""
    n1, n2, n3 = config.gains()
    substantive = (
        Inequality("TRB1", (1, 1, 0, 0, 0, 1), n2),
        Inequality("TRB2", (1, 0, 0, 0, 1, 1), n1),
        Inequality("TRB3", (0, 0, 1, 0, 1, 1), n2),
        Inequality("TRB4", (0, 0, 1, 1, 1, 0), n2),
        Inequality("TRB5", (1, 1, 0, 1, 0, 0), n2),
        Inequality("TRB6", (0, 1, 1, 1, 0, 0), n1),
        Inequality("CS3a", (0, 0, 0, 0, 1, 1), n3),
        Inequality("CS3b", (0, 1, 0, 1, 0, 0), n3),
    )
    return Region(config, substantive + _nonneg_constraints())


def cutset_bounds(config: ChannelConfig) -> Region:
    """The six pairwise cut-set bounds plus the six single-rate bounds.

    The pairwise bound for user ``j``'s cut is
    ``min(n_j, max(n_k, n_l))`` on both the outgoing pair (suffix ``a``)
    and the incoming pair (suffix ``b``); single rates are capped by
    ``min(n_j, n_k)``.
    """
    out: list[Inequality] = []
    for j in (1, 2, 3):
        k, l = [u for u in (1, 2, 3) if u != j]
        bound = min(config.gain(j), max(config.gain(k), config.gain(l)))
        coeffs_out = [0] * 6
        coeffs_out[PAIR_INDEX[(j, k)]] = 1
        coeffs_out[PAIR_INDEX[(j, l)]] = 1
        out.append(Inequality(f"CS{j}a", tuple(coeffs_out), bound))
        coeffs_in = [0] * 6
        coeffs_in[PAIR_INDEX[(k, j)]] = 1
        coeffs_in[PAIR_INDEX[(l, j)]] = 1
        out.append(Inequality(f"CS{j}b", tuple(coeffs_in), bound))
    for j, k in PAIRS:
        coeffs = [0] * 6
        coeffs[PAIR_INDEX[(j, k)]] = 1
        out.append(Inequality(f"SINGLE_{j}{k}", tuple(coeffs), min(config.gain(j), config.gain(k))))
    return Region(config, tuple(out) + _nonneg_constraints())


def is_member(rates: RateTuple, region: Region) -> bool:
    """Exact membership test; no floating point is involved anywhere."""
    return region.contains(rates)


@dataclass(frozen=True)
class Vertex:
    """A corner point of a region together with its active constraints."""

    point: RateTuple
    tight: tuple[str, ...]


def _solve_square(rows: list[tuple[int, ...]], rhs: list[int]) -> tuple[Fraction, ...] | None:
    """Solve a 6x6 rational system; None when the matrix is singular."""
    n = len(rows)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


def matrix_rank(rows: Iterable[tuple[int, ...]]) -> int:
    """Rank over the rationals, by exact Gaussian elimination."""
    work = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][col]
        work[rank] = [v / inv for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                f = work[r][col]
                work[r] = [v - f * w for v, w in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def vertices(region: Region) -> tuple[Vertex, ...]:
    """All corner points of the region, exact and duplicate free.

    Every vertex of a bounded 6-dimensional polyhedron is the unique
    solution of six linearly independent constraints at equality, so
    enumerating all 6-subsets of the constraint list is exhaustive.  The
    region has at most 14 constraints, i.e. at most C(14, 6) = 3003 small
    systems, which is well inside desk scale.
    """
    ineqs = region.inequalities
    found: dict[RateTuple, Vertex] = {}
    for subset in combinations(range(len(ineqs)), 6):
        rows = [ineqs[i].coeffs for i in subset]
        rhs = [ineqs[i].bound for i in subset]
        solution = _solve_square(rows, rhs)
        if solution is None:
            continue
        try:
            point = RateTuple.make(*solution)
        except RateParseError:  # negative component: infeasible corner
            continue
        if point in found or not region.contains(point):
            continue
        tight = region.tight_labels(point)
        tight_rows = [region.by_label(lab).coeffs for lab in tight]
        if matrix_rank(tight_rows) != 6:
            raise AssertionError(f"vertex {point} has deficient tight rank")
        found[point] = Vertex(point, tight)
    return tuple(found[p] for p in sorted(found))


def _lattice_points(ineqs: tuple[Inequality, ...]) -> Iterator[tuple[int, ...]]:
    """Integer tuples satisfying all constraints, in lexicographic order.

    Depth-first search over the six coordinates; at each depth the value
    range is capped by every constraint with a positive coefficient on
    the current coordinate, so infeasible prefixes are pruned immediately.
    """
    rows = [(iq.coeffs, iq.bound) for iq in ineqs]
    point = [0] * 6

    def bound_at(depth: int, slacks: list[int]) -> int | None:
        best: int | None = None
        for (coeffs, _), slack in zip(rows, slacks):
            c = coeffs[depth]
            if c > 0:
                cap = slack // c
                if best is None or cap < best:
                    best = cap
        return best

    def rec(depth: int, slacks: list[int]) -> Iterator[tuple[int, ...]]:
        if depth == 6:
            yield tuple(point)
            return
        cap = bound_at(depth, slacks)
        if cap is None:
            raise ValueError("region is unbounded in some coordinate")
        for value in range(cap + 1):
            point[depth] = value
            next_slacks = [
                slack - coeffs[depth] * value
                for (coeffs, _), slack in zip(rows, slacks)
            ]
            yield from rec(depth + 1, next_slacks)
        point[depth] = 0

    yield from rec(0, [b for _, b in rows])


def integer_points(region: Region) -> Iterator[RateTuple]:
    """All integer rate tuples inside the region, duplicate free."""
    for raw in _lattice_points(region.inequalities):
        yield RateTuple.make(*raw)


@dataclass(frozen=True)
class RedundancyEntry:
    inequality: Inequality
    verdict: str
    max_lhs: Fraction


@dataclass(frozen=True)
class RedundancyReport:
    config: ChannelConfig
    entries: tuple[RedundancyEntry, ...]

    def verdict(self, label: str) -> str:
        for entry in self.entries:
            if entry.inequality.label == label:
                return entry.verdict
        raise KeyError(label)

    @property
    def essential_labels(self) -> tuple[str, ...]:
        return tuple(e.inequality.label for e in self.entries if e.verdict == ESSENTIAL)


def redundancy_report(config: ChannelConfig) -> RedundancyReport:
    """Decide, by exact LP, which cut-set and single-rate bounds matter.

    A candidate is REDUNDANT when its left-hand side cannot exceed its
    bound anywhere in the capacity region with the candidate itself
    removed, ESSENTIAL otherwise.  The search is an exact rational LP,
    not a symbolic implication chain.
    """
    region = outer_bound(config)
    entries = []
    for candidate in cutset_bounds(config).substantive:
        rest = [iq for iq in region.inequalities if iq.label != candidate.label]
        res = lp.maximize(candidate.coeffs, [(iq.coeffs, lp.LE, iq.bound) for iq in rest])
        if not res.is_optimal:
            raise AssertionError(f"LP for {candidate.label} returned {res.status}")
        verdict = REDUNDANT if res.value <= candidate.bound else ESSENTIAL
        entries.append(RedundancyEntry(candidate, verdict, res.value))
    return RedundancyReport(config, tuple(entries))


def scaling_factor(rates: RateTuple) -> int:
    """Smallest positive integer Q with all components of Q * rates integral."""
    return lcm(*(v.denominator for v in rates))
