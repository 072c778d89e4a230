"""Constructive achievability: relay level assignment for integer rate tuples.

Any integer rate tuple inside the capacity region is served by composing
three strategies, greedily and in this order:

1. bi-directional exchange: two users place one bit each on a shared
   relay level, the relay returns the XOR, each side cancels its own bit
   (2 bits per level);
2. cyclic exchange: three one-way streams around a cycle are packed into
   two XOR groups, with one stream repeated by its sender (3 bits per 2
   levels);
3. uni-directional forwarding: plain store-and-forward, the relay may
   permute levels (1 bit per level).

Each stage consumes relay levels and leaves a residual rate tuple plus a
reduced channel formed by the still-free levels.  The free levels are
kept as an explicit ordered list; because every stage consumes levels so
that the remaining ones stay "nested" (the i-th lowest free level is
accessible to user j exactly when i is at most the reduced gain of j),
the reduced channel behaves like a fresh, smaller Y-channel.  The
reduced gains are recomputed from the free-level list and must agree
with the closed-form stage arithmetic; that agreement is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable

from .channel import ChannelConfig
from .errors import (
    InternalInfeasibleError,
    NotInRegionError,
    PlanValidationError,
    PreconditionError,
)
from .region import RateTuple, outer_bound, scaling_factor

BIDIR = "bidir"
CYCLIC = "cyclic"
UNI = "uni"

CYCLE_123 = "1>2>3>1"
CYCLE_132 = "1>3>2>1"

Stream = tuple[int, int]

#: Streams superposed in each XOR group of a cycle, and who must read it.
_CYCLIC_GROUPS: dict[tuple[str, str], tuple[tuple[Stream, Stream], tuple[int, int]]] = {
    (CYCLE_123, "A"): (((1, 2), (2, 3)), (1, 2)),
    (CYCLE_123, "B"): (((2, 3), (3, 1)), (1, 3)),
    (CYCLE_132, "A"): (((1, 3), (2, 1)), (1, 2)),
    (CYCLE_132, "B"): (((1, 3), (3, 2)), (2, 3)),
}


@dataclass(frozen=True)
class StreamAssignment:
    """Relay levels carrying one strategy instance.

    ``streams`` lists the (sender, receiver) pairs whose bits are placed
    on ``uplink_levels``; for bi-directional and cyclic assignments the
    relay echoes on the same level indexes, so ``downlink_levels`` equals
    ``uplink_levels`` there.  Levels are physical and ascending.
    """

    kind: str
    streams: tuple[Stream, ...]
    uplink_levels: tuple[int, ...]
    downlink_levels: tuple[int, ...]
    width: int
    cycle: str | None = None
    role: str | None = None

    def readers(self) -> tuple[int, ...]:
        """Users that must read this assignment's downlink levels."""
        if self.kind == BIDIR:
            return tuple(sorted({j for j, _ in self.streams}))
        if self.kind == UNI:
            return (self.streams[0][1],)
        return _CYCLIC_GROUPS[(self.cycle, self.role)][1]

    def senders(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.streams)


@dataclass(frozen=True)
class StageState:
    """Residual demand plus the reduced channel left by earlier stages."""

    config: ChannelConfig
    residual: RateTuple
    reduced: tuple[int, int, int]
    free_levels: tuple[int, ...]
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    e: int = 0

    def __post_init__(self) -> None:
        if not self.residual.is_integral:
            raise PreconditionError("stage residual must be integral")
        q = self.config.q
        if list(self.free_levels) != sorted(set(self.free_levels)):
            raise PreconditionError("free levels must be ascending and distinct")
        if self.free_levels and not (1 <= self.free_levels[0] and self.free_levels[-1] <= q):
            raise PreconditionError("free levels out of range")
        n1p, n2p, n3p = self.reduced
        if not n1p >= n2p >= n3p >= 0:
            raise PreconditionError(f"reduced gains not ordered: {self.reduced}")
        counts = (
            len(self.free_levels),
            sum(1 for l in self.free_levels if l <= self.config.n2),
            sum(1 for l in self.free_levels if l <= self.config.n3),
        )
        if counts != (n1p, n2p, n3p):
            raise PreconditionError(
                f"reduced gains {self.reduced} disagree with free-level counts {counts}"
            )

    def reduced_gain(self, j: int) -> int:
        return self.reduced[j - 1]

    def physical(self, reduced_levels: Iterable[int]) -> tuple[int, ...]:
        """Map reduced level indexes (1-based, bottom up) to physical levels."""
        return tuple(self.free_levels[i - 1] for i in reduced_levels)


def initial_state(rates: RateTuple, config: ChannelConfig) -> StageState:
    return StageState(
        config=config,
        residual=rates,
        reduced=config.gains(),
        free_levels=tuple(range(1, config.q + 1)),
    )


def bidir_stage(rates: RateTuple, config: ChannelConfig) -> tuple[StageState, tuple[StreamAssignment, ...]]:
    """Serve all bi-directional demand: pair (j,k) exchanges min(Rjk, Rkj) bits.

    Pair 1-2 sits at the top of user 2's window, pairs 1-3 and 2-3 are
    stacked from the bottom where user 3 can reach.  Membership in the
    capacity region guarantees the windows fit and do not overlap.
    """
    rates = RateTuple.make(rates)
    if not rates.is_integral:
        raise PreconditionError("bidirectional stage needs an integer rate tuple")
    region = outer_bound(config)
    if not region.contains(rates):
        raise PreconditionError(
            f"rate tuple {rates.to_strings()} is outside the capacity region; "
            f"violated: {region.violations(rates)}"
        )
    a = int(min(rates.r12, rates.r21))
    b = int(min(rates.r13, rates.r31))
    c = int(min(rates.r23, rates.r32))
    n1, n2, n3 = config.gains()
    if b + c > n3 or a + b + c > n2:
        raise InternalInfeasibleError("bidirectional windows exceed the relay levels")

    assignments = []
    if a:
        levels = tuple(range(n2 - a + 1, n2 + 1))
        assignments.append(StreamAssignment(BIDIR, ((1, 2), (2, 1)), levels, levels, a))
    if b:
        levels = tuple(range(1, b + 1))
        assignments.append(StreamAssignment(BIDIR, ((1, 3), (3, 1)), levels, levels, b))
    if c:
        levels = tuple(range(b + 1, b + c + 1))
        assignments.append(StreamAssignment(BIDIR, ((2, 3), (3, 2)), levels, levels, c))

    used = {l for asg in assignments for l in asg.uplink_levels}
    residual = RateTuple.make(
        rates.r12 - a, rates.r13 - b, rates.r21 - a,
        rates.r23 - c, rates.r31 - b, rates.r32 - c,
    )
    n2p = n2 - a - b - c
    reduced = (n1 - a - b - c, n2p, min(n3 - b - c, n2p))
    free = tuple(l for l in range(1, config.q + 1) if l not in used)
    state = StageState(config, residual, reduced, free, a=a, b=b, c=c)
    return state, tuple(assignments)


def _pair_mins_zero(residual: RateTuple) -> bool:
    return all(
        min(residual.rate(j, k), residual.rate(k, j)) == 0
        for j, k in ((1, 2), (1, 3), (2, 3))
    )


def cyclic_stage(state: StageState) -> tuple[StageState, tuple[StreamAssignment, ...]]:
    """Serve whichever directed 3-cycle survives in the residual.

    The two XOR groups take the top and the bottom of the reduced user-2
    window; the stream shared by both groups is repeated by its sender.
    At most one cycle direction can be active because the residual has no
    bi-directional pair left.
    """
    r = state.residual
    if not _pair_mins_zero(r):
        raise PreconditionError("cyclic stage requires a residual with no bi-directional pair")
    d = int(min(r.r12, r.r23, r.r31))
    e = int(min(r.r13, r.r32, r.r21))
    if d and e:
        raise PreconditionError("both cycle directions active; residual is inconsistent")
    if d == 0 and e == 0:
        return state, ()

    n1p, n2p, n3p = state.reduced
    w = d or e
    if 2 * w > n2p or w > n3p:
        raise InternalInfeasibleError("cyclic stage ran out of reduced levels")

    cycle = CYCLE_123 if d else CYCLE_132
    top = state.physical(range(n2p - w + 1, n2p + 1))
    bottom = state.physical(range(1, w + 1))
    group_a = StreamAssignment(
        CYCLIC, _CYCLIC_GROUPS[(cycle, "A")][0], top, top, w, cycle=cycle, role="A"
    )
    group_b = StreamAssignment(
        CYCLIC, _CYCLIC_GROUPS[(cycle, "B")][0], bottom, bottom, w, cycle=cycle, role="B"
    )

    if d:
        residual = RateTuple.make(r.r12 - d, r.r13, r.r21, r.r23 - d, r.r31 - d, r.r32)
    else:
        residual = RateTuple.make(r.r12, r.r13 - e, r.r21 - e, r.r23, r.r31, r.r32 - e)
    used = set(top) | set(bottom)
    n2pp = n2p - 2 * w
    reduced = (n1p - 2 * w, n2pp, min(n3p - w, n2pp))
    free = tuple(l for l in state.free_levels if l not in used)
    new_state = replace(
        state, residual=residual, reduced=reduced, free_levels=free, d=d, e=e
    )
    return new_state, (group_a, group_b)


def uni_stage(state: StageState) -> tuple[StreamAssignment, ...]:
    """Forward every remaining one-way stream, one bit per level.

    Uplink and downlink are packed independently, bottom up, most
    constrained user first (sender for the uplink, receiver for the
    downlink); the relay map joins the two placements per stream.  The
    accessibility classes are nested, so this greedy packing succeeds
    whenever any packing does.
    """
    r = state.residual
    if not _pair_mins_zero(r):
        raise PreconditionError("uni-directional stage requires a pair-free residual")
    if min(r.r12, r.r23, r.r31) > 0 or min(r.r13, r.r32, r.r21) > 0:
        raise PreconditionError("uni-directional stage requires a cycle-free residual")

    demands = [
        (j, k, int(r.rate(j, k)))
        for (j, k) in ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
        if r.rate(j, k) > 0
    ]
    if not demands:
        return ()

    def pack(keyed: list[tuple[tuple[int, int], int, Stream]], gain_of: dict[Stream, int], side: str):
        placed: dict[Stream, tuple[int, ...]] = {}
        cursor = 0
        for _, width, stream in sorted(keyed):
            top = cursor + width
            if top > gain_of[stream]:
                raise InternalInfeasibleError(
                    f"{side} demand exceeds the reduced window for stream {stream}"
                )
            placed[stream] = state.physical(range(cursor + 1, top + 1))
            cursor = top
        return placed

    uplink = pack(
        [((-j, -k), w, (j, k)) for j, k, w in demands],
        {(j, k): state.reduced_gain(j) for j, k, _ in demands},
        "uplink",
    )
    downlink = pack(
        [((-k, j), w, (j, k)) for j, k, w in demands],
        {(j, k): state.reduced_gain(k) for j, k, _ in demands},
        "downlink",
    )

    return tuple(
        StreamAssignment(UNI, ((j, k),), uplink[(j, k)], downlink[(j, k)], w)
        for j, k, w in demands
    )


def derive_relay_map(assignments: Iterable[StreamAssignment]) -> tuple[tuple[int, int], ...]:
    """Forwarding map: received uplink level -> transmitted downlink level."""
    pairs = []
    for asg in assignments:
        pairs.extend(zip(asg.uplink_levels, asg.downlink_levels))
    return tuple(sorted(pairs))


@dataclass(frozen=True)
class LevelPlan:
    """Complete relay level assignment delivering an integer rate tuple."""

    config: ChannelConfig
    rates: RateTuple
    assignments: tuple[StreamAssignment, ...]
    relay_map: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        """Check every structural invariant; raises PlanValidationError."""
        q = self.config.q
        if not self.rates.is_integral:
            raise PlanValidationError("plan rates must be integral")
        up_seen: set[int] = set()
        down_seen: set[int] = set()
        for asg in self.assignments:
            if asg.kind not in (BIDIR, CYCLIC, UNI):
                raise PlanValidationError(f"unknown assignment kind {asg.kind!r}")
            if asg.width < 1 or len(asg.uplink_levels) != asg.width or len(asg.downlink_levels) != asg.width:
                raise PlanValidationError(f"level lists do not match width in {asg}")
            for levels in (asg.uplink_levels, asg.downlink_levels):
                if list(levels) != sorted(set(levels)) or not all(1 <= l <= q for l in levels):
                    raise PlanValidationError(f"levels not ascending distinct in 1..{q}: {asg}")
            if len(asg.streams) > 2:
                raise PlanValidationError("more than two users superposed on an uplink level")
            if asg.kind == BIDIR:
                if len(asg.streams) != 2 or asg.streams[0] != asg.streams[1][::-1]:
                    raise PlanValidationError(f"bidirectional streams must be opposite: {asg.streams}")
            if asg.kind == UNI and len(asg.streams) != 1:
                raise PlanValidationError("uni-directional assignment carries exactly one stream")
            if asg.kind == CYCLIC:
                if (asg.cycle, asg.role) not in _CYCLIC_GROUPS:
                    raise PlanValidationError(f"unknown cyclic group {asg.cycle}/{asg.role}")
                if asg.streams != _CYCLIC_GROUPS[(asg.cycle, asg.role)][0]:
                    raise PlanValidationError(f"cyclic streams do not match group {asg.role}")
            if asg.kind in (BIDIR, CYCLIC) and asg.uplink_levels != asg.downlink_levels:
                raise PlanValidationError("echoing assignments must reuse the same level indexes")
            if up_seen & set(asg.uplink_levels) or down_seen & set(asg.downlink_levels):
                raise PlanValidationError("assignments overlap on relay levels")
            up_seen |= set(asg.uplink_levels)
            down_seen |= set(asg.downlink_levels)
            for j, _ in asg.streams:
                if asg.uplink_levels and asg.uplink_levels[-1] > self.config.gain(j):
                    raise PlanValidationError(f"uplink level not accessible to sender {j}: {asg}")
            for rdr in asg.readers():
                if asg.downlink_levels and asg.downlink_levels[-1] > self.config.gain(rdr):
                    raise PlanValidationError(f"downlink level not accessible to reader {rdr}: {asg}")
        if self.relay_map != derive_relay_map(self.assignments):
            raise PlanValidationError("relay map does not match the assignments")
        if len({u for u, _ in self.relay_map}) != len(self.relay_map) or len(
            {dn for _, dn in self.relay_map}
        ) != len(self.relay_map):
            raise PlanValidationError("relay map is not injective")
        cyclic = [asg for asg in self.assignments if asg.kind == CYCLIC]
        cycles = {asg.cycle for asg in cyclic}
        for cyc in cycles:
            groups = sorted(asg.role for asg in cyclic if asg.cycle == cyc)
            widths = {asg.width for asg in cyclic if asg.cycle == cyc}
            if groups != ["A", "B"] or len(widths) != 1:
                raise PlanValidationError(f"cycle {cyc} groups are not a matching A/B pair")
        if self.delivered() != self.rates:
            raise PlanValidationError(
                f"assignments deliver {self.delivered()} but plan promises {self.rates}"
            )

    def delivered(self) -> RateTuple:
        """Bits per channel use actually delivered, summed per stream."""
        totals: dict[Stream, int] = {}
        seen_cycles: set[str] = set()
        for asg in self.assignments:
            if asg.kind == BIDIR:
                for j, k in asg.streams:
                    totals[(j, k)] = totals.get((j, k), 0) + asg.width
            elif asg.kind == UNI:
                (j, k), = asg.streams
                totals[(j, k)] = totals.get((j, k), 0) + asg.width
            elif asg.cycle not in seen_cycles:
                seen_cycles.add(asg.cycle)
                for j, k in _cycle_streams(asg.cycle):
                    totals[(j, k)] = totals.get((j, k), 0) + asg.width
        return RateTuple.make(*(totals.get(pair, 0) for pair in
                                ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))))

    def stage_accounting(self) -> dict[str, dict[str, int]]:
        """Relay levels consumed and bits delivered, split by strategy."""
        acct = {kind: {"levels": 0, "bits": 0} for kind in (BIDIR, CYCLIC, UNI)}
        seen_cycles: set[str] = set()
        for asg in self.assignments:
            acct[asg.kind]["levels"] += asg.width
            if asg.kind == BIDIR:
                acct[BIDIR]["bits"] += 2 * asg.width
            elif asg.kind == UNI:
                acct[UNI]["bits"] += asg.width
            elif asg.cycle not in seen_cycles:
                seen_cycles.add(asg.cycle)
                acct[CYCLIC]["bits"] += 3 * asg.width
        return acct

    @cached_property
    def stream_widths(self) -> dict[Stream, int]:
        rates = self.delivered()
        return {
            (j, k): int(rates.rate(j, k))
            for (j, k) in ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
            if rates.rate(j, k) > 0
        }

    @cached_property
    def bit_slices(self) -> dict[tuple[int, Stream], tuple[int, int]]:
        """Which bit range of each stream every assignment carries.

        A stream may be split across stages; slices advance in assignment
        order.  The one stream a cyclic pair repeats is carried by both
        of its groups, so both map to the same slice.
        """
        slices: dict[tuple[int, Stream], tuple[int, int]] = {}
        cursor: dict[Stream, int] = {}
        cycle_slices: dict[tuple[str, Stream], tuple[int, int]] = {}
        for idx, asg in enumerate(self.assignments):
            for stream in asg.streams:
                if asg.kind == CYCLIC:
                    key = (asg.cycle, stream)
                    if key in cycle_slices:
                        slices[(idx, stream)] = cycle_slices[key]
                        continue
                start = cursor.get(stream, 0)
                window = (start, start + asg.width)
                cursor[stream] = start + asg.width
                slices[(idx, stream)] = window
                if asg.kind == CYCLIC:
                    cycle_slices[(asg.cycle, stream)] = window
        return slices


def _cycle_streams(cycle: str) -> tuple[Stream, Stream, Stream]:
    if cycle == CYCLE_123:
        return ((1, 2), (2, 3), (3, 1))
    return ((1, 3), (3, 2), (2, 1))


def build_plan(rates, config: ChannelConfig) -> LevelPlan:
    """Plan relay levels delivering an integer in-region rate tuple.

    Raises NotInRegionError when the tuple is outside the capacity
    region; fractional tuples are rejected (scale them up first, see
    :func:`symbol_extension`).
    """
    rates = RateTuple.make(rates)
    if not rates.is_integral:
        raise PreconditionError(
            "plans are built for integer rate tuples; route fractional points "
            "through symbol_extension first"
        )
    region = outer_bound(config)
    if not region.contains(rates):
        raise NotInRegionError(
            f"rate tuple {rates.to_strings()} is outside the capacity region of "
            f"DYC{config.gains()}",
            violated=region.violations(rates),
        )
    state, bidir_parts = bidir_stage(rates, config)
    state, cyclic_parts = cyclic_stage(state)
    uni_parts = uni_stage(state)
    assignments = bidir_parts + cyclic_parts + uni_parts
    plan = LevelPlan(config, rates, assignments, derive_relay_map(assignments))
    plan.validate()
    return plan


def symbol_extension(rates, config: ChannelConfig) -> tuple[int, RateTuple, ChannelConfig]:
    """Scale a fractional in-region tuple to an equivalent integer instance.

    Operating the channel over Q consecutive uses is the same channel
    with all gains multiplied by Q, so the smallest Q clearing every
    denominator turns a fractional point into an integer one on the
    extended channel.  Membership is preserved exactly under scaling.
    """
    rates = RateTuple.make(rates)
    region = outer_bound(config)
    if not region.contains(rates):
        raise NotInRegionError(
            f"rate tuple {rates.to_strings()} is outside the capacity region of "
            f"DYC{config.gains()}",
            violated=region.violations(rates),
        )
    q_factor = scaling_factor(rates)
    extended = rates.scaled(q_factor)
    extended_config = config.scaled(q_factor)
    if not outer_bound(extended_config).contains(extended):
        raise AssertionError("scaling must preserve membership")
    return q_factor, extended, extended_config
