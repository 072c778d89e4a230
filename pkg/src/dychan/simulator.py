"""Bit-exact end-to-end execution of level plans over the channel.

One trial is one channel use: every user encodes its message bits onto
its assigned uplink levels, the relay XOR-superposes what it hears,
re-emits each received level on the mapped downlink level, and every
user decodes its incoming streams from what it can observe, cancelling
its own known bits.  A cyclic pair of XOR groups is resolved in
dependency order (own stream first, then propagate); the chains the
planner produces have depth at most two.

Verification replays the full pipeline either over every possible
message set (exhaustive) or over seeded random draws, and reports the
exact number of decoding failures; a plan passes only with zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .channel import ChannelConfig, Signal, downlink_receive, uplink_receive
from .errors import UnresolvableChainError
from .region import PAIRS, RateTuple
from .scheme import BIDIR, UNI, LevelPlan, Stream, StreamAssignment

DEFAULT_EXHAUSTIVE_LIMIT = 12  # total bits; 2^12 = 4096 trials
DEFAULT_TRIALS = 256
DEFAULT_SEED = 0


@dataclass(frozen=True)
class MessageSet:
    """One message bit-vector per stream, lengths matching the plan rates."""

    bits: Mapping[Stream, tuple[int, ...]]

    @classmethod
    def zero(cls, rates: RateTuple) -> "MessageSet":
        return cls({pair: (0,) * int(rates.rate(*pair)) for pair in PAIRS})

    @classmethod
    def random(cls, rates: RateTuple, rng: random.Random) -> "MessageSet":
        return cls(
            {
                pair: tuple(rng.getrandbits(1) for _ in range(int(rates.rate(*pair))))
                for pair in PAIRS
            }
        )

    @classmethod
    def from_index(cls, rates: RateTuple, index: int) -> "MessageSet":
        """The ``index``-th message set in the canonical enumeration order."""
        bits: dict[Stream, tuple[int, ...]] = {}
        for pair in PAIRS:
            width = int(rates.rate(*pair))
            bits[pair] = tuple((index >> t) & 1 for t in range(width))
            index >>= width
        return cls(bits)

    def stream(self, j: int, k: int) -> tuple[int, ...]:
        return tuple(self.bits.get((j, k), ()))

    def check_shape(self, rates: RateTuple) -> None:
        self.check_widths({pair: int(rates.rate(*pair)) for pair in PAIRS})

    def check_widths(self, widths: Mapping[Stream, int]) -> None:
        for pair in PAIRS:
            got = len(self.bits.get(pair, ()))
            want = widths.get(pair, 0)
            if got != want:
                raise ValueError(
                    f"message for stream {pair} has {got} bits, plan delivers {want}"
                )

    def xor(self, other: "MessageSet") -> "MessageSet":
        return MessageSet(
            {
                pair: tuple(a ^ b for a, b in zip(self.bits[pair], other.bits[pair]))
                for pair in self.bits
            }
        )


def encode(messages: MessageSet, plan: LevelPlan) -> tuple[Signal, Signal, Signal]:
    """Each user's transmit signal for one channel use.

    Bit ``t`` of an assignment's stream slice rides the ``t``-th assigned
    uplink level (ascending); a cyclic repeater user naturally places its
    repeated stream in both groups because the stream is listed in both.
    """
    messages.check_widths(plan.stream_widths)
    config = plan.config
    q = config.q
    slices = plan.bit_slices
    gains = (config.n1, config.n2, config.n3)
    words = [0, 0, 0]
    for idx, asg in enumerate(plan.assignments):
        for j, k in asg.streams:
            start, _ = slices[(idx, (j, k))]
            stream_bits = messages.bits[(j, k)]
            base = q - gains[j - 1] - 1  # sender position n_j - l + 1 is bit base + l
            for t, level in enumerate(asg.uplink_levels):
                if stream_bits[start + t]:
                    words[j - 1] ^= 1 << (base + level)
    return Signal(q, words[0]), Signal(q, words[1]), Signal(q, words[2])


def relay_forward(y_r: Signal, plan: LevelPlan) -> Signal:
    """Relay transmit signal: each mapped received level re-emitted downlink."""
    q = plan.config.q
    if y_r.length != q:
        raise ValueError(f"relay signal length {y_r.length} != q={q}")
    word = 0
    for up, down in plan.relay_map:
        bit = (y_r.word >> (up - 1)) & 1  # uplink level l sits at received bit l-1
        if bit:
            word |= 1 << (q - down)  # downlink level l sits at transmit bit q-l
    return Signal(q, word)


def _read_levels(y_j: Signal, j: int, levels: tuple[int, ...], config: ChannelConfig) -> tuple[int, ...]:
    n_j = config.gain(j)
    out = []
    for level in levels:
        if level > n_j:
            raise UnresolvableChainError(
                f"user {j} cannot observe downlink level {level} (gain {n_j})"
            )
        out.append((y_j.word >> (n_j - level)) & 1)
    return tuple(out)


def _xor_bits(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x ^ y for x, y in zip(a, b))


def decode(y_j: Signal, j: int, own: MessageSet, plan: LevelPlan) -> dict[Stream, tuple[int, ...]]:
    """All streams destined to user ``j`` recovered from its observation.

    ``own`` must contain user ``j``'s transmitted bits; they are the
    cancellation keys for bi-directional levels and the anchors of the
    cyclic chains.  Only downlink levels accessible to ``j`` are read.
    """
    config = plan.config
    slices = plan.bit_slices
    widths = plan.stream_widths
    parts: dict[Stream, dict[tuple[int, int], tuple[int, ...]]] = {}

    def deliver(stream: Stream, window: tuple[int, int], bits: tuple[int, ...]) -> None:
        parts.setdefault(stream, {})[window] = bits

    cyclic_groups: list[tuple[int, StreamAssignment]] = []
    for idx, asg in enumerate(plan.assignments):
        if asg.kind == BIDIR:
            s1, s2 = asg.streams
            if j == s1[0]:
                own_stream, in_stream = s1, s2
            elif j == s2[0]:
                own_stream, in_stream = s2, s1
            else:
                continue
            word = _read_levels(y_j, j, asg.downlink_levels, config)
            o_start, o_stop = slices[(idx, own_stream)]
            own_bits = tuple(own.bits.get(own_stream, ()))[o_start:o_stop]
            if len(own_bits) != asg.width:
                raise ValueError(f"own bits for stream {own_stream} have the wrong width")
            deliver(in_stream, slices[(idx, in_stream)], _xor_bits(word, own_bits))
        elif asg.kind == UNI:
            if asg.streams[0][1] == j:
                word = _read_levels(y_j, j, asg.downlink_levels, config)
                deliver(asg.streams[0], slices[(idx, asg.streams[0])], word)
        elif j in asg.readers():
            cyclic_groups.append((idx, asg))

    # Resolve cyclic XOR groups; each settled group peels one unknown and
    # the chains have depth <= 2, so two passes settle everything.
    known: dict[Stream, tuple[int, ...]] = {}
    for idx, asg in cyclic_groups:
        for s, r in asg.streams:
            if s == j:
                start, stop = slices[(idx, (s, r))]
                known[(s, r)] = own.stream(s, r)[start:stop]
    for _ in range(2):
        for idx, asg in cyclic_groups:
            s1, s2 = asg.streams
            if (s1 in known) == (s2 in known):
                continue
            word = _read_levels(y_j, j, asg.downlink_levels, config)
            have, missing = (s1, s2) if s1 in known else (s2, s1)
            known[missing] = _xor_bits(word, known[have])
    for idx, asg in cyclic_groups:
        for stream in asg.streams:
            if stream[1] == j:
                if stream not in known:
                    raise UnresolvableChainError(
                        f"user {j} cannot resolve stream {stream} from cycle {asg.cycle}"
                    )
                deliver(stream, slices[(idx, stream)], known[stream])

    decoded: dict[Stream, tuple[int, ...]] = {}
    for stream, windows in parts.items():
        width = widths[stream]
        merged: list[int | None] = [None] * width
        for (start, stop), bits in windows.items():
            merged[start:stop] = bits
        if any(b is None for b in merged):
            raise UnresolvableChainError(f"stream {stream} only partially decoded at user {j}")
        decoded[stream] = tuple(merged)
    return decoded


@dataclass(frozen=True)
class ExhaustiveMode:
    kind: str = field(default="exhaustive", init=False)


@dataclass(frozen=True)
class RandomMode:
    seed: int
    trials: int = DEFAULT_TRIALS
    kind: str = field(default="random", init=False)


Mode = ExhaustiveMode | RandomMode


def auto_mode(plan: LevelPlan, *, limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
              seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> Mode:
    """Exhaustive when the message space is small enough, else seeded random."""
    total_bits = int(plan.rates.total)
    if total_bits <= limit:
        return ExhaustiveMode()
    return RandomMode(seed=seed, trials=trials)


@dataclass(frozen=True)
class FailureExample:
    messages: MessageSet
    stream: Stream
    expected: tuple[int, ...]
    decoded: tuple[int, ...] | None


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    failures: int
    failure_examples: tuple[FailureExample, ...]
    mode: Mode

    @property
    def passed(self) -> bool:
        return self.failures == 0


def run_trial(plan: LevelPlan, messages: MessageSet) -> dict[Stream, tuple[int, ...]]:
    """Run one channel use end to end; returns every decoded stream."""
    config = plan.config
    x1, x2, x3 = encode(messages, plan)
    y_r = uplink_receive(x1, x2, x3, config)
    x_r = relay_forward(y_r, plan)
    out: dict[Stream, tuple[int, ...]] = {}
    for j in (1, 2, 3):
        y_j = downlink_receive(x_r, j, config)
        out.update(decode(y_j, j, messages, plan))
    return out


def verify_plan(plan: LevelPlan, mode: Mode | None = None, *,
                exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                max_examples: int = 8) -> SimulationReport:
    """Replay the full pipeline over many message sets and count failures.

    The plan's structural invariants are checked first; a malformed plan
    is rejected before any simulation.  Decoding failures are recorded as
    data, never raised.
    """
    plan.validate()
    if mode is None:
        mode = auto_mode(plan, limit=exhaustive_limit)

    expected_streams = plan.stream_widths
    failures = 0
    examples: list[FailureExample] = []
    trials = 0

    def check(messages: MessageSet) -> None:
        nonlocal failures
        decoded = run_trial(plan, messages)
        for (j, k) in expected_streams:
            sent = messages.stream(j, k)
            got = decoded.get((j, k))
            if got != sent:
                failures += 1
                if len(examples) < max_examples:
                    examples.append(FailureExample(messages, (j, k), sent, got))

    if isinstance(mode, ExhaustiveMode):
        total_bits = int(plan.rates.total)
        for index in range(1 << total_bits):
            check(MessageSet.from_index(plan.rates, index))
            trials += 1
    else:
        rng = random.Random(mode.seed)
        for _ in range(mode.trials):
            check(MessageSet.random(plan.rates, rng))
            trials += 1
    return SimulationReport(trials, failures, tuple(examples), mode)
