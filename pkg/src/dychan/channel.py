"""Bit-exact model of the linear shift deterministic Y-channel.

Three users exchange messages through a single relay.  The channel gain
towards user ``j`` is a non-negative integer ``n_j``: of a transmitted
``q``-bit vector only the top ``n_j`` bits survive, the rest fall below
the noise floor and are clipped.  Superposition of simultaneous
transmissions is addition over GF(2).

Signals are ``q``-bit vectors with position 1 at the top.  Internally a
signal is an integer bit mask (position ``p`` is bit ``q - p``), which
makes the shift channel a plain integer shift and keeps the simulator
fast without giving up bit exactness.

Relay level conventions
-----------------------
Levels index the relay's received (uplink) and transmitted (downlink)
signal so that accessibility is literal: level ``l`` is usable by user
``j`` if and only if ``l <= n_j``, in both directions.

* uplink level ``l``   <-> relay received position ``q - l + 1``
  (level 1 is the bottom of the received vector, level q the top);
* a bit meant for uplink level ``l`` sits at sender position
  ``n_j - l + 1`` of user ``j``'s transmit vector (needs ``l <= n_j``);
* downlink level ``l`` <-> relay transmit position ``l``
  (level 1 is the top of the transmit vector);
* user ``j`` observes downlink level ``l`` at its received position
  ``l + q - n_j`` (needs ``l <= n_j``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidGainsError

USERS = (1, 2, 3)


@dataclass(frozen=True, order=True)
class ChannelConfig:
    """Channel gains ``n1 >= n2 >= n3 >= 0`` of a deterministic Y-channel."""

    n1: int
    n2: int
    n3: int

    def __post_init__(self) -> None:
        gains = (self.n1, self.n2, self.n3)
        if any(not isinstance(n, int) or isinstance(n, bool) for n in gains):
            raise InvalidGainsError(f"gains must be integers, got {gains!r}")
        if self.n3 < 0:
            raise InvalidGainsError(f"gains must be non-negative, got {gains!r}")
        if not (self.n1 >= self.n2 >= self.n3):
            raise InvalidGainsError(
                f"gains must satisfy n1 >= n2 >= n3, got {gains!r}; "
                "reorder the users instead of relying on sorting"
            )

    @property
    def q(self) -> int:
        """Signal vector length: the largest gain."""
        return self.n1

    def gain(self, j: int) -> int:
        if j not in USERS:
            raise ValueError(f"user must be 1, 2 or 3, got {j!r}")
        return (self.n1, self.n2, self.n3)[j - 1]

    def gains(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    def scaled(self, factor: int) -> "ChannelConfig":
        """The channel seen over ``factor`` combined uses: all gains scaled."""
        if factor < 1:
            raise ValueError(f"scale factor must be positive, got {factor}")
        return ChannelConfig(self.n1 * factor, self.n2 * factor, self.n3 * factor)


@dataclass(frozen=True)
class Signal:
    """A length-``q`` GF(2) vector; position 1 is the top of the vector."""

    length: int
    word: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("signal length must be non-negative")
        if self.word < 0 or self.word >> self.length:
            raise ValueError(f"word 0x{self.word:x} does not fit in {self.length} bits")

    @classmethod
    def zero(cls, length: int) -> "Signal":
        return cls(length, 0)

    @classmethod
    def from_bits(cls, bits) -> "Signal":
        """Build a signal from its positions top-down, e.g. ``(1, 1, 0, 0)``."""
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0/1, got {bits!r}")
        word = 0
        for b in bits:
            word = (word << 1) | b
        return cls(len(bits), word)

    @property
    def bits(self) -> tuple[int, ...]:
        """The vector as a tuple, position 1 first."""
        q = self.length
        return tuple((self.word >> (q - p)) & 1 for p in range(1, q + 1))

    def get(self, position: int) -> int:
        if not 1 <= position <= self.length:
            raise ValueError(f"position {position} out of range 1..{self.length}")
        return (self.word >> (self.length - position)) & 1

    def with_bit(self, position: int, value: int) -> "Signal":
        if not 1 <= position <= self.length:
            raise ValueError(f"position {position} out of range 1..{self.length}")
        mask = 1 << (self.length - position)
        word = (self.word | mask) if value else (self.word & ~mask)
        return Signal(self.length, word)

    def __xor__(self, other: "Signal") -> "Signal":
        if self.length != other.length:
            raise ValueError("cannot add signals of different lengths")
        return Signal(self.length, self.word ^ other.word)

    def is_zero(self) -> bool:
        return self.word == 0


def _require_length(x: Signal, q: int) -> None:
    if x.length != q:
        raise ValueError(f"signal length {x.length} does not match q={q}")


def shift_apply(x: Signal, n_j: int, config: ChannelConfig) -> Signal:
    """Pass ``x`` through a gain-``n_j`` link: shift down, clip the rest.

    Output position ``p`` carries input position ``p - (q - n_j)`` when that
    index exists, otherwise 0.  With ``n_j = q`` the signal is unchanged,
    with ``n_j = 0`` it is wiped out entirely.
    """
    q = config.q
    _require_length(x, q)
    if not 0 <= n_j <= q:
        raise ValueError(f"gain {n_j} out of range 0..{q}")
    return Signal(q, x.word >> (q - n_j))


def uplink_receive(x1: Signal, x2: Signal, x3: Signal, config: ChannelConfig) -> Signal:
    """Relay's received signal: GF(2) sum of the three shifted transmissions."""
    word = 0
    for x, j in ((x1, 1), (x2, 2), (x3, 3)):
        _require_length(x, config.q)
        word ^= x.word >> (config.q - config.gain(j))
    return Signal(config.q, word)


def downlink_receive(x_r: Signal, j: int, config: ChannelConfig) -> Signal:
    """User ``j``'s received signal: the relay transmission through gain ``n_j``."""
    if j not in USERS:
        raise ValueError(f"user must be 1, 2 or 3, got {j!r}")
    _require_length(x_r, config.q)
    return Signal(config.q, x_r.word >> (config.q - config.gain(j)))


def accessible(level: int, j: int, config: ChannelConfig) -> bool:
    """Whether relay level ``level`` is usable by user ``j`` (either direction)."""
    if not 1 <= level <= config.q:
        raise ValueError(f"level {level} out of range 1..{config.q}")
    return level <= config.gain(j)


def sender_position(level: int, j: int, config: ChannelConfig) -> int:
    """Transmit position of user ``j`` that lands on uplink level ``level``."""
    if not accessible(level, j, config):
        raise ValueError(f"uplink level {level} is not accessible to user {j}")
    return config.gain(j) - level + 1


def relay_received_position(level: int, config: ChannelConfig) -> int:
    """Position of uplink level ``level`` inside the relay's received vector."""
    if not 1 <= level <= config.q:
        raise ValueError(f"level {level} out of range 1..{config.q}")
    return config.q - level + 1


def relay_transmit_position(level: int, config: ChannelConfig) -> int:
    """Position of downlink level ``level`` inside the relay's transmit vector."""
    if not 1 <= level <= config.q:
        raise ValueError(f"level {level} out of range 1..{config.q}")
    return level


def receiver_position(level: int, j: int, config: ChannelConfig) -> int:
    """Position where user ``j`` observes downlink level ``level``."""
    if not accessible(level, j, config):
        raise ValueError(f"downlink level {level} is not accessible to user {j}")
    return level + config.q - config.gain(j)
