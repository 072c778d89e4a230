"""Exact capacity regions and verified relay plans for the deterministic Y-channel.

Three users exchange six unicast messages through a single relay over a
linear shift deterministic channel.  This package computes the exact
capacity region of that network (an integer-coefficient polytope over
the six rates), enumerates its corner points in rational arithmetic,
constructs relay level assignments achieving any point of the region,
and verifies those plans by bit-exact end-to-end simulation.
"""

__version__ = "0.1.0"

from .channel import ChannelConfig, Signal, accessible, downlink_receive, shift_apply, uplink_receive
from .errors import (
    DychanError,
    InternalInfeasibleError,
    InvalidGainsError,
    NotInRegionError,
    PlanValidationError,
    PreconditionError,
    RateParseError,
    ScanLimitError,
    UnresolvableChainError,
)
from .region import (
    Inequality,
    RateTuple,
    Region,
    Vertex,
    cutset_bounds,
    integer_points,
    is_member,
    outer_bound,
    redundancy_report,
    vertices,
)
from .scheme import (
    LevelPlan,
    StageState,
    StreamAssignment,
    bidir_stage,
    build_plan,
    cyclic_stage,
    symbol_extension,
    uni_stage,
)
from .simulator import (
    ExhaustiveMode,
    MessageSet,
    RandomMode,
    SimulationReport,
    decode,
    encode,
    relay_forward,
    verify_plan,
)

__all__ = [
    "ChannelConfig",
    "Signal",
    "accessible",
    "shift_apply",
    "uplink_receive",
    "downlink_receive",
    "RateTuple",
    "Inequality",
    "Region",
    "Vertex",
    "outer_bound",
    "cutset_bounds",
    "is_member",
    "vertices",
    "integer_points",
    "redundancy_report",
    "LevelPlan",
    "StageState",
    "StreamAssignment",
    "bidir_stage",
    "cyclic_stage",
    "uni_stage",
    "build_plan",
    "symbol_extension",
    "MessageSet",
    "SimulationReport",
    "ExhaustiveMode",
    "RandomMode",
    "encode",
    "relay_forward",
    "decode",
    "verify_plan",
    "DychanError",
    "InvalidGainsError",
    "RateParseError",
    "NotInRegionError",
    "PreconditionError",
    "InternalInfeasibleError",
    "PlanValidationError",
    "UnresolvableChainError",
    "ScanLimitError",
    "__version__",
]
