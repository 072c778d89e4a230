"""Service layer: request/response models, handlers, and the FastAPI app.

The handlers are plain functions over pydantic models so that the HTTP
service and the command-line client share one implementation; the CLI
calls them in process, the FastAPI routes expose them to the network.
Rational values cross the boundary as exact ``"p/q"`` strings (integers
stay plain, e.g. ``"3"``), so responses round-trip without loss.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .channel import ChannelConfig
from .errors import (
    InvalidGainsError,
    NotInRegionError,
    RateParseError,
    ScanLimitError,
)
from .oracle import ScanLimits, achievability_scan
from .region import (
    RateTuple,
    RedundancyReport,
    outer_bound,
    redundancy_report,
    vertices,
)
from .scheme import LevelPlan, build_plan, symbol_extension
from .simulator import ExhaustiveMode, RandomMode, SimulationReport, auto_mode, verify_plan

SCHEMA_REGION = "dychan.region/1"
SCHEMA_CHECK = "dychan.check/1"
SCHEMA_PLAN = "dychan.plan/1"
SCHEMA_SCAN = "dychan.scan/1"
SCHEMA_ERROR = "dychan.error/1"

SCAN_EXHAUSTIVE_MAX_N1 = 6
SCAN_SAMPLED_MAX_N1 = 8
SCAN_SAMPLE_SIZE = 200


class ConfigModel(BaseModel):
    n1: int
    n2: int
    n3: int


def make_config(n1: int, n2: int, n3: int) -> ChannelConfig:
    return ChannelConfig(n1, n2, n3)


def parse_rates(raw: list[str]) -> RateTuple:
    return RateTuple.make(*raw)


# ---------------------------------------------------------------- region


class RegionRequest(BaseModel):
    n1: int
    n2: int
    n3: int
    vertices: bool = False
    redundancy: bool = False


class InequalityModel(BaseModel):
    label: str
    coefficients: list[int]  # rate order (R12, R13, R21, R23, R31, R32)
    bound: int


class VertexModel(BaseModel):
    point: list[str]
    tight: list[str]


class RedundancyEntryModel(BaseModel):
    label: str
    coefficients: list[int]
    bound: int
    verdict: str
    max_lhs: str


class RegionResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(SCHEMA_REGION, serialization_alias="schema")
    config: ConfigModel
    inequalities: list[InequalityModel]
    vertices: list[VertexModel] | None = None
    redundancy: list[RedundancyEntryModel] | None = None


def _redundancy_models(report: RedundancyReport) -> list[RedundancyEntryModel]:
    return [
        RedundancyEntryModel(
            label=e.inequality.label,
            coefficients=list(e.inequality.coeffs),
            bound=e.inequality.bound,
            verdict=e.verdict,
            max_lhs=str(e.max_lhs),
        )
        for e in report.entries
    ]


def region_handler(request: RegionRequest) -> RegionResponse:
    config = make_config(request.n1, request.n2, request.n3)
    region = outer_bound(config)
    response = RegionResponse(
        config=ConfigModel(n1=config.n1, n2=config.n2, n3=config.n3),
        inequalities=[
            InequalityModel(label=iq.label, coefficients=list(iq.coeffs), bound=iq.bound)
            for iq in region.inequalities
        ],
    )
    if request.vertices:
        response.vertices = [
            VertexModel(point=list(v.point.to_strings()), tight=list(v.tight))
            for v in vertices(region)
        ]
    if request.redundancy:
        response.redundancy = _redundancy_models(redundancy_report(config))
    return response


# ----------------------------------------------------------------- check


class CheckRequest(BaseModel):
    n1: int
    n2: int
    n3: int
    rates: list[str]


class CheckResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(SCHEMA_CHECK, serialization_alias="schema")
    config: ConfigModel
    rates: list[str]
    member: bool
    violated: list[str]


def check_handler(request: CheckRequest) -> CheckResponse:
    config = make_config(request.n1, request.n2, request.n3)
    rates = parse_rates(request.rates)
    region = outer_bound(config)
    violated = region.violations(rates)
    return CheckResponse(
        config=ConfigModel(n1=config.n1, n2=config.n2, n3=config.n3),
        rates=list(rates.to_strings()),
        member=not violated,
        violated=list(violated),
    )


# ------------------------------------------------------------------ plan


class PlanRequest(BaseModel):
    n1: int
    n2: int
    n3: int
    rates: list[str]
    simulate: bool = False
    exhaustive: bool | None = None  # None: pick automatically by message count
    seed: int = 0
    trials: int = 256


class AssignmentModel(BaseModel):
    kind: str
    streams: list[list[int]]
    width: int
    uplink_levels: list[int]
    downlink_levels: list[int]
    cycle: str | None = None
    role: str | None = None


class ExtensionModel(BaseModel):
    q_factor: int
    base_config: ConfigModel
    base_rates: list[str]


class ModeModel(BaseModel):
    kind: str
    seed: int | None = None
    trials: int | None = None


class FailureExampleModel(BaseModel):
    stream: list[int]
    messages: dict[str, list[int]]
    expected: list[int]
    decoded: list[int] | None


class SimulationModel(BaseModel):
    mode: ModeModel
    trials: int
    failures: int
    passed: bool
    failure_examples: list[FailureExampleModel]


class PlanResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(SCHEMA_PLAN, serialization_alias="schema")
    config: ConfigModel
    rates: list[str]
    extension: ExtensionModel | None = None
    assignments: list[AssignmentModel]
    relay_map: list[list[int]]
    simulation: SimulationModel | None = None


def _plan_models(plan: LevelPlan) -> tuple[list[AssignmentModel], list[list[int]]]:
    assignments = [
        AssignmentModel(
            kind=asg.kind,
            streams=[list(s) for s in asg.streams],
            width=asg.width,
            uplink_levels=list(asg.uplink_levels),
            downlink_levels=list(asg.downlink_levels),
            cycle=asg.cycle,
            role=asg.role,
        )
        for asg in plan.assignments
    ]
    return assignments, [list(pair) for pair in plan.relay_map]


def _simulation_model(report: SimulationReport) -> SimulationModel:
    if isinstance(report.mode, RandomMode):
        mode = ModeModel(kind="random", seed=report.mode.seed, trials=report.mode.trials)
    else:
        mode = ModeModel(kind="exhaustive")
    return SimulationModel(
        mode=mode,
        trials=report.trials,
        failures=report.failures,
        passed=report.passed,
        failure_examples=[
            FailureExampleModel(
                stream=list(ex.stream),
                messages={f"{j}{k}": list(bits) for (j, k), bits in ex.messages.bits.items()},
                expected=list(ex.expected),
                decoded=list(ex.decoded) if ex.decoded is not None else None,
            )
            for ex in report.failure_examples
        ],
    )


def plan_handler(request: PlanRequest) -> PlanResponse:
    config = make_config(request.n1, request.n2, request.n3)
    rates = parse_rates(request.rates)
    extension: ExtensionModel | None = None
    if rates.is_integral:
        plan = build_plan(rates, config)
    else:
        q_factor, extended_rates, extended_config = symbol_extension(rates, config)
        extension = ExtensionModel(
            q_factor=q_factor,
            base_config=ConfigModel(n1=config.n1, n2=config.n2, n3=config.n3),
            base_rates=list(rates.to_strings()),
        )
        plan = build_plan(extended_rates, extended_config)
    assignments, relay_map = _plan_models(plan)
    response = PlanResponse(
        config=ConfigModel(n1=plan.config.n1, n2=plan.config.n2, n3=plan.config.n3),
        rates=list(plan.rates.to_strings()),
        extension=extension,
        assignments=assignments,
        relay_map=relay_map,
    )
    if request.simulate:
        if request.exhaustive is True:
            mode = ExhaustiveMode()
        elif request.exhaustive is False:
            mode = RandomMode(seed=request.seed, trials=request.trials)
        else:
            mode = auto_mode(plan, seed=request.seed, trials=request.trials)
        response.simulation = _simulation_model(verify_plan(plan, mode))
    return response


# ------------------------------------------------------------------ scan


class ScanRequest(BaseModel):
    max_n1: int = 4
    seed: int = 0
    force: bool = False
    probes_per_config: int = 25


class ScanConfigModel(BaseModel):
    config: ConfigModel
    points_checked: int
    trials_run: int
    probes_tried: int
    probes_rejected: int
    violations: list[str]
    passed: bool


class ScanResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(SCHEMA_SCAN, serialization_alias="schema")
    max_n1: int
    seed: int
    configs: list[ScanConfigModel]
    passed: bool


def scan_handler(request: ScanRequest) -> ScanResponse:
    if request.max_n1 > SCAN_SAMPLED_MAX_N1 and not request.force:
        raise ScanLimitError(
            f"max_n1 {request.max_n1} exceeds the safety limit "
            f"{SCAN_SAMPLED_MAX_N1}; pass force to override"
        )
    results = []
    overall = True
    for n1 in range(0, request.max_n1 + 1):
        for n2 in range(0, n1 + 1):
            for n3 in range(0, n2 + 1):
                config = ChannelConfig(n1, n2, n3)
                sample = None if n1 <= SCAN_EXHAUSTIVE_MAX_N1 else SCAN_SAMPLE_SIZE
                report = achievability_scan(
                    config,
                    ScanLimits(
                        seed=request.seed,
                        probes=request.probes_per_config,
                        point_sample=sample,
                    ),
                )
                overall = overall and report.passed
                results.append(
                    ScanConfigModel(
                        config=ConfigModel(n1=n1, n2=n2, n3=n3),
                        points_checked=report.points_checked,
                        trials_run=report.trials_run,
                        probes_tried=report.probes_tried,
                        probes_rejected=report.probes_rejected,
                        violations=[f"{v.rates.to_strings()}: {v.problem}" for v in report.violations],
                        passed=report.passed,
                    )
                )
    return ScanResponse(
        max_n1=request.max_n1, seed=request.seed, configs=results, passed=overall
    )


# ------------------------------------------------------------- FastAPI


class HealthResponse(BaseModel):
    status: str
    version: str


app = FastAPI(
    title="dychan",
    description="Exact capacity regions and verified relay level plans "
    "for the linear shift deterministic Y-channel.",
    version=__version__,
)


def _client_error(exc: Exception) -> HTTPException:
    if isinstance(exc, NotInRegionError):
        return HTTPException(
            status_code=422,
            detail={"error": "NOT_IN_REGION", "violated": list(exc.violated)},
        )
    return HTTPException(status_code=422, detail=str(exc))


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/region", response_model=RegionResponse, response_model_exclude_none=True)
def region_endpoint(request: RegionRequest) -> RegionResponse:
    try:
        return region_handler(request)
    except InvalidGainsError as exc:
        raise _client_error(exc) from exc


@app.post("/v1/check", response_model=CheckResponse)
def check_endpoint(request: CheckRequest) -> CheckResponse:
    try:
        return check_handler(request)
    except (InvalidGainsError, RateParseError) as exc:
        raise _client_error(exc) from exc


@app.post("/v1/plan", response_model=PlanResponse, response_model_exclude_none=True)
def plan_endpoint(request: PlanRequest) -> PlanResponse:
    try:
        return plan_handler(request)
    except (InvalidGainsError, RateParseError, NotInRegionError) as exc:
        raise _client_error(exc) from exc


@app.post("/v1/scan", response_model=ScanResponse)
def scan_endpoint(request: ScanRequest) -> ScanResponse:
    try:
        return scan_handler(request)
    except (InvalidGainsError, ScanLimitError) as exc:
        raise _client_error(exc) from exc
