"""The EDA-tool boundary: adapter contract and run-result types.

An adapter takes a prepared workspace and produces a RunResult with ordered
stage outcomes, collected report files, optional waveforms, and the raw log
text. Stages are gated: everything after a failed stage is skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

from ..core import FlowKind

STAGES = ("instantiate", "simulate", "synthesize", "implement")

FLOW_STAGES = {
    FlowKind.ANALOGUE: ("instantiate", "simulate"),
    FlowKind.RF: ("instantiate", "simulate"),
    FlowKind.FPGA: ("instantiate", "simulate", "synthesize", "implement"),
}

DEFAULT_EXTERNAL_TIMEOUT_S = 300.0


class ConfigurationError(Exception):
    """Adapter misconfiguration (missing executable or fixture), distinct
    from a stage failure."""


class EvalError(Exception):
    """Mock evaluator precondition not met (missing substrate, feed, ...)."""


class DegenerateBiasError(EvalError):
    """Bias at or below threshold: subthreshold operation is rejected."""


@dataclass(frozen=True)
class AdapterSpec:
    """How to run one flow's tool: external process, mock, or replay."""

    flow: FlowKind
    mode: str  # external | mock | replay
    stages: tuple[str, ...]
    command_template: Optional[str] = None
    timeout_s: float = DEFAULT_EXTERNAL_TIMEOUT_S

    def __post_init__(self) -> None:
        if self.mode not in ("external", "mock", "replay"):
            raise ValueError(f"unknown adapter mode {self.mode!r}")
        if (self.command_template is None) == (self.mode == "external"):
            raise ValueError("command_template is required exactly for external mode")
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        object.__setattr__(self, "stages", tuple(self.stages))
        allowed = FLOW_STAGES[self.flow]
        for stage in self.stages:
            if stage not in allowed:
                raise ValueError(f"stage {stage!r} not valid for flow {self.flow.value}")
        if list(self.stages) != [s for s in allowed if s in self.stages]:
            raise ValueError("stages must follow the canonical order")

    @classmethod
    def mock_for(cls, flow: FlowKind) -> "AdapterSpec":
        return cls(flow=flow, mode="mock", stages=FLOW_STAGES[flow])


@dataclass(frozen=True)
class StageOutcome:
    stage: str
    status: str  # pass | fail | skipped
    duration_s: float = 0.0
    note: str = ""

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad stage status {self.status!r}")
        if self.duration_s < 0:
            raise ValueError("duration must be non-negative")


@dataclass(frozen=True)
class WaveTrace:
    """One named numeric trace; x strictly increasing, y real or complex."""

    sweep_variable: str
    sweep_unit: str
    points: tuple[tuple[float, complex], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("trace must be non-empty")
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("trace x values must be strictly increasing")

    def real_points(self) -> list[tuple[float, float]]:
        return [(x, y.real if isinstance(y, complex) else float(y)) for x, y in self.points]


@dataclass(frozen=True)
class WaveformSet:
    traces: dict[str, WaveTrace] = field(default_factory=dict)


@dataclass(frozen=True)
class RunResult:
    """Outcome of one adapter run over a workspace."""

    stage_outcomes: tuple[StageOutcome, ...]
    report_files: dict[str, Path] = field(default_factory=dict)
    waveforms: Optional[WaveformSet] = None
    log_text: str = ""

    def __post_init__(self) -> None:
        failed = False
        for outcome in self.stage_outcomes:
            if failed and outcome.status != "skipped":
                raise ValueError("stages after a failure must be skipped")
            if outcome.status == "fail":
                failed = True

    def passed(self, stage: str) -> bool:
        return any(o.stage == stage and o.status == "pass" for o in self.stage_outcomes)

    def all_passed(self) -> bool:
        return all(o.status == "pass" for o in self.stage_outcomes)

    def failed_stage(self) -> Optional[str]:
        for o in self.stage_outcomes:
            if o.status == "fail":
                return o.stage
        return None


class Adapter(Protocol):
    spec: AdapterSpec

    def run(self, workspace: Path) -> RunResult: ...


def gate_stages(
    stages: tuple[str, ...], results: dict[str, tuple[bool, float, str]]
) -> tuple[StageOutcome, ...]:
    """Assemble ordered outcomes with fail-gating from per-stage results."""
    outcomes: list[StageOutcome] = []
    failed = False
    for stage in stages:
        if failed:
            outcomes.append(StageOutcome(stage, "skipped"))
            continue
        ok, duration, note = results.get(stage, (False, 0.0, "stage not reached"))
        status = "pass" if ok else "fail"
        outcomes.append(StageOutcome(stage, status, duration, note))
        failed = failed or not ok
    return tuple(outcomes)


def serialize_waveforms(waveforms: Optional[WaveformSet]) -> Optional[dict]:
    if waveforms is None:
        return None
    out = {}
    for name, trace in waveforms.traces.items():
        pts = []
        for x, y in trace.points:
            if isinstance(y, complex) and y.imag != 0:
                pts.append([x, y.real, y.imag])
            else:
                pts.append([x, y.real if isinstance(y, complex) else float(y)])
        out[name] = {
            "sweep_variable": trace.sweep_variable,
            "sweep_unit": trace.sweep_unit,
            "points": pts,
        }
    return out


def deserialize_waveforms(data: Optional[dict]) -> Optional[WaveformSet]:
    if data is None:
        return None
    traces = {}
    for name, rec in data.items():
        pts = []
        for p in rec["points"]:
            if len(p) == 3:
                pts.append((p[0], complex(p[1], p[2])))
            else:
                pts.append((p[0], complex(p[1], 0.0)))
        traces[name] = WaveTrace(rec["sweep_variable"], rec["sweep_unit"], tuple(pts))
    return WaveformSet(traces)


def downsample(points: list, max_points: int = 2000) -> list:
    """Uniform-stride downsampling for transport payloads."""
    if len(points) <= max_points:
        return list(points)
    idx = [round(i * (len(points) - 1) / (max_points - 1)) for i in range(max_points)]
    return [points[i] for i in idx]
