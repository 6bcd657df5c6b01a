"""Flow-agnostic domain types shared across the framework.

Defines the design flows, quantified objectives with comparator semantics,
the prompt bundle handed to a session, and the percentage-deviation math
used to score measured metrics against their targets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional


class FlowKind(enum.Enum):
    """The three supported circuit design flows."""

    ANALOGUE = "analogue"
    RF = "rf"
    FPGA = "fpga"


COMPARATORS = (">=", "<=", "approx")

# Fraction of |target| used as the approx window when no tolerance is given.
DEFAULT_APPROX_TOLERANCE = 0.10


@dataclass(frozen=True)
class MetricInfo:
    """Registry entry describing a metric identifier."""

    unit: str
    negative_is_better: bool = False


# Open registry: string keys plus a unit table, extensible at runtime so new
# flows can add metrics without type changes.
METRIC_REGISTRY: dict[str, MetricInfo] = {
    "dc_gain_db": MetricInfo("dB"),
    "phase_margin_deg": MetricInfo("deg"),
    "ugb_hz": MetricInfo("Hz"),
    "power_w": MetricInfo("W"),
    "s11_db": MetricInfo("dB", negative_is_better=True),
    "f_res_hz": MetricInfo("Hz"),
    "lut_count": MetricInfo("count"),
    "ff_count": MetricInfo("count"),
    "clock_freq_hz": MetricInfo("Hz"),
    "max_delay_ns": MetricInfo("ns"),
    "tphl_s": MetricInfo("s"),
    "tplh_s": MetricInfo("s"),
    "worst_delay_s": MetricInfo("s"),
    "nmh_v": MetricInfo("V"),
    "nml_v": MetricInfo("V"),
    "pdp_j": MetricInfo("J"),
}


def register_metric(name: str, unit: str, negative_is_better: bool = False) -> None:
    """Add (or overwrite) a metric in the open registry."""
    METRIC_REGISTRY[name] = MetricInfo(unit, negative_is_better)


def metric_unit(name: str) -> str:
    info = METRIC_REGISTRY.get(name)
    return info.unit if info else ""


@dataclass(frozen=True)
class Objective:
    """A quantified design target: metric, comparator, and target value.

    ``tolerance`` applies only to the ``approx`` comparator (defaulting to
    10% of |target| when omitted). ``at_frequency`` qualifies metrics that
    are read at a specific frequency, and is mandatory for ``s11_db``.
    """

    metric: str
    comparator: str
    target: float
    tolerance: Optional[float] = None
    at_frequency: Optional[float] = None

    def __post_init__(self) -> None:
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")
        if not math.isfinite(self.target):
            raise ValueError("objective target must be finite")
        if self.tolerance is not None and self.tolerance <= 0:
            raise ValueError("tolerance must be positive when given")
        if self.comparator != "approx" and self.tolerance is not None:
            raise ValueError("tolerance is only valid with the approx comparator")
        if self.comparator == "approx" and self.tolerance is None and self.target == 0:
            raise ValueError("approx with a zero target needs an explicit tolerance")
        if self.at_frequency is not None and self.at_frequency <= 0:
            raise ValueError("at_frequency must be positive")
        if self.metric == "s11_db" and self.at_frequency is None:
            raise ValueError("s11_db objectives require at_frequency")

    def effective_tolerance(self) -> Optional[float]:
        if self.comparator != "approx":
            return None
        if self.tolerance is not None:
            return self.tolerance
        return DEFAULT_APPROX_TOLERANCE * abs(self.target)


@dataclass(frozen=True)
class ObjectiveCheck:
    """Outcome of evaluating one objective against measured metrics."""

    objective: Objective
    measured: Optional[float]
    status: str  # met | unmet | unmeasurable
    deviation_pct: Optional[float]

    def __post_init__(self) -> None:
        if self.status not in ("met", "unmet", "unmeasurable"):
            raise ValueError(f"bad status {self.status!r}")
        if (self.measured is None) != (self.status == "unmeasurable"):
            raise ValueError("status must be unmeasurable exactly when measured is absent")


@dataclass(frozen=True)
class PromptBundle:
    """Flow-tagged prompt pair plus objectives and optional FPGA extras."""

    flow: FlowKind
    system_prompt: str
    user_prompt: str
    objectives: tuple[Objective, ...] = field(default_factory=tuple)
    testbench: Optional[str] = None
    clock_constraint: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.system_prompt.strip():
            raise ValueError("system_prompt must be non-empty")
        if not self.user_prompt.strip():
            raise ValueError("user_prompt must be non-empty")
        if self.flow is not FlowKind.FPGA and (self.testbench or self.clock_constraint):
            raise ValueError("testbench/clock_constraint are only valid for the fpga flow")
        object.__setattr__(self, "objectives", tuple(self.objectives))


def deviation_pct(measured: float, target: float, metric: str = "") -> Optional[float]:
    """Percentage deviation of a measured value from its target.

    Plain metrics use (measured - target) / target * 100. Metrics registered
    as negative-is-better (reflection coefficients in dB) compare magnitudes
    instead: (|measured| - |target|) / |target| * 100, so a deeper notch
    scores as a positive margin. Undefined when target is zero.
    """
    if target == 0:
        return None
    info = METRIC_REGISTRY.get(metric)
    if info is not None and info.negative_is_better:
        return (abs(measured) - abs(target)) / abs(target) * 100.0
    return (measured - target) / target * 100.0


def evaluate_objective(obj: Objective, metrics: Mapping[str, float]) -> ObjectiveCheck:
    """Check one objective against a metric map.

    A metric missing from the map yields status ``unmeasurable``. The
    deviation is omitted when the target is zero; the met/unmet status is
    still computed from the comparator.
    """
    measured = metrics.get(obj.metric)
    if measured is None:
        return ObjectiveCheck(obj, None, "unmeasurable", None)
    measured = float(measured)
    if not math.isfinite(measured):
        raise ValueError(f"measured value for {obj.metric} is not finite")

    if obj.comparator == ">=":
        met = measured >= obj.target
    elif obj.comparator == "<=":
        met = measured <= obj.target
    else:
        met = abs(measured - obj.target) <= (obj.effective_tolerance() or 0.0)

    dev = deviation_pct(measured, obj.target, obj.metric)
    return ObjectiveCheck(obj, measured, "met" if met else "unmet", dev)


def all_met(checks: list[ObjectiveCheck] | tuple[ObjectiveCheck, ...]) -> bool:
    """True when every check in a non-empty list has status met."""
    return bool(checks) and all(c.status == "met" for c in checks)
