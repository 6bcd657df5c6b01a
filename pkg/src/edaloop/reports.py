"""Parse PPA reports and logs into typed records.

Formats are documented here and frozen by fixtures: a line-oriented
"key = value unit" metrics file, pipe-delimited tables for utilization,
timing, and power, and plain-text logs with ERROR / CRITICAL WARNING
prefixes. Writers for the same formats live alongside the parsers so
replayed reports round-trip.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

ADDITIVITY_REL_TOL = 0.01


class ReportError(Exception):
    """Report text rejected: bad row, duplicate key, or broken invariant."""


@dataclass(frozen=True)
class MetricsReport:
    """Generic named metrics with units."""

    entries: dict[str, tuple[float, str]]
    unknown_lines: int = 0

    def values(self) -> dict[str, float]:
        return {k: v for k, (v, _unit) in self.entries.items()}


@dataclass(frozen=True)
class UtilizationReport:
    lut: int
    ff: int
    bram: int
    dsp: int
    io: int

    def __post_init__(self) -> None:
        if min(self.lut, self.ff, self.bram, self.dsp, self.io) < 0:
            raise ReportError("utilization counts must be non-negative")


@dataclass(frozen=True)
class TimingReport:
    data_path_ns: float
    logic_ns: float
    route_ns: float
    achieved_period_ns: float

    def __post_init__(self) -> None:
        if min(self.data_path_ns, self.logic_ns, self.route_ns) < 0:
            raise ReportError("delays must be non-negative")
        if self.achieved_period_ns <= 0:
            raise ReportError("achieved period must be positive")
        total = self.logic_ns + self.route_ns
        if self.data_path_ns and not math.isclose(
            total, self.data_path_ns, rel_tol=ADDITIVITY_REL_TOL
        ):
            raise ReportError(
                f"logic {self.logic_ns} + route {self.route_ns} != data path {self.data_path_ns}"
            )

    def clock_freq_hz(self) -> float:
        return 1e9 / self.achieved_period_ns


@dataclass(frozen=True)
class PowerReport:
    total_w: float
    dynamic_w: float
    static_w: float

    def __post_init__(self) -> None:
        if min(self.total_w, self.dynamic_w, self.static_w) < 0:
            raise ReportError("power values must be non-negative")
        parts = self.dynamic_w + self.static_w
        if self.total_w and not math.isclose(parts, self.total_w, rel_tol=ADDITIVITY_REL_TOL):
            raise ReportError(
                f"dynamic {self.dynamic_w} + static {self.static_w} != total {self.total_w}"
            )


@dataclass(frozen=True)
class LogEntry:
    code: str
    message: str
    location: Optional[str] = None


@dataclass(frozen=True)
class LogDigest:
    errors: tuple[LogEntry, ...] = field(default_factory=tuple)
    critical_warnings: tuple[LogEntry, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# Metrics file: "name = value unit" per line
# ---------------------------------------------------------------------------

_METRIC_LINE_RE = re.compile(
    r"^\s*([A-Za-z_]\w*)\s*=\s*([+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*(\S*)\s*$"
)


def parse_metrics(text: str) -> MetricsReport:
    """Parse a metrics file; unknown lines are tallied, duplicates rejected."""
    entries: dict[str, tuple[float, str]] = {}
    unknown = 0
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _METRIC_LINE_RE.match(line)
        if not m:
            unknown += 1
            continue
        key, value, unit = m.group(1), float(m.group(2)), m.group(3)
        if not math.isfinite(value):
            raise ReportError(f"non-finite value for {key}")
        if key in entries:
            raise ReportError(f"duplicate metric key '{key}'")
        entries[key] = (value, unit)
    return MetricsReport(entries, unknown)


def write_metrics(entries: dict[str, tuple[float, str]]) -> str:
    lines = [f"{k} = {v:.12g} {unit}".rstrip() for k, (v, unit) in entries.items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pipe tables
# ---------------------------------------------------------------------------


def _table_rows(text: str) -> dict[str, str]:
    """First-column label -> second-column cell for pipe-delimited rows."""
    rows: dict[str, str] = {}
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped.startswith("|"):
            continue
        cells = [c.strip() for c in stripped.strip("|").split("|")]
        if len(cells) < 2 or not cells[0]:
            continue
        rows.setdefault(cells[0], cells[1])
    return rows


def _int_cell(rows: dict[str, str], label: str) -> int:
    if label not in rows:
        raise ReportError(f"missing required row '{label}'")
    cell = rows[label].replace(",", "")
    try:
        return int(float(cell))
    except ValueError as exc:
        raise ReportError(f"bad integer in row '{label}': {rows[label]!r}") from exc


def _float_cell(rows: dict[str, str], label: str) -> float:
    if label not in rows:
        raise ReportError(f"missing required row '{label}'")
    cell = rows[label].replace(",", "")
    try:
        value = float(cell)
    except ValueError as exc:
        raise ReportError(f"bad number in row '{label}': {rows[label]!r}") from exc
    if not math.isfinite(value):
        raise ReportError(f"non-finite number in row '{label}'")
    return value


_UTIL_ROWS = {
    "lut": "Slice LUTs",
    "ff": "Slice Registers",
    "bram": "Block RAM Tile",
    "dsp": "DSPs",
    "io": "Bonded IOB",
}


def parse_utilization(text: str) -> UtilizationReport:
    rows = _table_rows(text)
    return UtilizationReport(**{k: _int_cell(rows, label) for k, label in _UTIL_ROWS.items()})


def write_utilization(report: UtilizationReport) -> str:
    body = [
        ("Site Type", "Used"),
        (_UTIL_ROWS["lut"], str(report.lut)),
        (_UTIL_ROWS["ff"], str(report.ff)),
        (_UTIL_ROWS["bram"], str(report.bram)),
        (_UTIL_ROWS["dsp"], str(report.dsp)),
        (_UTIL_ROWS["io"], str(report.io)),
    ]
    return _render_table(body)


_TIMING_ROWS = {
    "data_path_ns": "Data Path Delay",
    "logic_ns": "Logic Delay",
    "route_ns": "Route Delay",
    "achieved_period_ns": "Achieved Period",
}


def parse_timing(text: str) -> TimingReport:
    rows = _table_rows(text)
    return TimingReport(**{k: _float_cell(rows, label) for k, label in _TIMING_ROWS.items()})


def write_timing(report: TimingReport) -> str:
    body = [("Metric", "Value (ns)")] + [
        (label, f"{getattr(report, attr):.4f}") for attr, label in _TIMING_ROWS.items()
    ]
    return _render_table(body)


_POWER_ROWS = {
    "total_w": "Total On-Chip Power",
    "dynamic_w": "Dynamic",
    "static_w": "Device Static",
}


def parse_power(text: str) -> PowerReport:
    rows = _table_rows(text)
    return PowerReport(**{k: _float_cell(rows, label) for k, label in _POWER_ROWS.items()})


def write_power(report: PowerReport) -> str:
    body = [("Metric", "Value (W)")] + [
        (label, f"{getattr(report, attr):.4f}") for attr, label in _POWER_ROWS.items()
    ]
    return _render_table(body)


def _render_table(rows: list[tuple[str, str]]) -> str:
    width0 = max(len(r[0]) for r in rows)
    width1 = max(len(r[1]) for r in rows)
    sep = f"+{'-' * (width0 + 2)}+{'-' * (width1 + 2)}+"
    lines = [sep]
    for i, (a, b) in enumerate(rows):
        lines.append(f"| {a:<{width0}} | {b:>{width1}} |")
        if i == 0:
            lines.append(sep)
    lines.append(sep)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Log digests
# ---------------------------------------------------------------------------

_LOG_LINE_RE = re.compile(r"^(ERROR|CRITICAL WARNING):\s*(\[[^\]]*\])?\s*(.*)$")
_LOCATION_RE = re.compile(r"\[([^\[\]]+:\d+)\]\s*$")


def scan_log(text: str) -> LogDigest:
    """Collect ERROR and CRITICAL WARNING lines, each with a trailing
    context line when the next line is indented continuation text."""
    errors: list[LogEntry] = []
    warnings: list[LogEntry] = []
    lines = text.splitlines()
    for i, line in enumerate(lines):
        m = _LOG_LINE_RE.match(line.strip())
        if not m:
            continue
        severity, code, message = m.group(1), m.group(2) or "", m.group(3)
        location = None
        loc = _LOCATION_RE.search(message)
        if loc:
            location = loc.group(1)
            message = message[: loc.start()].rstrip()
        if i + 1 < len(lines) and lines[i + 1].startswith((" ", "\t")) and lines[i + 1].strip():
            message = f"{message} | {lines[i + 1].strip()}"
        entry = LogEntry(code=code.strip("[]"), message=message, location=location)
        if severity == "ERROR":
            errors.append(entry)
        else:
            warnings.append(entry)
    return LogDigest(tuple(errors), tuple(warnings))


def write_log(digest: LogDigest) -> str:
    lines = []
    for entry in digest.errors:
        loc = f" [{entry.location}]" if entry.location else ""
        code = f"[{entry.code}] " if entry.code else ""
        lines.append(f"ERROR: {code}{entry.message}{loc}")
    for entry in digest.critical_warnings:
        loc = f" [{entry.location}]" if entry.location else ""
        code = f"[{entry.code}] " if entry.code else ""
        lines.append(f"CRITICAL WARNING: {code}{entry.message}{loc}")
    return "\n".join(lines) + ("\n" if lines else "")
