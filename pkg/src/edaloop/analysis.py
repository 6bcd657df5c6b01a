"""Derived-metric math over simulation traces and benchmark logs.

AC metrics (DC gain, unity-gain bandwidth, phase margin), transient
propagation delays, VTC noise margins, reflection-coefficient summaries,
Pareto fronts, power-delay product, pass-rate matrices, and order
statistics. Interpolation is linear in log-frequency for AC and S11
traces, linear in time for transients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class DelayError(Exception):
    """Output trace never crosses the 50% threshold."""


class MarginError(Exception):
    """VTC lacks the two unity-slope points needed for noise margins."""


class SummaryError(Exception):
    """Requested frequency falls outside the trace sweep."""


class AggregationError(Exception):
    """Benchmark logs are inconsistent (unequal runs per problem)."""


class StatsError(Exception):
    """Summary statistics require a non-empty sample."""


@dataclass(frozen=True)
class AcMetrics:
    """Gain/bandwidth/stability summary of one AC magnitude+phase pair.

    ``ugb_hz`` is absent when the magnitude never crosses 0 dB, and
    ``pm_deg`` is present exactly when ``ugb_hz`` is. ``multiple_crossings``
    flags peaking traces where the first (lowest-frequency) crossing was
    used.
    """

    dc_gain_db: float
    ugb_hz: Optional[float] = None
    pm_deg: Optional[float] = None
    multiple_crossings: bool = False

    def __post_init__(self) -> None:
        if (self.ugb_hz is None) != (self.pm_deg is None):
            raise ValueError("pm_deg must be present exactly when ugb_hz is")
        if self.ugb_hz is not None and self.ugb_hz <= 0:
            raise ValueError("ugb_hz must be positive")


@dataclass(frozen=True)
class NoiseMargins:
    voh: float
    vol: float
    vih: float
    vil: float
    nmh: float
    nml: float

    def __post_init__(self) -> None:
        if self.vil > self.vih + 1e-12:
            raise ValueError("vil must not exceed vih")


@dataclass(frozen=True)
class ParetoPoint:
    power_w: float
    delay_s: float
    label: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.power_w) and math.isfinite(self.delay_s)):
            raise ValueError("pareto coordinates must be finite")
        if self.power_w <= 0 or self.delay_s <= 0:
            raise ValueError("pareto coordinates must be positive")


@dataclass(frozen=True)
class PassRateMatrix:
    """successes out of runs_per_problem per (category, problem_id, stage)."""

    cells: dict[tuple[str, int, str], int]
    runs_per_problem: int

    def __post_init__(self) -> None:
        if self.runs_per_problem < 1:
            raise ValueError("runs_per_problem must be positive")
        for key, successes in self.cells.items():
            if not (0 <= successes <= self.runs_per_problem):
                raise ValueError(f"cell {key} out of range: {successes}")


Trace = Sequence[tuple[float, float]]


def _as_xy(trace: Trace) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(trace, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("trace must be a sequence of (x, y) pairs")
    x, y = arr[:, 0], arr[:, 1]
    if np.any(np.diff(x) <= 0):
        raise ValueError("trace x values must be strictly increasing")
    return x, y


def ac_metrics(mag_db_trace: Trace, phase_deg_trace: Trace) -> AcMetrics:
    """Extract DC gain, UGB, and phase margin from an AC sweep.

    The traces must share a log-spaced frequency grid of at least 50
    points. DC gain is the magnitude at the lowest frequency; the 0 dB
    crossing is located by linear interpolation in log-frequency; phase
    margin is 180 degrees plus the interpolated phase there.
    """
    freq, mag = _as_xy(mag_db_trace)
    freq_p, phase = _as_xy(phase_deg_trace)
    if len(freq) != len(freq_p) or not np.allclose(freq, freq_p):
        raise ValueError("magnitude and phase traces must share the frequency grid")
    if len(freq) < 50:
        raise ValueError("AC traces need at least 50 points")
    if freq[0] <= 0:
        raise ValueError("frequencies must be positive")

    dc_gain_db = float(mag[0])
    crossings = np.nonzero((mag[:-1] > 0) & (mag[1:] <= 0))[0]
    if len(crossings) == 0:
        return AcMetrics(dc_gain_db=dc_gain_db)

    logf = np.log10(freq)
    i = int(crossings[0])
    t = mag[i] / (mag[i] - mag[i + 1])
    log_ugb = logf[i] + t * (logf[i + 1] - logf[i])
    ugb = float(10.0 ** log_ugb)
    pm = 180.0 + float(np.interp(log_ugb, logf, phase))
    return AcMetrics(
        dc_gain_db=dc_gain_db,
        ugb_hz=ugb,
        pm_deg=pm,
        multiple_crossings=len(crossings) > 1,
    )


def transient_delays(
    v_in_trace: Trace, v_out_trace: Trace, vdd: float
) -> dict[str, float]:
    """Propagation delays at the 50% supply crossing.

    tphl is measured from an input rising edge to the next output falling
    edge, tplh from input falling to output rising; worst is their max.
    Crossing times are linearly interpolated in time.
    """
    t_in, v_in = _as_xy(v_in_trace)
    t_out, v_out = _as_xy(v_out_trace)
    half = 0.5 * vdd

    in_rise = _crossings(t_in, v_in, half, rising=True)
    in_fall = _crossings(t_in, v_in, half, rising=False)
    out_rise = _crossings(t_out, v_out, half, rising=True)
    out_fall = _crossings(t_out, v_out, half, rising=False)
    if not out_rise and not out_fall:
        raise DelayError("output never crosses 50% of VDD")

    tphl = _edge_delay(in_rise, out_fall)
    tplh = _edge_delay(in_fall, out_rise)
    if tphl is None and tplh is None:
        raise DelayError("no output edge follows an input edge")
    out: dict[str, float] = {}
    if tphl is not None:
        out["tphl"] = tphl
    if tplh is not None:
        out["tplh"] = tplh
    out["worst"] = max(out.values())
    return out


def _crossings(t: np.ndarray, v: np.ndarray, level: float, rising: bool) -> list[float]:
    out = []
    for i in range(len(v) - 1):
        a, b = v[i], v[i + 1]
        if rising and a < level <= b or (not rising and a > level >= b):
            frac = (level - a) / (b - a)
            out.append(float(t[i] + frac * (t[i + 1] - t[i])))
    return out


def _edge_delay(in_edges: list[float], out_edges: list[float]) -> Optional[float]:
    delays = []
    for te in in_edges:
        later = [to for to in out_edges if to >= te]
        if later:
            delays.append(later[0] - te)
    return max(delays) if delays else None


def noise_margins(vtc_trace: Trace, vdd: float) -> NoiseMargins:
    """Noise margins from a DC transfer curve.

    vil and vih sit where the slope (central finite differences) crosses
    -1; voh is the output at v_in = 0 and vol the output at v_in = vdd.
    Raises MarginError when the curve lacks two unity-slope points.
    """
    vin, vout = _as_xy(vtc_trace)
    if np.any(np.diff(vout) > 1e-12):
        raise ValueError("VTC must be monotone non-increasing")
    voh = float(vout[0])
    vol = float(vout[-1])

    slope = np.gradient(vout, vin)
    # Slope runs 0 -> very negative -> 0; find the first and last -1 crossing.
    below = slope <= -1.0
    if not below.any():
        raise MarginError("VTC slope never reaches -1")
    idx = np.nonzero(below)[0]
    first, last = int(idx[0]), int(idx[-1])
    if first == 0 or last == len(vin) - 1:
        raise MarginError("unity-slope points fall on the trace boundary")

    vil = _interp_slope(vin, slope, first - 1, first)
    vih = _interp_slope(vin, slope, last + 1, last)
    nmh = voh - vih
    nml = vil - vol
    return NoiseMargins(voh=voh, vol=vol, vih=vih, vil=vil, nmh=nmh, nml=nml)


def _interp_slope(vin: np.ndarray, slope: np.ndarray, i_out: int, i_in: int) -> float:
    s0, s1 = slope[i_out], slope[i_in]
    if s0 == s1:
        return float(vin[i_in])
    frac = (-1.0 - s0) / (s1 - s0)
    return float(vin[i_out] + frac * (vin[i_in] - vin[i_out]))


def s11_summary(s11_trace: Trace, f_target: float) -> dict:
    """Summarize a reflection-coefficient trace (dB over Hz).

    Returns the value interpolated at the target frequency (linear in
    log-f), the global minimum and its frequency, and the -10 dB band
    edges found by crossings.
    """
    freq, s11 = _as_xy(s11_trace)
    if not (freq[0] <= f_target <= freq[-1]):
        raise SummaryError(
            f"target {f_target:.6g} Hz outside sweep [{freq[0]:.6g}, {freq[-1]:.6g}]"
        )
    logf = np.log10(freq)
    at_target = float(np.interp(math.log10(f_target), logf, s11))
    imin = int(np.argmin(s11))
    band = _band_edges(freq, s11, level=-10.0)
    return {
        "s11_at_target_db": at_target,
        "s11_min_db": float(s11[imin]),
        "f_res_hz": float(freq[imin]),
        "band_edges_hz": band,
    }


def _band_edges(freq: np.ndarray, s11: np.ndarray, level: float) -> list[tuple[float, float]]:
    bands: list[tuple[float, float]] = []
    inside = s11[0] <= level
    start = freq[0] if inside else None
    for i in range(len(s11) - 1):
        a, b = s11[i], s11[i + 1]
        if not inside and a > level >= b:
            frac = (level - a) / (b - a)
            start = float(freq[i] + frac * (freq[i + 1] - freq[i]))
            inside = True
        elif inside and a <= level < b:
            frac = (level - a) / (b - a)
            end = float(freq[i] + frac * (freq[i + 1] - freq[i]))
            bands.append((float(start), end))
            inside = False
    if inside:
        bands.append((float(start), float(freq[-1])))
    return bands


def pareto_front(points: Sequence[ParetoPoint]) -> list[ParetoPoint]:
    """Non-dominated subset under (power, delay) minimization.

    A point is dominated when another is no worse in both coordinates and
    strictly better in at least one. Output is sorted by power ascending
    (delay as tiebreak) and is always an antichain.
    """
    ordered = sorted(points, key=lambda p: (p.power_w, p.delay_s))
    front: list[ParetoPoint] = []
    best_delay = math.inf
    prev_power = None
    for p in ordered:
        if p.delay_s < best_delay or (p.delay_s == best_delay and p.power_w == prev_power):
            front.append(p)
            best_delay = p.delay_s
            prev_power = p.power_w
    return front


def dominates(a: ParetoPoint, b: ParetoPoint) -> bool:
    """True when a is no worse than b in both coordinates, better in one."""
    return (
        a.power_w <= b.power_w
        and a.delay_s <= b.delay_s
        and (a.power_w < b.power_w or a.delay_s < b.delay_s)
    )


def pdp(power_w: float, delay_s: float) -> float:
    """Power-delay product in joules."""
    if power_w <= 0 or delay_s <= 0:
        raise ValueError("pdp needs positive power and delay")
    return power_w * delay_s


def pass_rate_matrix(
    records: Iterable, stage: str
) -> tuple[PassRateMatrix, float]:
    """Tally per-problem pass counts and the at-least-one-pass percentage.

    ``records`` are objects exposing ``category``, ``problem_id``, and
    ``stage_passed(stage) -> bool`` (benchmark run logs implement this).
    Every problem must appear the same number of times or
    AggregationError is raised.
    """
    counts: dict[tuple[str, int], int] = {}
    totals: dict[tuple[str, int], int] = {}
    for rec in records:
        key = (rec.category, rec.problem_id)
        totals[key] = totals.get(key, 0) + 1
        if rec.stage_passed(stage):
            counts[key] = counts.get(key, 0) + 1
    if not totals:
        raise AggregationError("no records to aggregate")
    runs = set(totals.values())
    if len(runs) != 1:
        raise AggregationError(f"inconsistent runs per problem: {sorted(runs)}")
    runs_per_problem = runs.pop()
    cells = {
        (cat, pid, stage): counts.get((cat, pid), 0) for cat, pid in sorted(totals)
    }
    matrix = PassRateMatrix(cells=cells, runs_per_problem=runs_per_problem)
    passed = sum(1 for v in cells.values() if v >= 1)
    pct = 100.0 * passed / len(cells)
    return matrix, pct


def summary_stats(samples: Sequence[float]) -> dict[str, float]:
    """Mean, min, max, and inclusive linear-interpolated quartiles."""
    if len(samples) == 0:
        raise StatsError("empty sample")
    arr = np.asarray(samples, dtype=float)
    q25, q50, q75 = np.percentile(arr, [25, 50, 75], method="linear")
    return {
        "mean": float(arr.mean()),
        "min": float(arr.min()),
        "max": float(arr.max()),
        "p25": float(q25),
        "p50": float(q50),
        "p75": float(q75),
    }


# ---------------------------------------------------------------------------
# Plot-ready CSV emission (x,y per line)
# ---------------------------------------------------------------------------


def trace_csv(trace: Trace, x_name: str = "x", y_name: str = "y") -> str:
    lines = [f"{x_name},{y_name}"]
    for x, y in trace:
        lines.append(f"{x:.10g},{y:.10g}")
    return "\n".join(lines) + "\n"


def series_csv(rows: Sequence[tuple], header: Sequence[str]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def matrix_csv(matrix: PassRateMatrix) -> str:
    lines = ["category,problem_id,stage,successes,runs"]
    for (cat, pid, stage), successes in sorted(matrix.cells.items()):
        lines.append(f"{cat},{pid},{stage},{successes},{matrix.runs_per_problem}")
    return "\n".join(lines) + "\n"
