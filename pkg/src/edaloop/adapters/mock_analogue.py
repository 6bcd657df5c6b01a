"""Deterministic analogue evaluator: closed-form small-signal OTA model.

Models a five-transistor OTA (nmos differential pair, pmos loads, nmos
tail source) with a square-law tail current, a dominant pole set by the
output resistance and load capacitor, and a fixed second pole. Constants
approximate a generic 180 nm-class process; they are a stand-in model,
not any foundry's kit:

    k_n = 200 uA/V^2, k_p = 80 uA/V^2, V_th = 0.7 V,
    lambda_n = lambda_p = 0.05 1/V, second pole = 50 MHz.

Closed form:
    I_tail = 0.5 * k_n * (W_tail/L_tail) * (V_bias - V_th)^2
    g_m    = sqrt(2 * k_n * (W_diff/L_diff) * I_tail/2)
    R_out  = 1 / ((lambda_n + lambda_p) * I_tail/2)
    A_0    = g_m * R_out
    p_1    = 1 / (2*pi*R_out*C_L),    power = VDD * I_tail

The AC trace is the two-pole response sampled on a 401-point log grid
from 1 Hz to 1 GHz. The unity-gain frequency solves
(1+(f/p1)^2)(1+(f/f2)^2) = A0^2 exactly (quadratic in f^2).
"""

from __future__ import annotations

import math
import time
from pathlib import Path

import numpy as np

from .. import reports
from ..netlist import ParseError, parse_netlist
from .base import (
    AdapterSpec,
    DegenerateBiasError,
    EvalError,
    RunResult,
    StageOutcome,
    WaveTrace,
    WaveformSet,
)
from .workspace import read_manifest

K_N = 200e-6
K_P = 80e-6
V_TH = 0.7
LAMBDA_N = 0.05
LAMBDA_P = 0.05
SECOND_POLE_HZ = 50e6

AC_POINTS = 401
AC_START_HZ = 1.0
AC_STOP_HZ = 1e9

REQUIRED_PARAMS = (
    "W_diff",
    "L_diff",
    "W_load",
    "L_load",
    "W_tail",
    "L_tail",
    "V_bias",
    "VDD",
    "C_L",
)


def mock_analogue_eval(params: dict[str, float]) -> tuple[WaveformSet, dict[str, float]]:
    """Evaluate the OTA model; returns AC traces plus closed-form metrics.

    Raises DegenerateBiasError when V_bias <= V_th (subthreshold operation
    is rejected) and EvalError for missing or non-physical parameters.
    """
    missing = [k for k in REQUIRED_PARAMS if k not in params]
    if missing:
        raise EvalError(f"missing parameters: {', '.join(missing)}")
    w_diff, l_diff = params["W_diff"], params["L_diff"]
    w_tail, l_tail = params["W_tail"], params["L_tail"]
    w_load, l_load = params["W_load"], params["L_load"]
    v_bias, vdd, c_l = params["V_bias"], params["VDD"], params["C_L"]

    for name, dim in (
        ("W_diff", w_diff),
        ("L_diff", l_diff),
        ("W_load", w_load),
        ("L_load", l_load),
        ("W_tail", w_tail),
        ("L_tail", l_tail),
        ("C_L", c_l),
    ):
        if dim <= 0:
            raise EvalError(f"{name} must be positive")
    if v_bias <= V_TH:
        raise DegenerateBiasError(
            f"V_bias {v_bias:.3f} V is at or below V_th {V_TH} V (subthreshold)"
        )
    if v_bias >= vdd:
        raise EvalError("V_bias must stay below VDD")

    i_tail = 0.5 * K_N * (w_tail / l_tail) * (v_bias - V_TH) ** 2
    i_branch = i_tail / 2.0
    g_m = math.sqrt(2.0 * K_N * (w_diff / l_diff) * i_branch)
    r_out = 1.0 / ((LAMBDA_N + LAMBDA_P) * i_branch)
    a0 = g_m * r_out
    p1 = 1.0 / (2.0 * math.pi * r_out * c_l)
    power = vdd * i_tail

    freq = np.logspace(math.log10(AC_START_HZ), math.log10(AC_STOP_HZ), AC_POINTS)
    h = a0 / ((1 + 1j * freq / p1) * (1 + 1j * freq / SECOND_POLE_HZ))
    mag_db = 20.0 * np.log10(np.abs(h))
    phase_deg = np.degrees(np.angle(h))

    waveforms = WaveformSet(
        {
            "ac_mag_db": WaveTrace("frequency", "Hz", tuple(zip(freq.tolist(), mag_db.tolist()))),
            "ac_phase_deg": WaveTrace(
                "frequency", "Hz", tuple(zip(freq.tolist(), phase_deg.tolist()))
            ),
        }
    )

    metrics = {
        "dc_gain_db": 20.0 * math.log10(a0),
        "power_w": power,
        "tail_current_a": i_tail,
        "v_bias": v_bias,
    }
    ugb = _unity_gain_freq(a0, p1, SECOND_POLE_HZ)
    if ugb is not None:
        metrics["ugb_hz"] = ugb
        pm = 180.0 - math.degrees(math.atan(ugb / p1)) - math.degrees(
            math.atan(ugb / SECOND_POLE_HZ)
        )
        metrics["phase_margin_deg"] = pm
    return waveforms, metrics


def _unity_gain_freq(a0: float, p1: float, p2: float) -> float | None:
    """Exact |H| = 1 crossing of the two-pole response, None when A0 <= 1."""
    if a0 <= 1.0:
        return None
    a = 1.0 / (p1 * p1 * p2 * p2)
    b = 1.0 / (p1 * p1) + 1.0 / (p2 * p2)
    c = 1.0 - a0 * a0
    u = (-b + math.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    return math.sqrt(u)


class AnalogueMockAdapter:
    """Runs the closed-form OTA model over a prepared workspace.

    The deck's .param directives provide the model inputs; instantiate
    covers parsing and parameter extraction, simulate the evaluation. The
    simulator's own metric values are written to reports/metrics.txt.
    """

    def __init__(self, spec: AdapterSpec):
        self.spec = spec

    def run(self, workspace: Path) -> RunResult:
        workspace = Path(workspace)
        manifest = read_manifest(workspace)
        design = _design_file(workspace, manifest)

        t0 = time.monotonic()
        try:
            netlist = parse_netlist(design.read_text(encoding="utf-8"), "spectre_like")
            params = netlist.params()
            missing = [k for k in REQUIRED_PARAMS if k not in params]
            if missing:
                raise EvalError(f"deck is missing .param values: {', '.join(missing)}")
        except (ParseError, EvalError, ValueError) as exc:
            log = f"instantiate failed: {exc}\n"
            return RunResult(
                stage_outcomes=(
                    StageOutcome("instantiate", "fail", time.monotonic() - t0, str(exc)),
                    StageOutcome("simulate", "skipped"),
                ),
                log_text=log,
            )
        t_inst = time.monotonic() - t0

        t1 = time.monotonic()
        try:
            waveforms, metrics = mock_analogue_eval(params)
        except EvalError as exc:
            log = f"instantiate ok\nsimulate failed: {exc}\n"
            return RunResult(
                stage_outcomes=(
                    StageOutcome("instantiate", "pass", t_inst),
                    StageOutcome("simulate", "fail", time.monotonic() - t1, str(exc)),
                ),
                log_text=log,
            )

        entries = {k: (v, _metric_unit(k)) for k, v in metrics.items()}
        metrics_path = workspace / "reports" / "metrics.txt"
        metrics_path.write_text(reports.write_metrics(entries), encoding="utf-8")
        return RunResult(
            stage_outcomes=(
                StageOutcome("instantiate", "pass", t_inst),
                StageOutcome("simulate", "pass", time.monotonic() - t1),
            ),
            report_files={"metrics.txt": metrics_path},
            waveforms=waveforms,
            log_text="instantiate ok\nsimulate ok\n",
        )


def _metric_unit(key: str) -> str:
    return {
        "dc_gain_db": "dB",
        "ugb_hz": "Hz",
        "phase_margin_deg": "deg",
        "power_w": "W",
        "tail_current_a": "A",
        "v_bias": "V",
    }.get(key, "")


def _design_file(workspace: Path, manifest: dict) -> Path:
    for name in manifest["files"]:
        if name.endswith((".scs", ".net", ".sp", ".cir")):
            return workspace / name
    raise EvalError("workspace has no netlist source file")
