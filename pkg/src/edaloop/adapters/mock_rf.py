"""Deterministic RF evaluator: microstrip patch reflection model.

The netlist must contain a substrate block (Er, H), at least one MLIN
acting as the radiating patch, at least one MLIN feed, a Term, and an
S-parameter sweep directive. The patch is the MLIN whose instance name
contains "patch" (case-insensitive), falling back to the widest MLIN;
every other MLIN is a feed.

Model:
    eps_eff = (er+1)/2 + (er-1)/2 * (1 + 12*h/W)^(-1/2)
    f_res   = c / (2 * L_patch * sqrt(eps_eff))
    R_edge  = 90 * er^2/(er-1) * (L_patch/W_patch)^2
    R_in    = R_edge * cos^2(pi * inset / L_patch) / sqrt(n_feeds)
    Z_in(f) = R_in / (1 + j*Q*(f/f_res - f_res/f)),  Q = 30
    S11(f)  = 20*log10 |(Z_in - Z0)/(Z_in + Z0)|,    Z0 = 50 Ohm

The feed inset comes from an optional ``Inset`` length parameter on the
feed MLINs (the first feed by instance name wins). Doubling the feed
count scales the input resistance toward the port impedance by 1/sqrt(n).
The trace is sampled at exactly 101 points across the sweep directive's
range and floored at -60 dB.
"""

from __future__ import annotations

import math
import time
from pathlib import Path

import numpy as np

from .. import reports
from ..netlist import Component, Netlist, ParseError, parse_netlist
from .base import (
    AdapterSpec,
    EvalError,
    RunResult,
    StageOutcome,
    WaveTrace,
    WaveformSet,
)
from .workspace import read_manifest

C0 = 299792458.0
Z0_OHM = 50.0
QUALITY_FACTOR = 30.0
SWEEP_POINTS = 101
S11_FLOOR_DB = -60.0


def effective_permittivity(er: float, h_m: float, w_m: float) -> float:
    """Standard quasi-static microstrip effective permittivity (W/h >= 1)."""
    return (er + 1.0) / 2.0 + (er - 1.0) / 2.0 / math.sqrt(1.0 + 12.0 * h_m / w_m)


def patch_resonance_hz(er: float, h_m: float, w_m: float, l_m: float) -> float:
    return C0 / (2.0 * l_m * math.sqrt(effective_permittivity(er, h_m, w_m)))


def edge_resistance_ohm(er: float, w_m: float, l_m: float) -> float:
    return 90.0 * er * er / (er - 1.0) * (l_m / w_m) ** 2


def input_resistance_ohm(
    er: float, w_m: float, l_m: float, inset_m: float, n_feeds: int
) -> float:
    r_edge = edge_resistance_ohm(er, w_m, l_m)
    taper = math.cos(math.pi * inset_m / l_m) ** 2
    return r_edge * taper / math.sqrt(n_feeds)


def s11_db(r_in: float, f_hz: np.ndarray, f_res_hz: float) -> np.ndarray:
    beta = QUALITY_FACTOR * (f_hz / f_res_hz - f_res_hz / f_hz)
    z_in = r_in / (1.0 + 1j * beta)
    gamma = np.abs((z_in - Z0_OHM) / (z_in + Z0_OHM))
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(gamma)
    return np.maximum(db, S11_FLOOR_DB)


def mock_rf_eval(netlist: Netlist) -> WaveformSet:
    """Evaluate the patch model over the netlist's S-parameter sweep."""
    substrate = next((d for d in netlist.directives if d.dtype == "substrate"), None)
    if substrate is None:
        raise EvalError("netlist has no substrate block")
    sweep_dir = next((d for d in netlist.directives if d.dtype == "sparams"), None)
    if sweep_dir is None or sweep_dir.sweep is None:
        raise EvalError("netlist has no S-parameter sweep directive")
    if not any(c.kind == "Term" for c in netlist.components):
        raise EvalError("netlist has no Term port")

    er = _param(substrate, "Er")
    h_m = _param(substrate, "H")
    if er <= 1.0 or h_m <= 0:
        raise EvalError("substrate needs Er > 1 and H > 0")

    mlins = [c for c in netlist.components if c.kind == "MLIN"]
    if not mlins:
        raise EvalError("netlist has no MLIN elements")
    patch = _pick_patch(mlins)
    feeds = sorted(
        (c for c in mlins if c is not patch), key=lambda c: c.instance_name
    )
    if not feeds:
        raise EvalError("netlist has no feed line")

    w_m = _param(patch, "W")
    l_m = _param(patch, "L")
    if w_m <= 0 or l_m <= 0:
        raise EvalError("patch needs positive W and L")
    inset_pv = feeds[0].params.get("Inset")
    inset_m = inset_pv.value if inset_pv is not None and inset_pv.value else 0.0
    if not (0 <= inset_m < l_m / 2):
        raise EvalError("feed inset must sit within half the patch length")

    f_res = patch_resonance_hz(er, h_m, w_m, l_m)
    r_in = input_resistance_ohm(er, w_m, l_m, inset_m, len(feeds))

    start, stop = sweep_dir.sweep.start, sweep_dir.sweep.stop
    if not (0 < start < stop):
        raise EvalError("sweep range must be positive and increasing")
    freq = np.linspace(start, stop, SWEEP_POINTS)
    db = s11_db(r_in, freq, f_res)
    trace = WaveTrace("frequency", "Hz", tuple(zip(freq.tolist(), db.tolist())))
    return WaveformSet({"s11_db": trace})


def _param(item, name: str) -> float:
    pv = item.params.get(name)
    if pv is None or pv.value is None:
        raise EvalError(f"{getattr(item, 'instance_name', item.name)} is missing {name}")
    return pv.value


def _pick_patch(mlins: list[Component]) -> Component:
    named = [c for c in mlins if "patch" in c.instance_name.lower()]
    if named:
        return named[0]
    def width(c: Component) -> float:
        pv = c.params.get("W")
        return pv.value if pv and pv.value is not None else 0.0
    return max(mlins, key=width)


class RfMockAdapter:
    """Runs the patch reflection model over a prepared workspace."""

    def __init__(self, spec: AdapterSpec):
        self.spec = spec

    def run(self, workspace: Path) -> RunResult:
        workspace = Path(workspace)
        manifest = read_manifest(workspace)
        design = _design_file(workspace, manifest)

        t0 = time.monotonic()
        try:
            netlist = parse_netlist(design.read_text(encoding="utf-8"), "ads_like")
        except ParseError as exc:
            return RunResult(
                stage_outcomes=(
                    StageOutcome("instantiate", "fail", time.monotonic() - t0, str(exc)),
                    StageOutcome("simulate", "skipped"),
                ),
                log_text=f"instantiate failed: {exc}\n",
            )
        t_inst = time.monotonic() - t0

        t1 = time.monotonic()
        try:
            waveforms = mock_rf_eval(netlist)
        except EvalError as exc:
            return RunResult(
                stage_outcomes=(
                    StageOutcome("instantiate", "pass", t_inst),
                    StageOutcome("simulate", "fail", time.monotonic() - t1, str(exc)),
                ),
                log_text=f"instantiate ok\nsimulate failed: {exc}\n",
            )

        trace = waveforms.traces["s11_db"]
        points = trace.real_points()
        s11_values = [y for _x, y in points]
        imin = min(range(len(points)), key=lambda i: s11_values[i])
        entries = {
            "f_res_hz": (points[imin][0], "Hz"),
            "s11_min_db": (s11_values[imin], "dB"),
        }
        metrics_path = workspace / "reports" / "metrics.txt"
        metrics_path.write_text(reports.write_metrics(entries), encoding="utf-8")
        csv_path = workspace / "reports" / "s11.csv"
        from ..analysis import trace_csv

        csv_path.write_text(trace_csv(points, "frequency_hz", "s11_db"), encoding="utf-8")
        return RunResult(
            stage_outcomes=(
                StageOutcome("instantiate", "pass", t_inst),
                StageOutcome("simulate", "pass", time.monotonic() - t1),
            ),
            report_files={"metrics.txt": metrics_path, "s11.csv": csv_path},
            waveforms=waveforms,
            log_text="instantiate ok\nsimulate ok\n",
        )


def _design_file(workspace: Path, manifest: dict) -> Path:
    for name in manifest["files"]:
        if name.endswith((".net", ".ckt", ".ads")):
            return workspace / name
    raise EvalError("workspace has no netlist source file")
