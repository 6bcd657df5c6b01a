"""Batch TCL script generation for the FPGA tool flow."""

from __future__ import annotations

from ..sourceprep import SourceBundle
from .base import STAGES


def gen_fpga_tcl(
    sources: SourceBundle,
    constraints: str,
    part_id: str,
    top_module: str,
    stages: tuple[str, ...],
) -> str:
    """Deterministic batch script covering the requested stages.

    Emits source reads, per-stage commands with STAGE:<name>:PASS markers,
    and report dumps for utilization, timing, and power under reports/.
    """
    for stage in stages:
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}")

    design_files = sorted(n for n in sources.files if n.endswith((".v", ".sv")))
    lines = [
        "# generated batch script",
        f"set PART {part_id}",
        f"set TOP {top_module}",
        "file mkdir reports",
    ]
    for name in design_files:
        lines.append(f"read_verilog {name}")
    if constraints:
        lines.append("read_xdc constraints.xdc")

    if "instantiate" in stages:
        lines += [
            "# stage: instantiate",
            "link_design -name $TOP",
            'puts "STAGE:instantiate:PASS"',
        ]
    if "simulate" in stages:
        lines += [
            "# stage: simulate",
            "launch_simulation -top ${TOP}_tb",
            "run all",
            'puts "STAGE:simulate:PASS"',
        ]
    if "synthesize" in stages:
        lines += [
            "# stage: synthesize",
            "synth_design -top $TOP -part $PART",
            "report_utilization -file reports/utilization.rpt",
            'puts "STAGE:synthesize:PASS"',
        ]
    if "implement" in stages:
        lines += [
            "# stage: implement",
            "opt_design",
            "place_design",
            "route_design",
            "report_utilization -file reports/utilization.rpt",
            "report_timing_summary -file reports/timing.rpt",
            "report_power -file reports/power.rpt",
            'puts "STAGE:implement:PASS"',
        ]
    return "\n".join(lines) + "\n"
