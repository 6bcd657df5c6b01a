"""External batch adapter: spawn a tool process and collect its outputs.

The command template is rendered with {workspace} and {script} and run
once; stage outcomes are derived from STAGE:<name>:PASS|FAIL markers in
the captured output (the generated TCL and driver scripts emit them). A
nonzero exit or a timeout fails the first unmarked stage; later stages
are skipped.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import time
from pathlib import Path

from .base import AdapterSpec, ConfigurationError, RunResult, StageOutcome

_MARKER_RE = re.compile(r"STAGE:([a-z]+):(PASS|FAIL)")


class ExternalAdapter:
    def __init__(self, spec: AdapterSpec):
        if spec.mode != "external":
            raise ValueError("ExternalAdapter requires mode=external")
        self.spec = spec

    def _script_path(self, workspace: Path) -> Path:
        tcl = workspace / "run.tcl"
        return tcl if tcl.exists() else workspace / "driver.sh"

    def run(self, workspace: Path) -> RunResult:
        workspace = Path(workspace)
        command = self.spec.command_template.format(
            workspace=str(workspace), script=str(self._script_path(workspace))
        )
        argv = shlex.split(command)
        start = time.monotonic()
        timed_out = False
        try:
            proc = subprocess.run(
                argv,
                cwd=workspace,
                capture_output=True,
                text=True,
                timeout=self.spec.timeout_s,
            )
            stdout, stderr, returncode = proc.stdout, proc.stderr, proc.returncode
        except FileNotFoundError as exc:
            raise ConfigurationError(f"tool executable not found: {argv[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            stdout = (exc.stdout or b"").decode() if isinstance(exc.stdout, bytes) else (exc.stdout or "")
            stderr = (exc.stderr or b"").decode() if isinstance(exc.stderr, bytes) else (exc.stderr or "")
            returncode = None
            timed_out = True
        elapsed = time.monotonic() - start

        log_text = stdout + ("\n" + stderr if stderr else "")
        (workspace / "run.log").write_text(log_text, encoding="utf-8")

        marks: dict[str, str] = {}
        for m in _MARKER_RE.finditer(log_text):
            marks.setdefault(m.group(1), m.group(2))

        outcomes: list[StageOutcome] = []
        failed = False
        for i, stage in enumerate(self.spec.stages):
            if failed:
                outcomes.append(StageOutcome(stage, "skipped"))
                continue
            mark = marks.get(stage)
            is_last_marked = all(marks.get(s) is None for s in self.spec.stages[i + 1 :])
            duration = elapsed if is_last_marked else 0.0
            if mark == "PASS":
                outcomes.append(StageOutcome(stage, "pass", duration))
            elif mark == "FAIL":
                outcomes.append(StageOutcome(stage, "fail", duration, "tool reported failure"))
                failed = True
            else:
                note = "timeout" if timed_out else f"exit code {returncode}, stage not reached"
                outcomes.append(StageOutcome(stage, "fail", duration, note))
                failed = True
        if not failed and returncode not in (0, None):
            # All stages marked PASS but the process still failed: demote the
            # last stage so the exit status is never silently ignored.
            last = outcomes[-1]
            outcomes[-1] = StageOutcome(last.stage, "fail", last.duration_s, f"exit code {returncode}")

        report_dir = workspace / "reports"
        report_files = {}
        if report_dir.is_dir():
            report_files = {p.name: p for p in sorted(report_dir.iterdir()) if p.is_file()}
        return RunResult(
            stage_outcomes=tuple(outcomes), report_files=report_files, log_text=log_text
        )
