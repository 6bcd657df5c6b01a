"""Session state machine: prompt, complete, prep, validate, run, check, loop.

A session walks iterations of one design flow under a strategy: a fixed
iteration count, until-objectives-met, or interactive (pausing for human
feedback after each check). Failed iterations are recorded with a status
and fed back to the model as text; they never contribute metrics to
objective checks. Records persist as one JSON document per session,
rewritten atomically after every iteration so a crash leaves a valid
prefix.
"""

from __future__ import annotations

import json
import random
import re
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import analysis, reports
from .adapters import (
    Adapter,
    AdapterSpec,
    RunResult,
    deserialize_waveforms,
    gen_fpga_tcl,
    prepare_workspace,
    serialize_waveforms,
)
from .core import FlowKind, Objective, ObjectiveCheck, all_met, evaluate_objective
from .llm import (
    LlmConfig,
    LlmExchange,
    Message,
    Provider,
    TransportError,
    append_turn,
    complete,
    exchange_from_dict,
    exchange_to_dict,
)
from .netlist import (
    Catalog,
    ParseError,
    Violation,
    default_catalog,
    parse_netlist,
    structural,
    validate,
)
from .sourceprep import (
    ConstraintError,
    ExtractionError,
    HeaderError,
    PdkBinding,
    SourceBundle,
    bind_pdk,
    extract_code_block,
    extract_module_header,
    make_constraints,
    print_module_header,
    repair_syntax,
)

STRATEGY_KINDS = ("fixed", "until_met", "interactive")


@dataclass(frozen=True)
class Strategy:
    """Loop strategy: fixed(n), until_met(max n), or interactive(max n)."""

    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.n < 1:
            raise ValueError("strategy bound must be >= 1")


@dataclass(frozen=True)
class SweepSpec:
    """Seeded uniform parameter sweep within [low, high].

    Sampling uses Python's random.Random (MT19937) uniform draws so the
    sweep reproduces exactly for a given seed.
    """

    parameter: str
    low: float
    high: float
    count: int
    seed: int

    def __post_init__(self) -> None:
        if self.low >= self.high:
            raise ValueError("sweep needs low < high")
        if self.count < 1:
            raise ValueError("sweep count must be >= 1")


def sample_sweep(spec: SweepSpec) -> list[float]:
    """Draw the sweep values, sorted ascending; deterministic per seed."""
    rng = random.Random(spec.seed)
    return sorted(rng.uniform(spec.low, spec.high) for _ in range(spec.count))


@dataclass(frozen=True)
class SessionConfig:
    """Everything needed to run one session."""

    flow: FlowKind
    strategy: Strategy
    adapter_spec: AdapterSpec
    llm_config: LlmConfig
    objectives: tuple[Objective, ...]
    system_prompt: str
    user_prompt: str
    session_id: str = ""
    sweep: Optional[SweepSpec] = None
    binding: Optional[PdkBinding] = None
    expected_header: Optional[str] = None
    clock_attr: Optional[str] = None
    part_id: str = "xc7z020clg400-1"
    workspace_root: str = "workspaces"
    sessions_dir: str = "sessions"

    def __post_init__(self) -> None:
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if not self.session_id:
            object.__setattr__(self, "session_id", uuid.uuid4().hex[:12])


@dataclass(frozen=True)
class SweepRow:
    """One sweep sample: parameter value plus parsed metrics (or an error)."""

    value: float
    metrics: dict[str, float] = field(default_factory=dict)
    error: str = ""


@dataclass(frozen=True)
class IterationRecord:
    """One loop cycle: exchange, prepared sources, run, and checks."""

    index: int
    exchange: LlmExchange
    sources: Optional[SourceBundle]
    violations: tuple[Violation, ...]
    run: Optional[RunResult]
    metrics: dict[str, float]
    checks: tuple[ObjectiveCheck, ...]
    status: str  # ok | failed_extraction | failed_validation | failed_run
    feedback_out: Optional[str] = None
    sweep_rows: tuple[SweepRow, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in ("ok", "failed_extraction", "failed_validation", "failed_run"):
            raise ValueError(f"bad status {self.status!r}")
        if self.sources is None and self.status != "failed_extraction":
            raise ValueError("missing sources implies failed_extraction")
        if self.run is None and self.status not in ("failed_extraction", "failed_validation"):
            raise ValueError("missing run implies an extraction or validation failure")


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    config: SessionConfig
    iterations: tuple[IterationRecord, ...]
    outcome: str  # met | exhausted | aborted

    def __post_init__(self) -> None:
        if self.outcome not in ("met", "exhausted", "aborted"):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if len(self.iterations) > self.config.strategy.n:
            raise ValueError("iteration count exceeds the strategy bound")


FeedbackSource = Callable[["SessionRecord"], Optional[str]]


def compose_feedback(
    checks: Sequence[ObjectiveCheck],
    metrics: dict[str, float],
    violations: Sequence[Violation],
    artifact: str = "netlist",
) -> str:
    """Deterministic feedback template sent back to the model.

    Objective lines carry parsed numbers only, never raw report files,
    keeping prompt growth bounded.
    """
    lines = ["Results:"]
    for check in checks:
        obj = check.objective
        target = f"{obj.comparator} {obj.target:g}"
        if check.status == "unmeasurable":
            lines.append(f"- {obj.metric}: not measured (target {target}) -> unmeasurable")
        else:
            dev = f", deviation {check.deviation_pct:+.1f}%" if check.deviation_pct is not None else ""
            lines.append(
                f"- {obj.metric}: measured {check.measured:.6g} vs target {target}"
                f" -> {check.status}{dev}"
            )
    extra = sorted(set(metrics) - {c.objective.metric for c in checks})
    for key in extra:
        lines.append(f"- {key}: {metrics[key]:.6g}")
    if violations:
        lines.append("Violations:")
        for v in violations:
            lines.append(f"- {v.kind}({v.subject}): {v.detail}")
    if checks and all_met(list(checks)):
        lines.append("All objectives met. Confirm the design or refine it further.")
    lines.append(f"Return the full corrected {artifact} in a single fenced code block.")
    return "\n".join(lines)


def substitute_param(deck_text: str, name: str, value: float) -> str:
    """Rewrite a .param assignment (name=number) with a new value."""
    pattern = re.compile(rf"\b({re.escape(name)}\s*=\s*)[^\s]+")
    new_text, count = pattern.subn(lambda m: f"{m.group(1)}{value:.9g}", deck_text, count=1)
    if count == 0:
        raise ValueError(f"deck has no parameter {name}")
    return new_text


class SessionStore:
    """One JSON document per session under a sessions directory."""

    def __init__(self, sessions_dir: str | Path):
        self.root = Path(sessions_dir)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def assets_dir(self, session_id: str) -> Path:
        d = self.root / session_id
        d.mkdir(parents=True, exist_ok=True)
        return d

    def save(self, record: SessionRecord) -> None:
        tmp = self.path(record.session_id).with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(session_record_to_dict(record), indent=1), encoding="utf-8"
        )
        tmp.replace(self.path(record.session_id))

    def load(self, session_id: str) -> dict:
        return json.loads(self.path(session_id).read_text(encoding="utf-8"))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


class SessionRunner:
    """Drives one session; safe to run on a background thread."""

    def __init__(
        self,
        config: SessionConfig,
        provider: Provider,
        adapter: Adapter,
        catalog: Optional[Catalog] = None,
        feedback_source: Optional[FeedbackSource] = None,
        store: Optional[SessionStore] = None,
    ):
        self.config = config
        self.provider = provider
        self.adapter = adapter
        self.catalog = catalog or default_catalog()
        self.feedback_source = feedback_source
        self.store = store or SessionStore(config.sessions_dir)
        self.aborted = False

    def abort(self) -> None:
        self.aborted = True

    def run(self) -> SessionRecord:
        cfg = self.config
        history: tuple[Message, ...] = (Message("system", cfg.system_prompt),)
        next_user = cfg.user_prompt
        iterations: list[IterationRecord] = []
        outcome = "exhausted"

        for index in range(1, cfg.strategy.n + 1):
            if self.aborted:
                outcome = "aborted"
                break
            pending = history + (Message("user", next_user),)
            try:
                exchange = complete(pending, cfg.llm_config, self.provider)
            except TransportError:
                outcome = "aborted"
                break
            history = append_turn(history, next_user, exchange)

            record = self._process(index, exchange)
            iterations.append(record)
            self._persist(iterations, "exhausted")

            if cfg.strategy.kind == "until_met" and record.status == "ok" and all_met(
                list(record.checks)
            ):
                outcome = "met"
                break

            if cfg.strategy.kind == "interactive":
                if self.feedback_source is None:
                    raise ValueError("interactive strategy needs a feedback source")
                human = self.feedback_source(self._snapshot(iterations, "exhausted"))
                if self.aborted:
                    outcome = "aborted"
                    break
                if human is None or not human.strip():
                    outcome = self._final_outcome(iterations)
                    break
                next_user = human
            else:
                next_user = record.feedback_out or "Continue refining the design."
        else:
            outcome = self._final_outcome(iterations)

        if outcome == "exhausted":
            outcome = self._final_outcome(iterations)
        final = self._snapshot(iterations, outcome)
        self.store.save(final)
        return final

    def _final_outcome(self, iterations: list[IterationRecord]) -> str:
        ok = [r for r in iterations if r.status == "ok"]
        if ok and all_met(list(ok[-1].checks)):
            return "met"
        return "exhausted"

    def _snapshot(self, iterations: list[IterationRecord], outcome: str) -> SessionRecord:
        return SessionRecord(
            session_id=self.config.session_id,
            config=self.config,
            iterations=tuple(iterations),
            outcome=outcome,
        )

    def _persist(self, iterations: list[IterationRecord], outcome: str) -> None:
        self.store.save(self._snapshot(iterations, outcome))

    # -- iteration processing -------------------------------------------------

    def _process(self, index: int, exchange: LlmExchange) -> IterationRecord:
        flow = self.config.flow
        if flow is FlowKind.FPGA:
            return self._process_fpga(index, exchange)
        return self._process_circuit(index, exchange)

    def _process_circuit(self, index: int, exchange: LlmExchange) -> IterationRecord:
        cfg = self.config
        dialect = "ads_like" if cfg.flow is FlowKind.RF else "spectre_like"
        try:
            block = extract_code_block(exchange.response, "netlist")
        except ExtractionError as exc:
            feedback = (
                f"{exc} Return the full corrected netlist in a single fenced code block."
            )
            return IterationRecord(
                index, exchange, None, (), None, {}, (), "failed_extraction", feedback
            )

        repaired, repairs = repair_syntax(block, dialect)
        try:
            netlist = parse_netlist(repaired, dialect)
        except ParseError as exc:
            sources = SourceBundle(cfg.flow, {"design.net": repaired}, tuple(repairs))
            feedback = compose_feedback(
                (), {}, (Violation("parse_error", "netlist", str(exc)),)
            )
            return IterationRecord(
                index, exchange, sources, (), None, {}, (), "failed_validation", feedback
            )

        violations = tuple(validate(netlist, self.catalog))
        sources = SourceBundle(cfg.flow, {"design.net": repaired}, tuple(repairs))
        if structural(list(violations)):
            feedback = compose_feedback((), {}, violations)
            return IterationRecord(
                index, exchange, sources, violations, None, {}, (), "failed_validation", feedback
            )

        deck_text = repaired
        if cfg.binding is not None and cfg.flow is FlowKind.ANALOGUE:
            deck_text = bind_pdk(repaired, cfg.binding, dialect)
        filename = "design.net" if cfg.flow is FlowKind.RF else "design.scs"
        sources = SourceBundle(cfg.flow, {filename: deck_text}, tuple(repairs))

        if cfg.sweep is not None and cfg.flow is FlowKind.ANALOGUE:
            return self._run_sweep(index, exchange, sources, violations, deck_text)

        workspace = prepare_workspace(cfg.workspace_root, cfg.session_id, index, sources)
        run = self.adapter.run(workspace)
        if not run.all_passed():
            feedback = self._run_failure_feedback(run)
            return IterationRecord(
                index, exchange, sources, violations, run, {}, (), "failed_run", feedback
            )

        metrics = self._collect_metrics(run)
        checks = tuple(evaluate_objective(o, metrics) for o in cfg.objectives)
        feedback = compose_feedback(checks, metrics, violations)
        return IterationRecord(
            index, exchange, sources, violations, run, metrics, checks, "ok", feedback
        )

    def _run_sweep(
        self,
        index: int,
        exchange: LlmExchange,
        sources: SourceBundle,
        violations: tuple[Violation, ...],
        deck_text: str,
    ) -> IterationRecord:
        cfg = self.config
        spec = cfg.sweep
        samples = sample_sweep(spec)
        rows: list[SweepRow] = []
        curves: list[tuple[float, list[tuple[float, float]]]] = []
        last_run: Optional[RunResult] = None
        filename = next(iter(sources.files))
        for i, value in enumerate(samples):
            try:
                deck = substitute_param(deck_text, spec.parameter, value)
            except ValueError as exc:
                rows.append(SweepRow(value, error=str(exc)))
                continue
            bundle = SourceBundle(cfg.flow, {filename: deck}, sources.repairs)
            workspace = prepare_workspace(
                cfg.workspace_root, cfg.session_id, index, bundle, sample_index=i
            )
            run = self.adapter.run(workspace)
            last_run = run
            if not run.all_passed():
                rows.append(SweepRow(value, error=run.failed_stage() or "run failed"))
                continue
            rows.append(SweepRow(value, metrics=self._collect_metrics(run)))
            if run.waveforms is not None and "ac_mag_db" in run.waveforms.traces:
                curves.append((value, run.waveforms.traces["ac_mag_db"].real_points()))

        good = [r for r in rows if not r.error]
        if not good:
            if last_run is None:
                return IterationRecord(
                    index, exchange, sources, violations, None, {}, (),
                    "failed_validation",
                    "Every sweep substitution failed; the deck lacks the sweep parameter. "
                    "Return the full corrected netlist in a single fenced code block.",
                    tuple(rows),
                )
            feedback = "Every sweep point failed to simulate. " + self._run_failure_feedback(
                last_run
            )
            return IterationRecord(
                index, exchange, sources, violations, last_run, {}, (),
                "failed_run", feedback, tuple(rows),
            )

        best = self._best_row(good)
        checks = tuple(evaluate_objective(o, best.metrics) for o in cfg.objectives)
        feedback = compose_feedback(checks, best.metrics, violations)
        self._write_sweep_csvs(rows, curves)
        return IterationRecord(
            index, exchange, sources, violations, last_run, best.metrics, checks,
            "ok", feedback, tuple(rows),
        )

    def _best_row(self, rows: list[SweepRow]) -> SweepRow:
        """First all-met sample in ascending order, else max objectives met."""
        cfg = self.config
        scored = []
        for row in rows:
            checks = [evaluate_objective(o, row.metrics) for o in cfg.objectives]
            met = sum(1 for c in checks if c.status == "met")
            if checks and met == len(checks):
                return row
            scored.append((met, row))
        return max(scored, key=lambda pair: pair[0])[1] if scored else rows[0]

    def _write_sweep_csvs(
        self,
        rows: list[SweepRow],
        curves: Optional[list[tuple[float, list[tuple[float, float]]]]] = None,
    ) -> None:
        out = self.store.assets_dir(self.config.session_id)
        param = self.config.sweep.parameter if self.config.sweep else "value"
        gain_pm = [
            (r.value, r.metrics.get("dc_gain_db"), r.metrics.get("phase_margin_deg"))
            for r in rows
            if not r.error
        ]
        ugb_power = [
            (r.value, r.metrics.get("ugb_hz"), r.metrics.get("power_w"))
            for r in rows
            if not r.error
        ]
        (out / "sweep_gain_pm.csv").write_text(
            analysis.series_csv(gain_pm, (param, "dc_gain_db", "phase_margin_deg")),
            encoding="utf-8",
        )
        (out / "sweep_ugb_power.csv").write_text(
            analysis.series_csv(ugb_power, (param, "ugb_hz", "power_w")), encoding="utf-8"
        )
        if curves:
            rows_long = [
                (value, x, y) for value, points in curves for x, y in points
            ]
            (out / "gain_vs_freq.csv").write_text(
                analysis.series_csv(rows_long, (param, "frequency_hz", "mag_db")),
                encoding="utf-8",
            )

    def _process_fpga(self, index: int, exchange: LlmExchange) -> IterationRecord:
        cfg = self.config
        try:
            design = extract_code_block(exchange.response, "verilog")
        except ExtractionError as exc:
            feedback = (
                f"{exc} Return the full corrected Verilog module in a single fenced code block."
            )
            return IterationRecord(
                index, exchange, None, (), None, {}, (), "failed_extraction", feedback
            )

        violations: tuple[Violation, ...] = ()
        try:
            header = extract_module_header(design)
        except HeaderError as exc:
            sources = SourceBundle(cfg.flow, {"design.v": design})
            feedback = compose_feedback(
                (), {}, (Violation("header_error", "design.v", str(exc)),), artifact="Verilog module"
            )
            return IterationRecord(
                index, exchange, sources, (), None, {}, (), "failed_validation", feedback
            )
        if cfg.expected_header:
            expected = extract_module_header(cfg.expected_header)
            if expected.module_name != header.module_name or set(expected.ports) != set(
                header.ports
            ):
                v = Violation(
                    "header_mismatch",
                    header.module_name,
                    f"expected header {print_module_header(expected)}",
                )
                sources = SourceBundle(cfg.flow, {"design.v": design})
                feedback = compose_feedback((), {}, (v,), artifact="Verilog module")
                return IterationRecord(
                    index, exchange, sources, (v,), None, {}, (), "failed_validation", feedback
                )

        files = {"design.v": design}
        constraints = ""
        if cfg.clock_attr:
            try:
                constraints = make_constraints(cfg.clock_attr)
            except ConstraintError as exc:
                raise ValueError(f"bad clock_attr in config: {exc}") from exc
            files["constraints.xdc"] = constraints + "\n"
        bundle = SourceBundle(cfg.flow, files)
        tcl = gen_fpga_tcl(
            bundle, constraints, cfg.part_id, header.module_name, cfg.adapter_spec.stages
        )
        files["run.tcl"] = tcl
        bundle = SourceBundle(cfg.flow, files)

        workspace = prepare_workspace(cfg.workspace_root, cfg.session_id, index, bundle)
        run = self.adapter.run(workspace)
        if not run.all_passed():
            feedback = self._run_failure_feedback(run)
            return IterationRecord(
                index, exchange, bundle, violations, run, {}, (), "failed_run", feedback
            )
        metrics = self._collect_metrics(run)
        checks = tuple(evaluate_objective(o, metrics) for o in cfg.objectives)
        feedback = compose_feedback(checks, metrics, violations, artifact="Verilog module")
        return IterationRecord(
            index, exchange, bundle, violations, run, metrics, checks, "ok", feedback
        )

    def _run_failure_feedback(self, run: RunResult) -> str:
        stage = run.failed_stage() or "unknown"
        note = next((o.note for o in run.stage_outcomes if o.status == "fail"), "")
        detail = f": {note}" if note else ""
        digest = reports.scan_log(run.log_text)
        lines = [f"The tool run failed at stage {stage}{detail}."]
        for entry in digest.errors[:5]:
            lines.append(f"- ERROR {entry.code}: {entry.message}")
        lines.append("Return the full corrected design in a single fenced code block.")
        return "\n".join(lines)

    def _collect_metrics(self, run: RunResult) -> dict[str, float]:
        metrics: dict[str, float] = {}
        path = run.report_files.get("metrics.txt")
        if path is not None and Path(path).exists():
            parsed = reports.parse_metrics(Path(path).read_text(encoding="utf-8"))
            metrics.update(parsed.values())

        if self.config.flow is FlowKind.RF and run.waveforms is not None:
            trace = run.waveforms.traces.get("s11_db")
            f_target = next(
                (o.at_frequency for o in self.config.objectives if o.at_frequency), None
            )
            if trace is not None and f_target is not None:
                summary = analysis.s11_summary(trace.real_points(), f_target)
                metrics["s11_db"] = summary["s11_at_target_db"]
                metrics.setdefault("f_res_hz", summary["f_res_hz"])
                metrics.setdefault("s11_min_db", summary["s11_min_db"])

        util_path = run.report_files.get("utilization.rpt")
        if util_path is not None and Path(util_path).exists():
            util = reports.parse_utilization(Path(util_path).read_text(encoding="utf-8"))
            metrics["lut_count"] = float(util.lut)
            metrics["ff_count"] = float(util.ff)
        timing_path = run.report_files.get("timing.rpt")
        if timing_path is not None and Path(timing_path).exists():
            timing = reports.parse_timing(Path(timing_path).read_text(encoding="utf-8"))
            metrics["clock_freq_hz"] = timing.clock_freq_hz()
            metrics["max_delay_ns"] = timing.data_path_ns
        power_path = run.report_files.get("power.rpt")
        if power_path is not None and Path(power_path).exists():
            power = reports.parse_power(Path(power_path).read_text(encoding="utf-8"))
            metrics["power_w"] = power.total_w
        return metrics


def run_session(
    config: SessionConfig,
    provider: Provider,
    adapter: Adapter,
    catalog: Optional[Catalog] = None,
    feedback_source: Optional[FeedbackSource] = None,
    store: Optional[SessionStore] = None,
) -> SessionRecord:
    """Run a session to completion and return its record."""
    runner = SessionRunner(config, provider, adapter, catalog, feedback_source, store)
    return runner.run()


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _objective_to_dict(o: Objective) -> dict:
    return {
        "metric": o.metric,
        "comparator": o.comparator,
        "target": o.target,
        "tolerance": o.tolerance,
        "at_frequency": o.at_frequency,
    }


def objective_from_dict(d: dict) -> Objective:
    return Objective(
        d["metric"], d["comparator"], d["target"], d.get("tolerance"), d.get("at_frequency")
    )


def _check_to_dict(c: ObjectiveCheck) -> dict:
    return {
        "objective": _objective_to_dict(c.objective),
        "measured": c.measured,
        "status": c.status,
        "deviation_pct": c.deviation_pct,
    }


def _check_from_dict(d: dict) -> ObjectiveCheck:
    return ObjectiveCheck(
        objective_from_dict(d["objective"]), d["measured"], d["status"], d.get("deviation_pct")
    )


def _run_to_dict(r: RunResult) -> dict:
    return {
        "stage_outcomes": [
            {"stage": o.stage, "status": o.status, "duration_s": o.duration_s, "note": o.note}
            for o in r.stage_outcomes
        ],
        "report_files": {k: str(v) for k, v in r.report_files.items()},
        "waveforms": serialize_waveforms(r.waveforms),
        "log_text": r.log_text,
    }


def _run_from_dict(d: dict) -> RunResult:
    from .adapters import StageOutcome

    return RunResult(
        stage_outcomes=tuple(
            StageOutcome(o["stage"], o["status"], o["duration_s"], o.get("note", ""))
            for o in d["stage_outcomes"]
        ),
        report_files={k: Path(v) for k, v in d["report_files"].items()},
        waveforms=deserialize_waveforms(d.get("waveforms")),
        log_text=d.get("log_text", ""),
    )


def _iteration_to_dict(it: IterationRecord) -> dict:
    return {
        "index": it.index,
        "exchange": exchange_to_dict(it.exchange),
        "sources": None
        if it.sources is None
        else {
            "flow": it.sources.flow.value,
            "files": it.sources.files,
            "repairs": list(it.sources.repairs),
        },
        "violations": [
            {"kind": v.kind, "subject": v.subject, "detail": v.detail} for v in it.violations
        ],
        "run": None if it.run is None else _run_to_dict(it.run),
        "metrics": it.metrics,
        "checks": [_check_to_dict(c) for c in it.checks],
        "status": it.status,
        "feedback_out": it.feedback_out,
        "sweep_rows": [
            {"value": r.value, "metrics": r.metrics, "error": r.error} for r in it.sweep_rows
        ],
    }


def _iteration_from_dict(d: dict) -> IterationRecord:
    sources = None
    if d.get("sources") is not None:
        s = d["sources"]
        sources = SourceBundle(FlowKind(s["flow"]), dict(s["files"]), tuple(s["repairs"]))
    return IterationRecord(
        index=d["index"],
        exchange=exchange_from_dict(d["exchange"]),
        sources=sources,
        violations=tuple(
            Violation(v["kind"], v["subject"], v["detail"]) for v in d["violations"]
        ),
        run=None if d.get("run") is None else _run_from_dict(d["run"]),
        metrics=dict(d.get("metrics", {})),
        checks=tuple(_check_from_dict(c) for c in d.get("checks", [])),
        status=d["status"],
        feedback_out=d.get("feedback_out"),
        sweep_rows=tuple(
            SweepRow(r["value"], dict(r.get("metrics", {})), r.get("error", ""))
            for r in d.get("sweep_rows", [])
        ),
    )


def _config_to_dict(c: SessionConfig) -> dict:
    return {
        "flow": c.flow.value,
        "strategy": {"kind": c.strategy.kind, "n": c.strategy.n},
        "adapter": {
            "mode": c.adapter_spec.mode,
            "stages": list(c.adapter_spec.stages),
            "command_template": c.adapter_spec.command_template,
            "timeout_s": c.adapter_spec.timeout_s,
        },
        "llm": {
            "model_id": c.llm_config.model_id,
            "max_tokens": c.llm_config.max_tokens,
            "temperature": c.llm_config.temperature,
            "top_p": c.llm_config.top_p,
        },
        "objectives": [_objective_to_dict(o) for o in c.objectives],
        "system_prompt": c.system_prompt,
        "user_prompt": c.user_prompt,
        "session_id": c.session_id,
        "sweep": None
        if c.sweep is None
        else {
            "parameter": c.sweep.parameter,
            "low": c.sweep.low,
            "high": c.sweep.high,
            "count": c.sweep.count,
            "seed": c.sweep.seed,
        },
        "expected_header": c.expected_header,
        "clock_attr": c.clock_attr,
        "part_id": c.part_id,
        "workspace_root": c.workspace_root,
        "sessions_dir": c.sessions_dir,
    }


def _config_from_dict(d: dict) -> SessionConfig:
    from .adapters import AdapterSpec as _Spec

    adapter = d["adapter"]
    sweep = d.get("sweep")
    return SessionConfig(
        flow=FlowKind(d["flow"]),
        strategy=Strategy(d["strategy"]["kind"], d["strategy"]["n"]),
        adapter_spec=_Spec(
            flow=FlowKind(d["flow"]),
            mode=adapter["mode"],
            stages=tuple(adapter["stages"]),
            command_template=adapter.get("command_template"),
            timeout_s=adapter.get("timeout_s", 300.0),
        ),
        llm_config=LlmConfig(
            d["llm"]["model_id"],
            d["llm"].get("max_tokens"),
            d["llm"].get("temperature"),
            d["llm"].get("top_p"),
        ),
        objectives=tuple(objective_from_dict(o) for o in d.get("objectives", [])),
        system_prompt=d["system_prompt"],
        user_prompt=d["user_prompt"],
        session_id=d.get("session_id", ""),
        sweep=None
        if sweep is None
        else SweepSpec(sweep["parameter"], sweep["low"], sweep["high"], sweep["count"], sweep["seed"]),
        expected_header=d.get("expected_header"),
        clock_attr=d.get("clock_attr"),
        part_id=d.get("part_id", "xc7z020clg400-1"),
        workspace_root=d.get("workspace_root", "workspaces"),
        sessions_dir=d.get("sessions_dir", "sessions"),
    )


def session_record_to_dict(record: SessionRecord) -> dict:
    return {
        "session_id": record.session_id,
        "config": _config_to_dict(record.config),
        "iterations": [_iteration_to_dict(it) for it in record.iterations],
        "outcome": record.outcome,
    }


def session_record_from_dict(d: dict) -> SessionRecord:
    return SessionRecord(
        session_id=d["session_id"],
        config=_config_from_dict(d["config"]),
        iterations=tuple(_iteration_from_dict(it) for it in d["iterations"]),
        outcome=d["outcome"],
    )
