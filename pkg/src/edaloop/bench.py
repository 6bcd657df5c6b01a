"""Dataset benchmarking: load and augment problem sets, run each problem
K times through the FPGA pipeline, emit structured run logs, aggregate.

Datasets and run logs are UTF-8 JSON with the field-named schemas below;
aggregate outputs are CSV matrices plus a JSON summary.

Problem schema (augmented): problem_id, category, top_module, description,
header, testbench, lut_objective, exactly one of max_delay_ns or
clock_freq_hz, and clock_attr (present exactly when clock_freq_hz is).
"""

from __future__ import annotations

import json
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, reports
from .adapters import Adapter, prepare_workspace
from .core import FlowKind
from .llm import LlmConfig, Message, Provider, complete
from .reports import LogDigest, PowerReport, TimingReport, UtilizationReport
from .sourceprep import (
    ExtractionError,
    HeaderError,
    SourceBundle,
    extract_code_block,
    extract_module_header,
    make_constraints,
)

DEFAULT_RUNS_PER_PROBLEM = 5

CLOCK_GRID_MHZ = tuple(range(100, 1001, 50))  # 19 values
DELAY_RANGE_NS = (1.0, 10.0)

BENCH_STAGES = ("simulate", "synthesize", "implement", "lut_objective", "timing_objective")


class DatasetError(Exception):
    """Dataset schema violation, with the offending problem and field."""

    def __init__(self, message: str, index: Optional[int] = None, field_name: str = ""):
        where = ""
        if index is not None:
            where = f" (problem index {index}"
            where += f", field {field_name})" if field_name else ")"
        super().__init__(message + where)
        self.index = index
        self.field_name = field_name


@dataclass(frozen=True)
class BenchProblem:
    problem_id: int
    category: str
    top_module: str
    description: str
    header: str
    testbench: str
    lut_objective: int
    max_delay_ns: Optional[float] = None
    clock_freq_hz: Optional[float] = None
    clock_attr: Optional[str] = None

    def __post_init__(self) -> None:
        if self.lut_objective < 0:
            raise DatasetError("lut_objective must be >= 0")
        if (self.max_delay_ns is None) == (self.clock_freq_hz is None):
            raise DatasetError("exactly one timing objective kind is required")
        if (self.clock_attr is None) != (self.clock_freq_hz is None):
            raise DatasetError("clock_attr must be present exactly for clock objectives")


@dataclass(frozen=True)
class BenchRunLog:
    """Structured output of one benchmark run."""

    problem_id: int
    category: str
    top_module: str
    run_index: int
    clock_constraint: str
    generated_source: str
    completion_tokens: int
    llm_time_s: float
    tool_time_s: float
    simulate: str  # pass | fail
    synthesize: str
    implement: str
    utilization: Optional[UtilizationReport] = None
    timing: Optional[TimingReport] = None
    power: Optional[PowerReport] = None
    lut_objective_met: Optional[bool] = None
    timing_objective_met: Optional[bool] = None
    errors: LogDigest = field(default_factory=LogDigest)

    def __post_init__(self) -> None:
        if self.implement != "pass" and not (
            self.lut_objective_met is None and self.timing_objective_met is None
        ):
            raise ValueError("objective outcomes require a passing implement stage")
        if self.tool_time_s < 0:
            raise ValueError("tool time must be non-negative")

    def stage_passed(self, stage: str) -> bool:
        if stage in ("simulate", "synthesize", "implement"):
            return getattr(self, stage) == "pass"
        if stage == "lut_objective":
            return bool(self.lut_objective_met)
        if stage == "timing_objective":
            return bool(self.timing_objective_met)
        raise ValueError(f"unknown stage {stage!r}")


# ---------------------------------------------------------------------------
# Dataset loading and augmentation
# ---------------------------------------------------------------------------

_REQUIRED_FIELDS = ("problem_id", "category", "top_module", "description", "header", "testbench")


def load_dataset(path: str | Path) -> list[BenchProblem]:
    """Load and schema-validate an augmented dataset file."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list) or not raw:
        raise DatasetError("dataset must be a non-empty JSON array")
    problems: list[BenchProblem] = []
    seen_ids: set[int] = set()
    for i, rec in enumerate(raw):
        for name in _REQUIRED_FIELDS:
            if name not in rec:
                raise DatasetError("missing field", i, name)
        if "lut_objective" not in rec:
            raise DatasetError("missing field", i, "lut_objective")
        try:
            problem = BenchProblem(
                problem_id=int(rec["problem_id"]),
                category=str(rec["category"]),
                top_module=str(rec["top_module"]),
                description=str(rec["description"]),
                header=str(rec["header"]),
                testbench=str(rec["testbench"]),
                lut_objective=int(rec["lut_objective"]),
                max_delay_ns=rec.get("max_delay_ns"),
                clock_freq_hz=rec.get("clock_freq_hz"),
                clock_attr=rec.get("clock_attr"),
            )
        except DatasetError as exc:
            raise DatasetError(str(exc), i) from exc
        if problem.problem_id in seen_ids:
            raise DatasetError(f"duplicate problem_id {problem.problem_id}", i, "problem_id")
        seen_ids.add(problem.problem_id)
        try:
            extract_module_header(problem.header)
        except HeaderError as exc:
            raise DatasetError(f"bad header: {exc}", i, "header") from exc
        problems.append(problem)
    return problems


def augment_dataset(
    path: str | Path, policy_path: str | Path, seed: int, out_path: Optional[str | Path] = None
) -> Path:
    """Add ids and objectives to a base dataset; deterministic per seed.

    The policy file maps module names to LUT objectives and categories to a
    timing kind. Clock-kind problems get a frequency drawn from the
    100..1000 MHz grid in 50 MHz steps plus a derived clock_attr; delay-kind
    problems get a max delay uniform in [1, 10] ns. Output JSON is
    byte-identical for identical inputs and seed.
    """
    base = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(base, list) or not base:
        raise DatasetError("base dataset must be a non-empty JSON array")
    policy = json.loads(Path(policy_path).read_text(encoding="utf-8"))
    lut_table = policy.get("lut_objectives", {})
    timing_kind = policy.get("timing_kind_by_category", {})

    rng = random.Random(seed)
    out: list[dict] = []
    for i, rec in enumerate(base):
        for name in ("category", "top_module", "description", "header", "testbench"):
            if name not in rec:
                raise DatasetError("missing base field", i, name)
        module = rec["top_module"]
        category = rec["category"]
        if module not in lut_table:
            raise DatasetError(f"policy has no LUT objective for {module}", i, "lut_objective")
        kind = timing_kind.get(category, "delay")
        entry = {
            "problem_id": i + 1,
            "category": category,
            "top_module": module,
            "description": rec["description"],
            "header": rec["header"],
            "testbench": rec["testbench"],
            "lut_objective": int(lut_table[module]),
        }
        if kind == "clock":
            freq_mhz = rng.choice(CLOCK_GRID_MHZ)
            entry["clock_freq_hz"] = freq_mhz * 1e6
            entry["clock_attr"] = f"clk {1000.0 / freq_mhz:.3f}ns"
        else:
            entry["max_delay_ns"] = round(rng.uniform(*DELAY_RANGE_NS), 3)
        out.append(entry)

    target = Path(out_path) if out_path else Path(path).with_suffix(".augmented.json")
    target.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


# ---------------------------------------------------------------------------
# Benchmark runner
# ---------------------------------------------------------------------------

SYSTEM_PROMPT = (
    "You write synthesizable Verilog-2001. Reply with exactly one fenced "
    "verilog code block containing the complete module; match the given "
    "module header exactly. The design targets an FPGA tool flow in batch "
    "mode; avoid vendor primitives."
)

_HEADER_BLOCK_RE = re.compile(
    r"Module header:\n```verilog\n(.*?)```", re.DOTALL
)


class HeaderEchoProvider:
    """Offline provider for harness runs: answers each benchmark prompt
    with a minimal module that echoes the prompt's module header.

    Keeps the replay pipeline deterministic and network-free; stage
    outcomes are decided by the adapter fixtures, not the body.
    """

    def send(self, messages, config):
        from .llm import ProviderReply

        prompt = messages[-1].content
        m = _HEADER_BLOCK_RE.search(prompt)
        if not m:
            return ProviderReply("No module header found in the prompt.")
        header = m.group(1).strip()
        body = f"```verilog\n{header}\n  // behavioural body elided by harness provider\nendmodule\n```"
        return ProviderReply(body)


def build_problem_prompt(problem: BenchProblem) -> str:
    """User prompt: description, objectives, module header, testbench."""
    if problem.clock_freq_hz is not None:
        timing = f"clock frequency >= {problem.clock_freq_hz / 1e6:.0f} MHz"
    else:
        timing = f"max delay <= {problem.max_delay_ns:g} ns"
    parts = [
        f"Problem {problem.problem_id}: {problem.description}",
        f"Objectives: LUT count <= {problem.lut_objective}; {timing}.",
        "Module header:",
        "```verilog",
        problem.header.strip(),
        "```",
        "Testbench:",
        "```verilog",
        problem.testbench.strip(),
        "```",
    ]
    return "\n".join(parts)


def run_benchmark(
    problems: Sequence[BenchProblem],
    adapter: Adapter,
    provider: Provider,
    llm_config: LlmConfig,
    runs_per_problem: int = DEFAULT_RUNS_PER_PROBLEM,
    workspace_root: str | Path = "workspaces",
    max_workers: Optional[int] = None,
) -> list[BenchRunLog]:
    """Run every problem ``runs_per_problem`` times; a crash in one run is
    recorded in its log and never aborts the batch."""
    if adapter.spec.flow is not FlowKind.FPGA:
        raise ValueError("benchmark runs need an fpga-flow adapter")
    jobs = [(p, r) for p in problems for r in range(runs_per_problem)]
    if max_workers is None:
        import os

        max_workers = min(4, os.cpu_count() or 1)

    def one(job: tuple[BenchProblem, int]) -> BenchRunLog:
        problem, run_index = job
        try:
            return _run_one(problem, run_index, adapter, provider, llm_config, workspace_root)
        except Exception as exc:  # crash isolation per run
            digest = LogDigest(
                errors=(
                    reports.LogEntry(
                        code="bench 0-1",
                        message=f"{type(exc).__name__}: {exc}",
                    ),
                )
            )
            return BenchRunLog(
                problem_id=problem.problem_id,
                category=problem.category,
                top_module=problem.top_module,
                run_index=run_index,
                clock_constraint=problem.clock_attr or "",
                generated_source="",
                completion_tokens=0,
                llm_time_s=0.0,
                tool_time_s=0.0,
                simulate="fail",
                synthesize="fail",
                implement="fail",
                errors=digest,
            )

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(one, jobs))


def _run_one(
    problem: BenchProblem,
    run_index: int,
    adapter: Adapter,
    provider: Provider,
    llm_config: LlmConfig,
    workspace_root: str | Path,
) -> BenchRunLog:
    history = (
        Message("system", SYSTEM_PROMPT),
        Message("user", build_problem_prompt(problem)),
    )
    exchange = complete(history, llm_config, provider)

    constraint = ""
    if problem.clock_attr:
        constraint = make_constraints(problem.clock_attr)

    def failed(source: str, message: str) -> BenchRunLog:
        return BenchRunLog(
            problem_id=problem.problem_id,
            category=problem.category,
            top_module=problem.top_module,
            run_index=run_index,
            clock_constraint=constraint,
            generated_source=source,
            completion_tokens=exchange.completion_tokens,
            llm_time_s=exchange.latency_s,
            tool_time_s=0.0,
            simulate="fail",
            synthesize="fail",
            implement="fail",
            errors=LogDigest(errors=(reports.LogEntry(code="bench 0-2", message=message),)),
        )

    try:
        design = extract_code_block(exchange.response, "verilog")
    except ExtractionError as exc:
        return failed("", str(exc))

    files = {
        "design.v": design,
        "tb.v": problem.testbench,
        "problem.json": json.dumps(
            {
                "problem_id": problem.problem_id,
                "run_index": run_index,
                "header": problem.header,
                "top_module": problem.top_module,
            },
            indent=1,
        ),
    }
    if constraint:
        files["constraints.xdc"] = constraint + "\n"
    bundle = SourceBundle(FlowKind.FPGA, files)
    workspace = prepare_workspace(
        workspace_root, f"bench-p{problem.problem_id:03d}", run_index, bundle
    )
    run = adapter.run(workspace)

    stage_status = {
        o.stage: ("pass" if o.status == "pass" else "fail") for o in run.stage_outcomes
    }
    tool_time = sum(o.duration_s for o in run.stage_outcomes)

    utilization = timing = power = None
    lut_met = timing_met = None
    if run.passed("implement"):
        util_path = run.report_files.get("utilization.rpt")
        if util_path is not None:
            utilization = reports.parse_utilization(Path(util_path).read_text(encoding="utf-8"))
            lut_met = utilization.lut <= problem.lut_objective
        timing_path = run.report_files.get("timing.rpt")
        if timing_path is not None:
            timing = reports.parse_timing(Path(timing_path).read_text(encoding="utf-8"))
            if problem.clock_freq_hz is not None:
                timing_met = timing.clock_freq_hz() >= problem.clock_freq_hz
            else:
                timing_met = timing.data_path_ns <= problem.max_delay_ns
        power_path = run.report_files.get("power.rpt")
        if power_path is not None:
            power = reports.parse_power(Path(power_path).read_text(encoding="utf-8"))

    return BenchRunLog(
        problem_id=problem.problem_id,
        category=problem.category,
        top_module=problem.top_module,
        run_index=run_index,
        clock_constraint=constraint,
        generated_source=design,
        completion_tokens=exchange.completion_tokens,
        llm_time_s=exchange.latency_s,
        tool_time_s=tool_time,
        simulate=stage_status.get("simulate", "fail"),
        synthesize=stage_status.get("synthesize", "fail"),
        implement=stage_status.get("implement", "fail"),
        utilization=utilization,
        timing=timing,
        power=power,
        lut_objective_met=lut_met,
        timing_objective_met=timing_met,
        errors=reports.scan_log(run.log_text),
    )


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AggregateBundle:
    matrices: dict[str, analysis.PassRateMatrix]
    at_least_one_pass_pct: dict[str, float]
    category_time_stats: dict[str, dict[str, float]]
    category_token_stats: dict[str, dict[str, float]]
    runs_per_problem: int


def aggregate(logs: Sequence[BenchRunLog], out_dir: Optional[str | Path] = None) -> AggregateBundle:
    """Pass-rate matrices for all five stages plus per-category stats.

    Order-invariant: permuting the logs changes nothing. When ``out_dir``
    is given, CSV matrices and a JSON summary are written there.
    """
    if not logs:
        raise analysis.AggregationError("no logs to aggregate")
    matrices: dict[str, analysis.PassRateMatrix] = {}
    pcts: dict[str, float] = {}
    for stage in BENCH_STAGES:
        matrix, pct = analysis.pass_rate_matrix(logs, stage)
        matrices[stage] = matrix
        pcts[stage] = pct

    by_category: dict[str, list[BenchRunLog]] = {}
    for log in logs:
        by_category.setdefault(log.category, []).append(log)
    time_stats = {
        cat: analysis.summary_stats([l.llm_time_s for l in group])
        for cat, group in sorted(by_category.items())
    }
    token_stats = {
        cat: analysis.summary_stats([float(l.completion_tokens) for l in group])
        for cat, group in sorted(by_category.items())
    }
    bundle = AggregateBundle(
        matrices=matrices,
        at_least_one_pass_pct=pcts,
        category_time_stats=time_stats,
        category_token_stats=token_stats,
        runs_per_problem=next(iter(matrices.values())).runs_per_problem,
    )
    if out_dir is not None:
        write_aggregate(bundle, out_dir)
    return bundle


def write_aggregate(bundle: AggregateBundle, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for stage, matrix in bundle.matrices.items():
        path = out / f"pass_rate_{stage}.csv"
        path.write_text(analysis.matrix_csv(matrix), encoding="utf-8")
        written.append(path)
    summary = {
        "runs_per_problem": bundle.runs_per_problem,
        "at_least_one_pass_pct": bundle.at_least_one_pass_pct,
        "category_time_stats": bundle.category_time_stats,
        "category_token_stats": bundle.category_token_stats,
        # Cell-level matrices so API consumers (the dashboard heatmap) never
        # recompute metrics client-side.
        "matrices": {
            stage: [
                {"category": cat, "problem_id": pid, "successes": successes}
                for (cat, pid, _stage), successes in sorted(matrix.cells.items())
            ]
            for stage, matrix in bundle.matrices.items()
        },
    }
    path = out / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(path)
    return written


# ---------------------------------------------------------------------------
# Run log serialization
# ---------------------------------------------------------------------------


def log_to_dict(log: BenchRunLog) -> dict:
    d = {
        "problem_id": log.problem_id,
        "category": log.category,
        "top_module": log.top_module,
        "run_index": log.run_index,
        "clock_constraint": log.clock_constraint,
        "generated_source": log.generated_source,
        "completion_tokens": log.completion_tokens,
        "llm_time_s": log.llm_time_s,
        "tool_time_s": log.tool_time_s,
        "simulate": log.simulate,
        "synthesize": log.synthesize,
        "implement": log.implement,
        "utilization": None
        if log.utilization is None
        else {
            "lut": log.utilization.lut,
            "ff": log.utilization.ff,
            "bram": log.utilization.bram,
            "dsp": log.utilization.dsp,
            "io": log.utilization.io,
        },
        "timing": None
        if log.timing is None
        else {
            "data_path_ns": log.timing.data_path_ns,
            "logic_ns": log.timing.logic_ns,
            "route_ns": log.timing.route_ns,
            "achieved_period_ns": log.timing.achieved_period_ns,
        },
        "power": None
        if log.power is None
        else {
            "total_w": log.power.total_w,
            "dynamic_w": log.power.dynamic_w,
            "static_w": log.power.static_w,
        },
        "lut_objective_met": log.lut_objective_met,
        "timing_objective_met": log.timing_objective_met,
        "errors": [
            {"code": e.code, "message": e.message, "location": e.location}
            for e in log.errors.errors
        ],
        "critical_warnings": [
            {"code": e.code, "message": e.message, "location": e.location}
            for e in log.errors.critical_warnings
        ],
    }
    return d


def log_from_dict(d: dict) -> BenchRunLog:
    return BenchRunLog(
        problem_id=d["problem_id"],
        category=d["category"],
        top_module=d["top_module"],
        run_index=d["run_index"],
        clock_constraint=d["clock_constraint"],
        generated_source=d["generated_source"],
        completion_tokens=d["completion_tokens"],
        llm_time_s=d["llm_time_s"],
        tool_time_s=d["tool_time_s"],
        simulate=d["simulate"],
        synthesize=d["synthesize"],
        implement=d["implement"],
        utilization=None if d["utilization"] is None else UtilizationReport(**d["utilization"]),
        timing=None if d["timing"] is None else TimingReport(**d["timing"]),
        power=None if d["power"] is None else PowerReport(**d["power"]),
        lut_objective_met=d["lut_objective_met"],
        timing_objective_met=d["timing_objective_met"],
        errors=LogDigest(
            errors=tuple(
                reports.LogEntry(e["code"], e["message"], e.get("location"))
                for e in d.get("errors", [])
            ),
            critical_warnings=tuple(
                reports.LogEntry(e["code"], e["message"], e.get("location"))
                for e in d.get("critical_warnings", [])
            ),
        ),
    )


def save_logs(logs: Sequence[BenchRunLog], path: str | Path) -> Path:
    """Write run logs as JSONL, one record per run."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8") as fh:
        for log in logs:
            fh.write(json.dumps(log_to_dict(log), sort_keys=True) + "\n")
    return target


def load_logs(path: str | Path) -> list[BenchRunLog]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(log_from_dict(json.loads(line)))
    return out
