"""Command-line entry points for every workflow.

Exit codes: 0 success, 1 domain error (validation findings, failed
sessions, bad inputs), 2 usage error (argparse). Results print to stdout
and can also be written with --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import analysis, bench, reports
from .adapters import gc_workspaces
from .config import build_session, load_config_file
from .netlist import (
    ParseError,
    build_graph,
    default_catalog,
    export_graph,
    load_catalog,
    parse_netlist,
    validate,
)
from .orchestrator import SessionStore, run_session


class DomainError(Exception):
    """Wraps expected failures so main() can exit 1 cleanly."""


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_session_run(args: argparse.Namespace) -> int:
    config_dict = load_config_file(args.config)
    base_dir = Path(args.config).resolve().parent if args.relative_paths else None
    session_config, provider, adapter = build_session(config_dict, base_dir)
    if args.strategy:
        from .orchestrator import Strategy

        kind = args.strategy.replace("-", "_")
        session_config = _replace(session_config, strategy=Strategy(kind, args.max))

    feedback_source = None
    if session_config.strategy.kind == "interactive":

        def feedback_source(snapshot):
            last = snapshot.iterations[-1]
            sys.stderr.write(f"\niteration {last.index}: {last.status}\n")
            if last.feedback_out:
                sys.stderr.write(last.feedback_out + "\n")
            sys.stderr.write("feedback (empty line stops): ")
            sys.stderr.flush()
            line = sys.stdin.readline().strip()
            return line or None

    record = run_session(session_config, provider, adapter, feedback_source=feedback_source)
    summary = {
        "session_id": record.session_id,
        "outcome": record.outcome,
        "iterations": [
            {
                "index": it.index,
                "status": it.status,
                "checks": [
                    {
                        "metric": c.objective.metric,
                        "status": c.status,
                        "measured": c.measured,
                        "deviation_pct": c.deviation_pct,
                    }
                    for c in it.checks
                ],
            }
            for it in record.iterations
        ],
    }
    _emit(json.dumps(summary, indent=2), args.out)
    return 0 if record.outcome == "met" else 1


def _replace(config, **kw):
    from dataclasses import replace

    return replace(config, **kw)


def cmd_bench_augment(args: argparse.Namespace) -> int:
    out = bench.augment_dataset(args.dataset, args.policy, args.seed, args.out)
    sys.stdout.write(f"{out}\n")
    return 0


def cmd_bench_run(args: argparse.Namespace) -> int:
    from .adapters import AdapterSpec, build_adapter
    from .core import FlowKind
    from .llm import LlmConfig

    problems = bench.load_dataset(args.dataset)
    spec = AdapterSpec(
        flow=FlowKind.FPGA,
        mode="replay",
        stages=("instantiate", "simulate", "synthesize", "implement"),
    )
    adapter = build_adapter(spec, args.fixtures)
    provider = bench.HeaderEchoProvider()
    llm_config = LlmConfig(model_id=args.model_id, max_tokens=3000, temperature=1.5, top_p=0.75)
    logs = bench.run_benchmark(
        problems,
        adapter,
        provider,
        llm_config,
        runs_per_problem=args.runs,
        workspace_root=args.workspaces,
    )
    target = bench.save_logs(logs, args.out or "bench_logs.jsonl")
    sys.stdout.write(f"{len(logs)} runs -> {target}\n")
    return 0


def cmd_bench_aggregate(args: argparse.Namespace) -> int:
    logs = bench.load_logs(args.logs)
    bundle = bench.aggregate(logs, out_dir=args.out_dir)
    if args.stage:
        matrix = bundle.matrices[args.stage]
        _emit(analysis.matrix_csv(matrix), args.out)
    else:
        _emit(
            json.dumps(
                {
                    "at_least_one_pass_pct": bundle.at_least_one_pass_pct,
                    "runs_per_problem": bundle.runs_per_problem,
                },
                indent=2,
            ),
            args.out,
        )
    return 0


def cmd_netlist_validate(args: argparse.Namespace) -> int:
    text = Path(args.netlist).read_text(encoding="utf-8")
    catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
    try:
        netlist = parse_netlist(text, args.dialect)
    except ParseError as exc:
        raise DomainError(f"parse error: {exc}") from exc
    violations = validate(netlist, catalog)
    lines = [str(v) for v in violations]
    _emit("\n".join(lines) if lines else "no violations", args.out)
    return 1 if violations else 0


def cmd_graph_export(args: argparse.Namespace) -> int:
    text = Path(args.netlist).read_text(encoding="utf-8")
    try:
        netlist = parse_netlist(text, args.dialect)
    except ParseError as exc:
        raise DomainError(f"parse error: {exc}") from exc
    _emit(export_graph(build_graph(netlist)), args.out)
    return 0


def cmd_report_parse(args: argparse.Namespace) -> int:
    text = Path(args.report).read_text(encoding="utf-8")
    try:
        if args.kind == "metrics":
            parsed = reports.parse_metrics(text)
            payload = {k: {"value": v, "unit": u} for k, (v, u) in parsed.entries.items()}
        elif args.kind == "utilization":
            r = reports.parse_utilization(text)
            payload = {"lut": r.lut, "ff": r.ff, "bram": r.bram, "dsp": r.dsp, "io": r.io}
        elif args.kind == "timing":
            r = reports.parse_timing(text)
            payload = {
                "data_path_ns": r.data_path_ns,
                "logic_ns": r.logic_ns,
                "route_ns": r.route_ns,
                "achieved_period_ns": r.achieved_period_ns,
                "clock_freq_hz": r.clock_freq_hz(),
            }
        elif args.kind == "power":
            r = reports.parse_power(text)
            payload = {"total_w": r.total_w, "dynamic_w": r.dynamic_w, "static_w": r.static_w}
        else:
            digest = reports.scan_log(text)
            payload = {
                "errors": [
                    {"code": e.code, "message": e.message, "location": e.location}
                    for e in digest.errors
                ],
                "critical_warnings": [
                    {"code": e.code, "message": e.message, "location": e.location}
                    for e in digest.critical_warnings
                ],
            }
    except reports.ReportError as exc:
        raise DomainError(f"report error: {exc}") from exc
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def cmd_gc(args: argparse.Namespace) -> int:
    removed = gc_workspaces(
        args.root,
        session_id=args.session,
        older_than_s=args.older_than_days * 86400 if args.older_than_days else None,
    )
    sys.stdout.write(f"removed {len(removed)} workspace(s)\n")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(
        sessions_dir=args.sessions,
        host=args.host,
        port=args.port,
        base_dir=Path.cwd(),
        auth_token=args.token,
    )
    return 0


def cmd_session_show(args: argparse.Namespace) -> int:
    store = SessionStore(args.sessions)
    try:
        doc = store.load(args.id)
    except FileNotFoundError as exc:
        raise DomainError(f"unknown session {args.id}") from exc
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edaloop")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("session", help="run or inspect design sessions")
    ssub = p.add_subparsers(dest="session_command", required=True)
    run_p = ssub.add_parser("run", help="run a session from a config file")
    run_p.add_argument("--config", required=True)
    run_p.add_argument(
        "--strategy", choices=("fixed", "until_met", "until-met", "interactive")
    )
    run_p.add_argument("--max", type=int, default=10, help="iteration bound with --strategy")
    run_p.add_argument("--relative-paths", action="store_true", default=True)
    run_p.add_argument("--out")
    run_p.set_defaults(func=cmd_session_run)
    show_p = ssub.add_parser("show", help="print a persisted session record")
    show_p.add_argument("id")
    show_p.add_argument("--sessions", default="sessions")
    show_p.add_argument("--out")
    show_p.set_defaults(func=cmd_session_show)

    p = sub.add_parser("bench", help="dataset benchmarking")
    bsub = p.add_subparsers(dest="bench_command", required=True)
    aug_p = bsub.add_parser("augment", help="add ids and objectives to a base dataset")
    aug_p.add_argument("dataset")
    aug_p.add_argument("--policy", required=True)
    aug_p.add_argument("--seed", type=int, default=1)
    aug_p.add_argument("--out")
    aug_p.set_defaults(func=cmd_bench_augment)
    brun_p = bsub.add_parser("run", help="run a dataset through the replay pipeline")
    brun_p.add_argument("dataset")
    brun_p.add_argument("--fixtures", required=True)
    brun_p.add_argument("--runs", type=int, default=bench.DEFAULT_RUNS_PER_PROBLEM)
    brun_p.add_argument("--workspaces", default="workspaces")
    brun_p.add_argument("--model-id", default="offline-echo")
    brun_p.add_argument("--out")
    brun_p.set_defaults(func=cmd_bench_run)
    bagg_p = bsub.add_parser("aggregate", help="aggregate run logs")
    bagg_p.add_argument("logs")
    bagg_p.add_argument("--stage", choices=bench.BENCH_STAGES)
    bagg_p.add_argument("--out-dir")
    bagg_p.add_argument("--out")
    bagg_p.set_defaults(func=cmd_bench_aggregate)

    p = sub.add_parser("netlist", help="netlist tools")
    nsub = p.add_subparsers(dest="netlist_command", required=True)
    val_p = nsub.add_parser("validate", help="validate a netlist against a catalog")
    val_p.add_argument("netlist")
    val_p.add_argument("--catalog")
    val_p.add_argument("--dialect", choices=("spectre_like", "ads_like"), default="ads_like")
    val_p.add_argument("--out")
    val_p.set_defaults(func=cmd_netlist_validate)

    p = sub.add_parser("graph", help="graph tools")
    gsub = p.add_subparsers(dest="graph_command", required=True)
    exp_p = gsub.add_parser("export", help="export the connectivity graph as DOT")
    exp_p.add_argument("netlist")
    exp_p.add_argument("--dialect", choices=("spectre_like", "ads_like"), default="ads_like")
    exp_p.add_argument("--out")
    exp_p.set_defaults(func=cmd_graph_export)

    p = sub.add_parser("report", help="report tools")
    rsub = p.add_subparsers(dest="report_command", required=True)
    rp = rsub.add_parser("parse", help="parse a report file to JSON")
    rp.add_argument("report")
    rp.add_argument(
        "--kind", choices=("metrics", "utilization", "timing", "power", "log"), required=True
    )
    rp.add_argument("--out")
    rp.set_defaults(func=cmd_report_parse)

    p = sub.add_parser("gc", help="delete old workspaces")
    p.add_argument("--root", default="workspaces")
    p.add_argument("--session")
    p.add_argument("--older-than-days", type=float)
    p.set_defaults(func=cmd_gc)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--sessions", default="sessions")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--token")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (OSError, ValueError, bench.DatasetError, analysis.AggregationError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
