"""Build sessions from plain config dicts (TOML files or JSON request bodies).

The same schema drives the CLI (--config file) and the HTTP service
(POST /sessions body): tables session, strategy, llm, provider, adapter,
prompts, plus objectives, and optional sweep / binding / fpga tables.
Provider API keys are named by environment variable only and are read at
call time, never stored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .adapters import Adapter, AdapterSpec, FLOW_STAGES, build_adapter
from .core import FlowKind, Objective, PromptBundle
from .llm import HttpProvider, LlmConfig, Provider, ScriptedProvider
from .orchestrator import SessionConfig, Strategy, SweepSpec
from .sourceprep import PdkBinding


def load_config_file(path: str | Path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def build_provider(d: dict, base_dir: Optional[Path] = None) -> Provider:
    kind = d.get("type", "scripted")
    if kind == "scripted":
        transcript = _resolve(d["transcript"], base_dir)
        return ScriptedProvider.from_transcript(transcript)
    if kind == "http":
        return HttpProvider(
            endpoint=d["endpoint"],
            key_env=d.get("key_env", "EDALOOP_API_KEY"),
            timeout_s=float(d.get("timeout_s", 120.0)),
        )
    raise ValueError(f"unknown provider type {kind!r}")


def build_adapter_spec(d: dict, flow: FlowKind) -> AdapterSpec:
    return AdapterSpec(
        flow=flow,
        mode=d.get("mode", "mock"),
        stages=tuple(d.get("stages", FLOW_STAGES[flow])),
        command_template=d.get("command_template"),
        timeout_s=float(d.get("timeout_s", 300.0)),
    )


def build_session(
    config: dict, base_dir: Optional[Path] = None
) -> tuple[SessionConfig, Provider, Adapter]:
    """Construct the session config, provider, and adapter from one dict."""
    session = config.get("session", {})
    flow = FlowKind(session["flow"])
    strategy_d = config.get("strategy", {"kind": "until_met", "n": 10})
    strategy = Strategy(strategy_d.get("kind", "until_met"), int(strategy_d.get("n", 10)))

    llm_d = config.get("llm", {})
    llm_config = LlmConfig(
        model_id=llm_d.get("model_id", "unspecified"),
        max_tokens=llm_d.get("max_tokens"),
        temperature=llm_d.get("temperature"),
        top_p=llm_d.get("top_p"),
    )

    objectives = tuple(
        Objective(
            metric=o["metric"],
            comparator=o["comparator"],
            target=float(o["target"]),
            tolerance=o.get("tolerance"),
            at_frequency=o.get("at_frequency"),
        )
        for o in config.get("objectives", [])
    )

    sweep = None
    if "sweep" in config:
        s = config["sweep"]
        sweep = SweepSpec(
            parameter=s["parameter"],
            low=float(s["low"]),
            high=float(s["high"]),
            count=int(s["count"]),
            seed=int(s["seed"]),
        )

    binding = None
    if "binding" in config:
        b = config["binding"]
        binding = PdkBinding(
            model_includes=tuple(b.get("model_includes", [])),
            device_map=dict(b.get("device_map", {})),
            corner=b.get("corner", "TT"),
        )

    fpga = config.get("fpga", {})
    prompts = config["prompts"]
    # Validates the prompt pair against the flow (non-empty prompts, FPGA-only
    # extras) before any session state is built.
    bundle = PromptBundle(
        flow=flow,
        system_prompt=prompts["system"],
        user_prompt=prompts["user"],
        objectives=objectives,
        testbench=fpga.get("testbench"),
        clock_constraint=fpga.get("clock_attr"),
    )
    adapter_d = config.get("adapter", {})
    spec = build_adapter_spec(adapter_d, flow)

    session_config = SessionConfig(
        flow=flow,
        strategy=strategy,
        adapter_spec=spec,
        llm_config=llm_config,
        objectives=bundle.objectives,
        system_prompt=bundle.system_prompt,
        user_prompt=bundle.user_prompt,
        session_id=session.get("id", ""),
        sweep=sweep,
        binding=binding,
        expected_header=fpga.get("expected_header"),
        clock_attr=fpga.get("clock_attr"),
        part_id=fpga.get("part_id", "xc7z020clg400-1"),
        workspace_root=str(_resolve(session.get("workspace_root", "workspaces"), base_dir)),
        sessions_dir=str(_resolve(session.get("sessions_dir", "sessions"), base_dir)),
    )

    provider = build_provider(config.get("provider", {"type": "scripted"}), base_dir)
    fixtures = adapter_d.get("fixtures")
    adapter = build_adapter(spec, _resolve(fixtures, base_dir) if fixtures else None)
    return session_config, provider, adapter


def _resolve(path: str | Path, base_dir: Optional[Path]) -> Path:
    p = Path(path)
    if base_dir is not None and not p.is_absolute():
        return base_dir / p
    return p
