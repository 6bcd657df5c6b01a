#!/usr/bin/env python3
"""Capture real service payloads as JSON fixtures for the dashboard tests.

Runs the scripted RF session (fixed, 10 iterations) and an interactive
session resumed once with a feedback message, plus the benchmark aggregate,
all through the in-process HTTP client, and freezes selected responses
under frontend/tests/fixtures/. Run from the repository root:

    python tools/make_frontend_fixtures.py
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from edaloop import bench  # noqa: E402
from edaloop.adapters import AdapterSpec, build_adapter  # noqa: E402
from edaloop.core import FlowKind  # noqa: E402
from edaloop.llm import LlmConfig  # noqa: E402
from edaloop.service import create_app  # noqa: E402

FIXTURES = ROOT / "frontend" / "tests" / "fixtures"


def session_body(strategy: str, n: int, session_id: str) -> dict:
    return {
        "session": {"flow": "rf", "id": session_id},
        "strategy": {"kind": strategy, "n": n},
        "llm": {"model_id": "scripted-rf"},
        "provider": {
            "type": "scripted",
            "transcript": str(ROOT / "fixtures" / "rf" / "transcript.jsonl"),
        },
        "adapter": {"mode": "mock"},
        "prompts": {
            "system": "You generate microstrip netlists for a batch S-parameter flow.",
            "user": "Design a 2.4 GHz patch antenna with S11 below -10 dB.",
        },
        "objectives": [
            {"metric": "s11_db", "comparator": "<=", "target": -10.0, "at_frequency": 2.4e9}
        ],
    }


def wait_state(client: TestClient, session_id: str, state: str, timeout: float = 20.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        doc = client.get(f"/sessions/{session_id}").json()
        if doc["state"] == state:
            return doc
        time.sleep(0.05)
    raise RuntimeError(f"session {session_id} never reached {state}")


def dump(name: str, payload) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / name).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    print(f"wrote frontend/tests/fixtures/{name}")


def main() -> None:
    import tempfile

    tmp = Path(tempfile.mkdtemp(prefix="frontend-fixtures-"))
    app = create_app(sessions_dir=tmp / "sessions", base_dir=tmp)
    with TestClient(app) as client:
        # Fixed 10-iteration replay for the timeline view.
        client.post("/sessions", json=session_body("fixed", 10, "rf-fixed"))
        doc = wait_state(client, "rf-fixed", "done")
        dump("session_rf_fixed.json", doc)
        dump(
            "iteration_rf_9.json",
            client.get("/sessions/rf-fixed/iterations/9").json(),
        )
        dump("graph_rf.json", client.get("/sessions/rf-fixed/graph").json())
        dump("session_list.json", client.get("/sessions").json())

        # Interactive session: capture awaiting state, resume with feedback,
        # capture the next iteration showing the text verbatim.
        client.post("/sessions", json=session_body("interactive", 5, "rf-steered"))
        awaiting = wait_state(client, "rf-steered", "awaiting_feedback")
        dump("session_awaiting.json", awaiting)
        note = "Push the recess deeper toward the patch centre."
        resp = client.post("/sessions/rf-steered/feedback", json={"text": note})
        assert resp.status_code == 200, resp.text
        wait_state(client, "rf-steered", "awaiting_feedback")
        dump("session_after_feedback.json", client.get("/sessions/rf-steered").json())
        dump(
            "iteration_after_feedback.json",
            client.get("/sessions/rf-steered/iterations/2").json(),
        )
        client.post("/sessions/rf-steered/abort")
        wait_state(client, "rf-steered", "done")

        # Deterministic 409: feedback to the finished non-interactive session.
        conflict = client.post("/sessions/rf-fixed/feedback", json={"text": "again"})
        assert conflict.status_code == 409
        dump(
            "feedback_409.json",
            {"status": conflict.status_code, "body": conflict.json()},
        )

    # Benchmark aggregate with matrices for the heatmap.
    problems = bench.load_dataset(ROOT / "fixtures" / "bench" / "dataset.json")
    adapter = build_adapter(
        AdapterSpec(
            FlowKind.FPGA, "replay", ("instantiate", "simulate", "synthesize", "implement")
        ),
        ROOT / "fixtures" / "bench" / "replay_outcomes.json",
    )
    logs = bench.run_benchmark(
        problems,
        adapter,
        bench.HeaderEchoProvider(),
        LlmConfig("offline-echo"),
        runs_per_problem=5,
        workspace_root=tmp / "ws",
    )
    out_dir = tmp / "sessions" / "bench" / "fixture-run"
    bench.aggregate(logs, out_dir=out_dir)
    summary = json.loads((out_dir / "summary.json").read_text())
    dump("bench_summaries.json", [{"name": "fixture-run", "summary": summary}])


if __name__ == "__main__":
    main()
