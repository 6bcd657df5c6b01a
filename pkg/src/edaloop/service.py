"""HTTP service: session lifecycle API consumed by the dashboard.

The service is a thin projection over persisted session records: every
GET is derivable from the JSON documents in the sessions directory, so a
restart loses nothing. Session execution runs on background threads; GETs
never block on LLM or adapter work. Interactive sessions expose a
wait-point that POST /sessions/{id}/feedback resumes.
"""

from __future__ import annotations

import queue
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .adapters import downsample
from .config import build_session
from .netlist import ParseError, build_graph, export_graph, graph_payload, parse_netlist
from .orchestrator import SessionRecord, SessionRunner, SessionStore


class SessionJob:
    """One background session with its interactive wait-point."""

    def __init__(self, runner: SessionRunner):
        self.runner = runner
        self.state = "running"
        self.queue: "queue.Queue[Optional[str]]" = queue.Queue()
        self.lock = threading.Lock()
        self.thread = threading.Thread(target=self._run, daemon=True)
        self.error: Optional[str] = None

    def start(self) -> None:
        self.thread.start()

    def _run(self) -> None:
        try:
            self.runner.run()
        except Exception as exc:
            self.error = f"{type(exc).__name__}: {exc}"
        finally:
            self.state = "done"

    def feedback_source(self, _snapshot: SessionRecord) -> Optional[str]:
        self.state = "awaiting_feedback"
        text = self.queue.get()
        self.state = "running"
        return text

    def submit_feedback(self, text: str) -> bool:
        with self.lock:
            if self.state != "awaiting_feedback":
                return False
            self.queue.put(text)
            return True

    def abort(self) -> None:
        with self.lock:
            self.runner.abort()
            # Always enqueue the stop sentinel: if the runner is mid-iteration
            # it will consume it at the next wait-point and see the abort flag;
            # without it the queue.get there would block forever.
            self.queue.put(None)


def create_app(
    sessions_dir: str | Path = "sessions",
    base_dir: Optional[Path] = None,
    auth_token: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="edaloop service")
    store = SessionStore(sessions_dir)
    jobs: dict[str, SessionJob] = {}

    if auth_token:

        @app.middleware("http")
        async def check_token(request: Request, call_next):
            if request.headers.get("X-Auth-Token") != auth_token:
                return JSONResponse({"detail": "missing or bad token"}, status_code=401)
            return await call_next(request)

    def session_doc(session_id: str) -> dict:
        try:
            return store.load(session_id)
        except FileNotFoundError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    def live_state(session_id: str) -> str:
        job = jobs.get(session_id)
        if job is None:
            return "done"
        return job.state

    def summarize(doc: dict) -> dict:
        iterations = doc.get("iterations", [])
        latest_checks = iterations[-1]["checks"] if iterations else []
        return {
            "id": doc["session_id"],
            "state": live_state(doc["session_id"]),
            "flow": doc["config"]["flow"],
            "strategy": doc["config"]["strategy"],
            "outcome": doc.get("outcome"),
            "iterations": [
                {
                    "index": it["index"],
                    "status": it["status"],
                    "all_met": bool(it["checks"])
                    and all(c["status"] == "met" for c in it["checks"]),
                }
                for it in iterations
            ],
            "latest_checks": latest_checks,
        }

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict):
        try:
            config, provider, adapter = build_session(body, base_dir)
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad session config: {exc}")
        config = _with_sessions_dir(config, store)
        job_holder: dict[str, SessionJob] = {}

        def feedback(snapshot: SessionRecord) -> Optional[str]:
            return job_holder["job"].feedback_source(snapshot)

        runner = SessionRunner(
            config,
            provider,
            adapter,
            feedback_source=feedback if config.strategy.kind == "interactive" else None,
            store=store,
        )
        job = SessionJob(runner)
        job_holder["job"] = job
        jobs[config.session_id] = job
        store.save(
            SessionRecord(
                session_id=config.session_id, config=config, iterations=(), outcome="exhausted"
            )
        )
        job.start()
        return {"id": config.session_id, "state": job.state}

    @app.get("/sessions")
    async def list_sessions():
        return [summarize(store.load(sid)) for sid in store.list_ids()]

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        doc = session_doc(session_id)
        summary = summarize(doc)
        job = jobs.get(session_id)
        if job and job.error:
            summary["error"] = job.error
        return summary

    @app.get("/sessions/{session_id}/iterations/{index}")
    async def get_iteration(session_id: str, index: int):
        doc = session_doc(session_id)
        for it in doc.get("iterations", []):
            if it["index"] == index:
                return _transport_iteration(it)
        raise HTTPException(status_code=404, detail=f"no iteration {index}")

    @app.get("/sessions/{session_id}/graph")
    async def get_graph(session_id: str):
        doc = session_doc(session_id)
        netlist_text, dialect = _latest_netlist(doc)
        if netlist_text is None:
            raise HTTPException(status_code=404, detail="session has no parseable netlist yet")
        try:
            netlist = parse_netlist(netlist_text, dialect)
        except ParseError as exc:
            raise HTTPException(status_code=404, detail=f"latest netlist does not parse: {exc}")
        graph = build_graph(netlist)
        payload = graph_payload(graph)
        payload["dot"] = export_graph(graph)
        return payload

    @app.post("/sessions/{session_id}/feedback")
    async def post_feedback(session_id: str, body: dict):
        session_doc(session_id)
        text = body.get("text", "")
        if not isinstance(text, str) or not text.strip():
            raise HTTPException(status_code=422, detail="feedback text must be non-empty")
        job = jobs.get(session_id)
        if job is None or not job.submit_feedback(text):
            raise HTTPException(
                status_code=409, detail="session is not awaiting feedback"
            )
        return {"id": session_id, "state": "running"}

    @app.post("/sessions/{session_id}/abort")
    async def post_abort(session_id: str):
        session_doc(session_id)
        job = jobs.get(session_id)
        if job is not None:
            job.abort()
        return {"id": session_id, "state": live_state(session_id)}

    @app.get("/bench/summaries")
    async def bench_summaries():
        out = []
        root = store.root / "bench"
        if root.is_dir():
            import json as _json

            for path in sorted(root.glob("*/summary.json")):
                out.append({"name": path.parent.name, "summary": _json.loads(path.read_text())})
        return out

    return app


def _with_sessions_dir(config, store: SessionStore):
    from dataclasses import replace

    return replace(config, sessions_dir=str(store.root))


def _transport_iteration(it: dict) -> dict:
    """Full iteration payload with waveforms downsampled for transport."""
    out = dict(it)
    run = it.get("run")
    if run and run.get("waveforms"):
        slim = {}
        for name, trace in run["waveforms"].items():
            slim[name] = {
                "sweep_variable": trace["sweep_variable"],
                "sweep_unit": trace["sweep_unit"],
                "points": downsample(trace["points"], 2000),
            }
        out = dict(it)
        out["run"] = dict(run)
        out["run"]["waveforms"] = slim
    return out


def _latest_netlist(doc: dict) -> tuple[Optional[str], str]:
    dialect = "ads_like" if doc["config"]["flow"] == "rf" else "spectre_like"
    for it in reversed(doc.get("iterations", [])):
        sources = it.get("sources")
        if not sources:
            continue
        for name, text in sources["files"].items():
            if name.endswith((".net", ".scs", ".cir", ".ckt")):
                return text, dialect
    return None, dialect


def serve(
    sessions_dir: str | Path = "sessions",
    host: str = "127.0.0.1",
    port: int = 8321,
    base_dir: Optional[Path] = None,
    auth_token: Optional[str] = None,
) -> None:
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    app = create_app(sessions_dir, base_dir, auth_token)
    uvicorn.run(app, host=host, port=port)
