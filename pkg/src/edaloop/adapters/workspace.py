"""Per-iteration workspace lifecycle.

Every run gets a fresh, isolated directory whose name embeds the session
and iteration identifiers plus a random token. Workspaces are never reused
or deleted automatically; a gc helper exists for explicit cleanup, which
favours post-mortem inspection of failed iterations.
"""

from __future__ import annotations

import json
import re
import shutil
import time
import uuid
from pathlib import Path
from typing import Optional

from ..sourceprep import SourceBundle

_SAFE_RE = re.compile(r"[^A-Za-z0-9._-]+")


def _safe(name: str) -> str:
    return _SAFE_RE.sub("-", name) or "x"


def prepare_workspace(
    root: str | Path,
    session_id: str,
    iteration_index: int,
    sources: SourceBundle,
    sample_index: Optional[int] = None,
) -> Path:
    """Create a fresh workspace and write all source files into it.

    The path embeds session and iteration ids (and a sweep sample index
    when given); a random suffix guarantees no prior directory is reused.
    A manifest and a generated driver script are written next to the
    sources; external command templates may invoke the driver or replace
    it with a real tool invocation.
    """
    base = Path(root) / _safe(session_id)
    stem = f"{iteration_index:03d}"
    if sample_index is not None:
        stem += f"_s{sample_index:02d}"
    for _ in range(50):
        candidate = base / f"{stem}_{uuid.uuid4().hex[:8]}"
        if not candidate.exists():
            break
    else:  # pragma: no cover - 50 uuid collisions
        raise OSError("could not allocate a fresh workspace directory")
    candidate.mkdir(parents=True)
    (candidate / "reports").mkdir()

    for name, text in sources.files.items():
        target = candidate / name
        if target.parent != candidate:
            raise ValueError(f"source filename escapes workspace: {name}")
        target.write_text(text, encoding="utf-8")

    manifest = {
        "session_id": session_id,
        "iteration_index": iteration_index,
        "sample_index": sample_index,
        "flow": sources.flow.value,
        "files": sorted(sources.files),
        "repairs": list(sources.repairs),
        "created_at": time.time(),
    }
    (candidate / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    (candidate / "driver.sh").write_text(_driver_script(sources), encoding="utf-8")
    return candidate


def _driver_script(sources: SourceBundle) -> str:
    lines = [
        "#!/bin/sh",
        "# Default stage driver. Real deployments point command_template at the",
        "# actual tool; its log must emit STAGE:<name>:PASS markers per stage.",
    ]
    from .base import FLOW_STAGES  # local import to avoid a cycle at module load

    for stage in FLOW_STAGES[sources.flow]:
        lines.append(f'echo "STAGE:{stage}:PASS"')
    lines.append("exit 0")
    return "\n".join(lines) + "\n"


def read_manifest(workspace: Path) -> dict:
    return json.loads((workspace / "manifest.json").read_text(encoding="utf-8"))


def gc_workspaces(
    root: str | Path,
    session_id: Optional[str] = None,
    older_than_s: Optional[float] = None,
) -> list[Path]:
    """Delete workspace trees, optionally filtered by session and age."""
    root = Path(root)
    if not root.exists():
        return []
    removed: list[Path] = []
    now = time.time()
    sessions = [root / _safe(session_id)] if session_id else sorted(root.iterdir())
    for session_dir in sessions:
        if not session_dir.is_dir():
            continue
        for ws in sorted(session_dir.iterdir()):
            if not ws.is_dir():
                continue
            if older_than_s is not None:
                manifest = ws / "manifest.json"
                created = manifest.stat().st_mtime if manifest.exists() else ws.stat().st_mtime
                if now - created < older_than_s:
                    continue
            shutil.rmtree(ws)
            removed.append(ws)
        if session_dir.exists() and not any(session_dir.iterdir()):
            session_dir.rmdir()
    return removed
