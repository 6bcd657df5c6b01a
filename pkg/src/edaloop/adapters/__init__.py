"""EDA tool adapters: external batch processes and deterministic mocks."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from ..core import FlowKind
from .base import (
    DEFAULT_EXTERNAL_TIMEOUT_S,
    FLOW_STAGES,
    STAGES,
    Adapter,
    AdapterSpec,
    ConfigurationError,
    DegenerateBiasError,
    EvalError,
    RunResult,
    StageOutcome,
    WaveTrace,
    WaveformSet,
    deserialize_waveforms,
    downsample,
    gate_stages,
    serialize_waveforms,
)
from .external import ExternalAdapter
from .mock_analogue import AnalogueMockAdapter, mock_analogue_eval
from .mock_fpga import FpgaReplayAdapter, load_fixtures, mock_fpga_eval
from .mock_rf import RfMockAdapter, mock_rf_eval
from .tcl import gen_fpga_tcl
from .workspace import gc_workspaces, prepare_workspace, read_manifest


def build_adapter(spec: AdapterSpec, fixtures_path: Optional[str | Path] = None) -> Adapter:
    """Construct the adapter implementation for a spec."""
    if spec.mode == "external":
        return ExternalAdapter(spec)
    if spec.mode == "replay":
        if spec.flow is not FlowKind.FPGA:
            raise ConfigurationError("replay mode is only available for the fpga flow")
        if fixtures_path is None:
            raise ConfigurationError("replay mode needs a fixtures file")
        return FpgaReplayAdapter(spec, load_fixtures(fixtures_path))
    if spec.flow is FlowKind.ANALOGUE:
        return AnalogueMockAdapter(spec)
    if spec.flow is FlowKind.RF:
        return RfMockAdapter(spec)
    raise ConfigurationError("mock mode for the fpga flow needs replay fixtures")


__all__ = [
    "Adapter",
    "AdapterSpec",
    "AnalogueMockAdapter",
    "ConfigurationError",
    "DEFAULT_EXTERNAL_TIMEOUT_S",
    "DegenerateBiasError",
    "EvalError",
    "ExternalAdapter",
    "FLOW_STAGES",
    "FpgaReplayAdapter",
    "RfMockAdapter",
    "RunResult",
    "STAGES",
    "StageOutcome",
    "WaveTrace",
    "WaveformSet",
    "build_adapter",
    "deserialize_waveforms",
    "downsample",
    "gate_stages",
    "gc_workspaces",
    "gen_fpga_tcl",
    "load_fixtures",
    "mock_analogue_eval",
    "mock_fpga_eval",
    "mock_rf_eval",
    "prepare_workspace",
    "read_manifest",
    "serialize_waveforms",
]
