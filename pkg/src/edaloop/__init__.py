"""LLM-assisted EDA orchestration framework.

Turns design prompts into tool-ready source files, runs them through
pluggable adapters (external batch tools or deterministic mocks), parses
power-performance-area reports, evaluates objectives, and iterates under
human-steered or closed-loop strategies. A dataset benchmarking mode runs
problem sets through the FPGA pipeline and aggregates pass rates.
"""

__version__ = "0.1.0"

from .core import FlowKind, Objective, ObjectiveCheck, PromptBundle, evaluate_objective

__all__ = [
    "FlowKind",
    "Objective",
    "ObjectiveCheck",
    "PromptBundle",
    "evaluate_objective",
    "__version__",
]
