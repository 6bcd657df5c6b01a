"""Netlist validation against a component catalog plus connectivity checks.

Violations are data, not exceptions: callers decide which kinds fail an
iteration and which are advisory.
"""

from __future__ import annotations

from collections import defaultdict

from .catalog import Catalog
from .model import Netlist, Violation

# Names exempt from floating-net checks (global reference nets).
GLOBAL_NETS = frozenset({"0", "gnd", "GND", "vss", "VSS"})

# Violation kinds that make a netlist unusable for a tool run. Floating nets
# and split subgraphs are reported for feedback but are tolerated (antenna
# decks legitimately carry open stubs).
STRUCTURAL_KINDS = frozenset({"unknown_kind", "wrong_arity", "missing_param"})


def validate(netlist: Netlist, catalog: Catalog) -> list[Violation]:
    """Check catalog conformance and connectivity; returns all findings."""
    violations: list[Violation] = []

    for comp in netlist.components:
        entry = catalog.get(comp.kind)
        if entry is None:
            violations.append(
                Violation("unknown_kind", comp.instance_name, f"kind '{comp.kind}' not in catalog")
            )
            continue
        if len(comp.terminals) != entry.arity:
            violations.append(
                Violation(
                    "wrong_arity",
                    comp.instance_name,
                    f"expected {entry.arity} terminals, got {len(comp.terminals)}",
                )
            )
        for param in entry.required_params:
            if param not in comp.params:
                violations.append(
                    Violation("missing_param", comp.instance_name, f"missing parameter '{param}'")
                )

    for directive in netlist.directives:
        entry = catalog.get(directive.kind)
        if entry is None:
            continue
        for param in entry.required_params:
            if param not in directive.params:
                violations.append(
                    Violation(
                        "missing_param",
                        directive.name or directive.kind,
                        f"missing parameter '{param}'",
                    )
                )

    violations.extend(_connectivity(netlist))
    return violations


def _connectivity(netlist: Netlist) -> list[Violation]:
    out: list[Violation] = []
    touch: dict[str, int] = defaultdict(int)
    adjacency: dict[str, set[str]] = defaultdict(set)
    for comp in netlist.components:
        for net in comp.terminals:
            touch[net] += 1
            adjacency[comp.instance_name].add(net)
            adjacency[net].add(comp.instance_name)

    for net in sorted(touch):
        if net in GLOBAL_NETS:
            continue
        if touch[net] == 1:
            out.append(Violation("floating_net", net, "net is touched by exactly one terminal"))

    pieces = _count_components(adjacency)
    if pieces > 1:
        out.append(
            Violation(
                "disconnected_subgraph",
                "netlist",
                f"{pieces} disconnected subgraphs (components not sharing any net)",
            )
        )
    return out


def _count_components(adjacency: dict[str, set[str]]) -> int:
    seen: set[str] = set()
    count = 0
    for start in adjacency:
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adjacency[node] - seen)
    return count


def structural(violations: list[Violation]) -> list[Violation]:
    """The subset of violations that block a tool run."""
    return [v for v in violations if v.kind in STRUCTURAL_KINDS]
