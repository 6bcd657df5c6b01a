"""Bipartite component-net graph construction and DOT export."""

from __future__ import annotations

from dataclasses import dataclass

from .model import Netlist


@dataclass(frozen=True)
class NetGraph:
    """Bipartite graph: component nodes, net nodes, terminal edges.

    ``nodes`` holds (kind, label) pairs with kind in {component, net};
    ``edges`` holds (component_label, net_label, terminal_index).
    Terminal-less directives are not graph nodes; their names are kept as
    annotations for display.
    """

    nodes: frozenset[tuple[str, str]]
    edges: frozenset[tuple[str, str, int]]
    annotations: tuple[str, ...] = ()

    def component_labels(self) -> set[str]:
        return {label for kind, label in self.nodes if kind == "component"}

    def net_labels(self) -> set[str]:
        return {label for kind, label in self.nodes if kind == "net"}


def build_graph(netlist: Netlist) -> NetGraph:
    """Build the connectivity graph of a parsed netlist.

    Node count equals components-with-terminals plus distinct nets; edge
    count equals the total terminal count. Every edge joins a component
    node to a net node, so the graph is bipartite by construction.
    """
    nodes: set[tuple[str, str]] = set()
    edges: set[tuple[str, str, int]] = set()
    for comp in netlist.components:
        nodes.add(("component", comp.instance_name))
        for idx, net in enumerate(comp.terminals):
            nodes.add(("net", net))
            edges.add((comp.instance_name, net, idx))
    annotations = tuple(
        f"{d.kind}:{d.name}" if d.name else d.kind for d in netlist.directives
    )
    return NetGraph(frozenset(nodes), frozenset(edges), annotations)


def export_graph(graph: NetGraph) -> str:
    """Render the graph as deterministic DOT text (nodes sorted by label)."""
    lines = ["graph netgraph {"]
    for kind, label in sorted(graph.nodes):
        shape = "box" if kind == "component" else "ellipse"
        lines.append(f'  "{_esc(label)}" [shape={shape}];')
    for comp, net, idx in sorted(graph.edges):
        lines.append(f'  "{_esc(comp)}" -- "{_esc(net)}" [label="{idx}"];')
    for note in graph.annotations:
        lines.append(f"  // directive: {_esc(note)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(label: str) -> str:
    return label.replace('"', '\\"')


def graph_payload(graph: NetGraph) -> dict:
    """JSON-friendly node/edge lists for API transport."""
    return {
        "nodes": [{"kind": k, "label": l} for k, l in sorted(graph.nodes)],
        "edges": [
            {"component": c, "net": n, "terminal": t} for c, n, t in sorted(graph.edges)
        ],
        "annotations": list(graph.annotations),
    }
