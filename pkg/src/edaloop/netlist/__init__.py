"""Netlist parsing, graph building, validation, and DOT export."""

from .catalog import Catalog, default_catalog, load_catalog
from .graph import NetGraph, build_graph, export_graph, graph_payload
from .model import (
    CatalogEntry,
    Component,
    Directive,
    Netlist,
    ParamValue,
    SweepRange,
    Violation,
)
from .parser import ParseError, parse_netlist, parse_value, print_netlist
from .validate import GLOBAL_NETS, STRUCTURAL_KINDS, structural, validate

__all__ = [
    "Catalog",
    "CatalogEntry",
    "Component",
    "Directive",
    "GLOBAL_NETS",
    "NetGraph",
    "Netlist",
    "ParamValue",
    "ParseError",
    "STRUCTURAL_KINDS",
    "SweepRange",
    "Violation",
    "build_graph",
    "default_catalog",
    "export_graph",
    "graph_payload",
    "load_catalog",
    "parse_netlist",
    "parse_value",
    "print_netlist",
    "structural",
    "validate",
]
