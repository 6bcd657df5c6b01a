"""Typed netlist model shared by the parser, graph builder, and validator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class ParamValue:
    """A parameter value with SI normalization and its original spelling.

    ``value`` is the SI-scaled number (None for string parameters),
    ``unit`` the unit word if one was attached, ``raw`` the exact source
    text so printing round-trips, and ``text`` the payload of quoted
    string values.
    """

    raw: str
    value: Optional[float] = None
    unit: str = ""
    text: Optional[str] = None


@dataclass(frozen=True)
class Component:
    """One instantiated device: name, catalog kind, nets, parameters."""

    instance_name: str
    kind: str
    terminals: tuple[str, ...]
    params: dict[str, ParamValue] = field(default_factory=dict)
    line: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if not self.terminals:
            raise ValueError(f"component {self.instance_name} has no terminals")
        if any(not t for t in self.terminals):
            raise ValueError(f"component {self.instance_name} has an empty net name")


@dataclass(frozen=True)
class SweepRange:
    """Analysis sweep: scale is 'lin', 'dec', or 'step'."""

    scale: str
    start: float
    stop: float
    n: float  # points for lin, points/decade for dec, increment for step


@dataclass(frozen=True)
class Directive:
    """A terminal-less statement: analyses, substrate/model blocks, params.

    ``dtype`` is one of dc, ac, tran, sparams, substrate, model, param,
    include.
    """

    dtype: str
    name: str = ""
    kind: str = ""
    sweep: Optional[SweepRange] = None
    params: dict[str, ParamValue] = field(default_factory=dict)
    args: tuple[str, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Netlist:
    """Parsed netlist: dialect plus statements in source order."""

    dialect: str  # spectre_like | ads_like
    items: tuple[object, ...]

    def __post_init__(self) -> None:
        if self.dialect not in ("spectre_like", "ads_like"):
            raise ValueError(f"unknown dialect {self.dialect!r}")
        if not self.items:
            raise ValueError("netlist has no components or directives")

    @property
    def components(self) -> tuple[Component, ...]:
        return tuple(i for i in self.items if isinstance(i, Component))

    @property
    def directives(self) -> tuple[Directive, ...]:
        return tuple(i for i in self.items if isinstance(i, Directive))

    def params(self) -> dict[str, float]:
        """Collapsed view of all .param style directives (SI values)."""
        out: dict[str, float] = {}
        for d in self.directives:
            if d.dtype == "param":
                for key, pv in d.params.items():
                    if pv.value is not None:
                        out[key] = pv.value
        return out


@dataclass(frozen=True)
class CatalogEntry:
    """Expected shape of one component kind."""

    kind: str
    arity: int
    required_params: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("arity must be >= 0")


@dataclass(frozen=True)
class Violation:
    """One connectivity or catalog-conformance finding (data, not an error)."""

    kind: str  # unknown_kind | wrong_arity | missing_param | floating_net | disconnected_subgraph
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}({self.subject}): {self.detail}"
