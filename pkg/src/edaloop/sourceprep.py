"""Turn raw LLM responses into tool-ready source files.

Covers fenced code-block extraction, a closed whitelist of syntax repairs,
local PDK binding (confidential model names never enter a prompt), Verilog
module-header extraction for the ANSI-style header subset, and clock
constraint generation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .core import FlowKind


class ExtractionError(Exception):
    """No code block of the requested kind in the response."""


class BindingError(Exception):
    """A generic device in the netlist has no PDK mapping."""

    def __init__(self, device: str):
        super().__init__(f"no device mapping for generic device '{device}'")
        self.device = device


class HeaderError(Exception):
    """Verilog module header missing, duplicated, or malformed."""


class ConstraintError(Exception):
    """Clock constraint attribute could not be interpreted."""


@dataclass(frozen=True)
class SourceBundle:
    """Tool-ready files for one iteration, plus the repairs applied."""

    flow: FlowKind
    files: dict[str, str]
    repairs: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.files:
            raise ValueError("source bundle needs at least one design file")
        object.__setattr__(self, "repairs", tuple(self.repairs))


@dataclass(frozen=True)
class Port:
    direction: str  # input | output | inout
    width: int
    name: str


@dataclass(frozen=True)
class ModuleHeader:
    module_name: str
    ports: tuple[Port, ...]

    def __post_init__(self) -> None:
        names = [p.name for p in self.ports]
        if len(set(names)) != len(names):
            raise ValueError("port names must be unique")
        if any(p.width < 1 for p in self.ports):
            raise ValueError("port widths must be >= 1")


@dataclass(frozen=True)
class PdkBinding:
    """Local technology binding: include lines, device map, corner tag."""

    model_includes: tuple[str, ...]
    device_map: dict[str, str]
    corner: str = "TT"


# ---------------------------------------------------------------------------
# Code block extraction
# ---------------------------------------------------------------------------

_FENCE_RE = re.compile(r"```[ \t]*([^\n`]*)\n(.*?)```", re.DOTALL)

_VERILOG_TAGS = {"verilog", "systemverilog", "v", "sv"}
_NETLIST_TAGS = {"spice", "spectre", "netlist", "ads", "scs", "cir", "net"}

_NETLIST_LINE_RE = re.compile(
    r"^\s*(\.[a-z]+\b|[A-Za-z_]\w*:[A-Za-z_]\w*\s|[RCLVIMrclvim]\w*\s+\S+\s+\S+|\*|//)"
)


def _looks_like_verilog(text: str) -> bool:
    return re.search(r"\bmodule\s+[A-Za-z_]\w*", text) is not None


def _looks_like_netlist(text: str) -> bool:
    if _looks_like_verilog(text):
        return False
    hits = sum(1 for line in text.splitlines() if _NETLIST_LINE_RE.match(line))
    return hits >= 1


def extract_code_block(response: str, kind: str) -> str:
    """Return the first code block matching ``kind`` (netlist or verilog).

    Fenced blocks win; the first block whose language tag or content
    signature matches is returned with the fences stripped. Without fences,
    a module...endmodule span (verilog) or the longest run of netlist-shaped
    lines is used. Raises ExtractionError when nothing matches, so the
    caller can record a failed iteration instead of crashing.
    """
    if kind not in ("netlist", "verilog"):
        raise ValueError(f"unknown block kind {kind!r}")

    tags = _VERILOG_TAGS if kind == "verilog" else _NETLIST_TAGS
    sniff = _looks_like_verilog if kind == "verilog" else _looks_like_netlist

    for match in _FENCE_RE.finditer(response):
        tag = match.group(1).strip().lower()
        body = match.group(2)
        if tag in tags or (tag not in _VERILOG_TAGS | _NETLIST_TAGS and sniff(body)):
            return body.strip("\n")

    if "```" not in response:
        if kind == "verilog":
            m = re.search(r"\bmodule\b.*?\bendmodule\b", response, re.DOTALL)
            if m:
                return m.group(0)
        else:
            best: list[str] = []
            run: list[str] = []
            for line in response.splitlines():
                if _NETLIST_LINE_RE.match(line):
                    run.append(line)
                else:
                    if len(run) > len(best):
                        best = run
                    run = []
            if len(run) > len(best):
                best = run
            if len(best) >= 2:
                return "\n".join(best)

    raise ExtractionError(f"no {kind} block found in response")


# ---------------------------------------------------------------------------
# Syntax repair (closed whitelist; each rule is idempotent and logged)
# ---------------------------------------------------------------------------

_UNIT_WORDS = (
    "GHz|MHz|kHz|Hz|mil|mm|um|cm|Ohm|pF|nF|uF|nH|uH|ps|ns|us|mV|mA|uA|mW"
)
_UNIT_GLUE_RE = re.compile(
    r"(?<![A-Za-z_\d.])(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)(" + _UNIT_WORDS + r")\b"
)
_TRAILING_COMMA_RE = re.compile(r",(?=\s*(?:\)|$))", re.MULTILINE)
_TRAILING_SEMI_RE = re.compile(r";+\s*$", re.MULTILINE)

_REPAIR_RULES = (
    ("unicode_dash", lambda t: re.subn(r"[‐-―−]", "-", t)),
    ("smart_quotes", lambda t: re.subn(r"[“”‘’]", '"', t)),
    ("odd_whitespace", lambda t: re.subn(r"[ \t]", " ", t)),
    ("trailing_comma", lambda t: _TRAILING_COMMA_RE.subn("", t)),
    ("trailing_semicolon", lambda t: _TRAILING_SEMI_RE.subn("", t)),
    ("unit_spacing", lambda t: _UNIT_GLUE_RE.subn(r"\1 \2", t)),
)


def repair_syntax(netlist_text: str, dialect: str = "spectre_like") -> tuple[str, list[str]]:
    """Apply the whitelisted rewrites and report which ones fired.

    The whitelist is closed: unicode punctuation normalization, whitespace
    normalization, trailing comma/semicolon removal, and separating glued
    unit words from numbers ("2.4GHz" -> "2.4 GHz"). Anything else passes
    through for the parser to accept or reject. Both dialects share the
    same whitelist; ``dialect`` is kept for contract stability.
    """
    if not netlist_text:
        raise ValueError("netlist text must be non-empty")
    repairs: list[str] = []
    text = netlist_text
    for name, rule in _REPAIR_RULES:
        # Iterate to a fixpoint so stacked defects (",,)") clear in one call.
        total = 0
        while True:
            text, count = rule(text)
            total += count
            if count == 0:
                break
        if total:
            repairs.append(f"{name}: {total} occurrence(s)")
    return text, repairs


# ---------------------------------------------------------------------------
# PDK binding
# ---------------------------------------------------------------------------

# Device model names treated as generic (PDK-free) in LLM-produced netlists.
GENERIC_DEVICES = frozenset({"nmos", "pmos", "npn", "pnp", "diode"})


def bind_pdk(netlist_text: str, binding: PdkBinding, dialect: str = "spectre_like") -> str:
    """Bind a raw netlist to local technology models.

    Model include lines are prepended and every generic device name present
    in the netlist is substituted per the device map. Any generic device
    without a mapping raises BindingError naming it. Binding happens after
    the LLM round trip, so mapped names never appear in prompts.
    """
    from .netlist import parse_netlist  # local import to avoid a cycle

    parsed = parse_netlist(netlist_text, dialect)
    present = sorted({c.kind for c in parsed.components} & GENERIC_DEVICES)
    for device in present:
        if device not in binding.device_map:
            raise BindingError(device)

    bound = netlist_text
    for generic in present:
        bound = re.sub(rf"\b{re.escape(generic)}\b", binding.device_map[generic], bound)

    header_lines = list(binding.model_includes)
    if binding.corner:
        header_lines.append(f"// corner: {binding.corner}")
    if header_lines:
        return "\n".join(header_lines) + "\n" + bound
    return bound


# ---------------------------------------------------------------------------
# Verilog module header (ANSI-style subset)
# ---------------------------------------------------------------------------

_MODULE_KW_RE = re.compile(r"(?<![\w$])module(?![\w$])")
_RANGE_RE = re.compile(r"\[\s*(\d+)\s*:\s*(\d+)\s*\]")
_IDENT_RE = re.compile(r"[A-Za-z_][\w$]*")


def _strip_verilog_comments(text: str) -> str:
    text = re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL)
    return re.sub(r"//[^\n]*", " ", text)


def extract_module_header(verilog_text: str) -> ModuleHeader:
    """Parse the single module declaration into name and ordered ports.

    Supports the ANSI header subset: optional direction per port (inherited
    from the previous port when omitted), optional reg/wire/logic/signed,
    optional integer [H:L] range (width H-L+1, default 1). Zero or multiple
    module declarations, or an unterminated port list, raise HeaderError.
    """
    text = _strip_verilog_comments(verilog_text)
    starts = list(_MODULE_KW_RE.finditer(text))
    if len(starts) != 1:
        raise HeaderError(f"expected exactly one module declaration, found {len(starts)}")

    rest = text[starts[0].end():]
    name_match = _IDENT_RE.search(rest)
    if not name_match or rest[: name_match.start()].strip():
        raise HeaderError("missing module name")
    module_name = name_match.group(0)

    # Skip a parameter block #( ... ) if present.
    after = rest[name_match.end():].lstrip()
    if after.startswith("#"):
        close = _match_paren(after, after.index("("))
        after = after[close + 1 :].lstrip()
    if not after.startswith("("):
        raise HeaderError("module header has no port list")
    close = _match_paren(after, 0)
    port_text = after[1:close]

    ports: list[Port] = []
    direction: Optional[str] = None
    width = 1
    for chunk in _split_ports(port_text):
        chunk = chunk.strip()
        if not chunk:
            continue
        tokens = chunk.split()
        this_dir = None
        if tokens[0] in ("input", "output", "inout"):
            this_dir = tokens[0]
            tokens = tokens[1:]
        while tokens and tokens[0] in ("wire", "reg", "logic", "signed"):
            tokens = tokens[1:]
        body = " ".join(tokens)
        rng = _RANGE_RE.search(body)
        if this_dir is not None:
            direction = this_dir
            width = 1
        if rng:
            high, low = int(rng.group(1)), int(rng.group(2))
            if low > high:
                raise HeaderError(f"descending range [{high}:{low}] not supported reversed")
            width = high - low + 1
            body = body[: rng.start()] + body[rng.end() :]
        if direction is None:
            raise HeaderError(f"port '{chunk}' has no direction")
        ident = _IDENT_RE.search(body)
        if not ident:
            raise HeaderError(f"port '{chunk}' has no identifier")
        ports.append(Port(direction, width, ident.group(0)))

    return ModuleHeader(module_name, tuple(ports))


def _match_paren(text: str, open_idx: int) -> int:
    depth = 0
    for i in range(open_idx, len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    raise HeaderError("unbalanced parenthesis in module header")


def _split_ports(port_text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in port_text:
        if ch == "(" or ch == "[":
            depth += 1
        elif ch == ")" or ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def print_module_header(header: ModuleHeader) -> str:
    """Render a header back to canonical ANSI-style source."""
    ports = []
    for p in header.ports:
        rng = f" [{p.width - 1}:0]" if p.width > 1 else ""
        ports.append(f"{p.direction}{rng} {p.name}")
    return f"module {header.module_name}({', '.join(ports)});"


# ---------------------------------------------------------------------------
# Clock constraints
# ---------------------------------------------------------------------------

_QUANTITY_RE = re.compile(r"^(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)\s*([A-Za-z]+)$")

_PERIOD_UNITS = {"ns": 1.0, "us": 1e3, "ps": 1e-3}
_FREQ_UNITS = {"MHz": 1e6, "GHz": 1e9, "kHz": 1e3, "Hz": 1.0}


def make_constraints(clock_attr: str) -> str:
    """Render one clock-constraint line from a "<port> <quantity>" attribute.

    The quantity is a period (ns/us/ps) or a frequency (Hz/kHz/MHz/GHz,
    converted to a period). 1000 MHz on port clk becomes
    "create_clock -period 1.000 [get_ports clk]".
    """
    tokens = clock_attr.split()
    if len(tokens) == 3:
        tokens = [tokens[0], tokens[1] + tokens[2]]
    if len(tokens) != 2:
        raise ConstraintError(f"expected '<port> <period-or-frequency>', got {clock_attr!r}")
    port, quantity = tokens
    if not _IDENT_RE.fullmatch(port):
        raise ConstraintError(f"bad port name {port!r}")
    m = _QUANTITY_RE.match(quantity)
    if not m:
        raise ConstraintError(f"bad quantity {quantity!r}")
    value, unit = float(m.group(1)), m.group(2)
    if unit in _PERIOD_UNITS:
        period_ns = value * _PERIOD_UNITS[unit]
    elif unit in _FREQ_UNITS:
        freq_hz = value * _FREQ_UNITS[unit]
        if freq_hz <= 0:
            raise ConstraintError("frequency must be positive")
        period_ns = 1e9 / freq_hz
    else:
        raise ConstraintError(f"unknown unit {unit!r}")
    if period_ns <= 0:
        raise ConstraintError("period must be positive")
    return f"create_clock -period {period_ns:.3f} [get_ports {port}]"
