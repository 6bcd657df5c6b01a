"""Line-oriented netlist parser for the two supported dialects.

Grammar (documented here; this dialect pair is this project's own minimal
grammar, not any vendor's):

Lexical, both dialects
  - UTF-8, line oriented. "//" starts a comment anywhere; a line whose
    first non-blank character is "*" is a comment line. Blank lines are
    ignored. A line starting with "+" continues the previous statement.
  - Numbers accept engineering suffixes (f p n u m k MEG G T) glued to the
    literal and/or a following unit word (Hz kHz MHz GHz mm mil um cm Ohm
    pF nF uF nH uH ps ns us V mV mA uA W mW s). Values are normalized to SI;
    the raw spelling is kept for round-trip printing.

spectre_like statements
  - Dot directives: .ac dec|lin <n> <fstart> <fstop>; .dc [<name> <start>
    <stop> <step>]; .tran <step> <stop>; .param <name>=<value>...;
    .include "<path>". ".end" is accepted and dropped.
  - Instances, selected by the first letter of the instance name:
    R/C/L  <name> <n1> <n2> <value> [<p>=<v>...]        kind = R|C|L
    V/I    <name> <n+> <n-> [dc] <value> [ac <mag>]     kind = vsource|isource
    M      <name> <d> <g> <s> <b> <model> [<p>=<v>...]  kind = <model>

ads_like statements
  - <Kind>:<Name> <net>... <p>=<v> [unit]...
    Bare tokens before the first "=" parameter are net names. Kinds MSUB,
    Model and Options parse as directives (substrate/model), S_Param parses
    as an sparams directive with its sweep taken from Start/Stop[/Step];
    every other kind is a component and must have at least one net.
"""

from __future__ import annotations

import re
from typing import Optional

from .model import Component, Directive, Netlist, ParamValue, SweepRange


class ParseError(Exception):
    """Netlist text rejected; carries the 1-based source line."""

    def __init__(self, message: str, line: int, token: str = ""):
        loc = f"line {line}"
        if token:
            loc += f" near {token!r}"
        super().__init__(f"{message} ({loc})")
        self.line = line
        self.token = token


_SUFFIXES = {
    "T": 1e12,
    "G": 1e9,
    "MEG": 1e6,
    "k": 1e3,
    "K": 1e3,
    "m": 1e-3,
    "u": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
    "f": 1e-15,
}

_UNIT_WORDS = {
    "Hz": 1.0,
    "kHz": 1e3,
    "MHz": 1e6,
    "GHz": 1e9,
    "mm": 1e-3,
    "cm": 1e-2,
    "um": 1e-6,
    "mil": 2.54e-5,
    "Ohm": 1.0,
    "pF": 1e-12,
    "nF": 1e-9,
    "uF": 1e-6,
    "nH": 1e-9,
    "uH": 1e-6,
    "ps": 1e-12,
    "ns": 1e-9,
    "us": 1e-6,
    "s": 1.0,
    "V": 1.0,
    "mV": 1e-3,
    "A": 1.0,
    "mA": 1e-3,
    "uA": 1e-6,
    "W": 1.0,
    "mW": 1e-3,
}

_NUMBER_RE = re.compile(r"^([+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)([A-Za-z]*)$")


def parse_value(token: str, unit_token: Optional[str] = None) -> Optional[ParamValue]:
    """Parse one numeric token (plus optional separate unit word) to SI.

    Returns None when the token is not a number. A glued alphabetic tail is
    interpreted first as a unit word, then as an engineering suffix.
    """
    m = _NUMBER_RE.match(token)
    if not m:
        return None
    base = float(m.group(1))
    tail = m.group(2)
    raw = token
    unit = ""
    scale = 1.0
    if tail:
        if tail in _UNIT_WORDS:
            unit, scale = tail, _UNIT_WORDS[tail]
        elif tail in _SUFFIXES:
            scale = _SUFFIXES[tail]
        else:
            return None
    elif unit_token is not None and unit_token in _UNIT_WORDS:
        unit, scale = unit_token, _UNIT_WORDS[unit_token]
        raw = f"{token} {unit_token}"
    return ParamValue(raw=raw, value=base * scale, unit=unit)


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Join continuations and strip comments; returns (line_no, text) pairs."""
    out: list[tuple[int, str]] = []
    for idx, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("//", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("*"):
            continue
        if line.lstrip().startswith("+"):
            if not out:
                raise ParseError("continuation with no previous statement", idx)
            prev_no, prev = out[-1]
            out[-1] = (prev_no, prev + " " + line.lstrip()[1:].strip())
        else:
            out.append((idx, line.strip()))
    return out


def _tokenize(line: str, line_no: int) -> list[str]:
    tokens: list[str] = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j = line.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string", line_no, line[i : i + 8])
            tokens.append(line[i : j + 1])
            i = j + 1
            continue
        j = i
        while j < n and not line[j].isspace() and line[j] != '"':
            j += 1
        word = line[i:j]
        # Split around '=' so "a=1", "a =1", "a = 1" tokenize identically.
        while "=" in word:
            k = word.index("=")
            if k > 0:
                tokens.append(word[:k])
            tokens.append("=")
            word = word[k + 1 :]
        if word:
            tokens.append(word)
        i = j
    return tokens


def _take_params(tokens: list[str], start: int, line_no: int) -> tuple[dict[str, ParamValue], int]:
    """Consume name=value pairs (value may carry a separate unit word)."""
    params: dict[str, ParamValue] = {}
    i = start
    while i < len(tokens):
        if i + 1 >= len(tokens) or tokens[i + 1] != "=":
            break
        name = tokens[i]
        if i + 2 >= len(tokens) or tokens[i + 2] == "=":
            raise ParseError(f"parameter {name} has no value", line_no, name)
        value_tok = tokens[i + 2]
        consumed = 3
        if value_tok.startswith('"') and value_tok.endswith('"'):
            params[name] = ParamValue(raw=value_tok, text=value_tok[1:-1])
        else:
            unit_tok = None
            if i + 3 < len(tokens) and tokens[i + 3] in _UNIT_WORDS and (
                i + 4 >= len(tokens) or tokens[i + 4] != "="
            ):
                unit_tok = tokens[i + 3]
            pv = parse_value(value_tok, unit_tok)
            if pv is None:
                raise ParseError(f"bad value for parameter {name}", line_no, value_tok)
            if unit_tok and pv.unit == unit_tok:
                consumed = 4
            params[name] = pv
        i += consumed
    return params, i


_ADS_STMT_RE = re.compile(r"^([A-Za-z_]\w*):([A-Za-z_]\w*)$")
_ADS_DIRECTIVE_KINDS = {"MSUB": "substrate", "Model": "model", "Options": "model"}


def _parse_ads_line(line_no: int, tokens: list[str]) -> Component | Directive:
    head = _ADS_STMT_RE.match(tokens[0])
    if not head:
        raise ParseError("expected Kind:Name statement", line_no, tokens[0])
    kind, name = head.group(1), head.group(2)

    nets: list[str] = []
    i = 1
    while i < len(tokens) and (i + 1 >= len(tokens) or tokens[i + 1] != "="):
        if tokens[i] == "=":
            raise ParseError("dangling '='", line_no, tokens[i - 1] if i else "")
        nets.append(tokens[i])
        i += 1
    params, end = _take_params(tokens, i, line_no)
    if end != len(tokens):
        raise ParseError("trailing tokens after parameters", line_no, tokens[end])

    if kind == "S_Param":
        sweep = _sparam_sweep(params, line_no)
        return Directive(
            dtype="sparams", name=name, kind=kind, sweep=sweep, params=params, line=line_no
        )
    if kind in _ADS_DIRECTIVE_KINDS:
        return Directive(
            dtype=_ADS_DIRECTIVE_KINDS[kind], name=name, kind=kind, params=params, line=line_no
        )
    if not nets:
        raise ParseError(f"component {name} ({kind}) has no terminals", line_no, kind)
    return Component(instance_name=name, kind=kind, terminals=tuple(nets), params=params, line=line_no)


def _sparam_sweep(params: dict[str, ParamValue], line_no: int) -> SweepRange:
    try:
        start = params["Start"].value
        stop = params["Stop"].value
    except KeyError as exc:
        raise ParseError(f"S_Param block missing {exc.args[0]}", line_no) from exc
    if start is None or stop is None:
        raise ParseError("S_Param Start/Stop must be numeric", line_no)
    step_pv = params.get("Step")
    if step_pv is not None and step_pv.value:
        return SweepRange("step", start, stop, step_pv.value)
    return SweepRange("lin", start, stop, 101)


_ELEMENT_ARITY = {"R": 2, "C": 2, "L": 2, "V": 2, "I": 2, "M": 4}
_ELEMENT_KIND = {"R": "R", "C": "C", "L": "L", "V": "vsource", "I": "isource"}


def _parse_spectre_line(line_no: int, tokens: list[str]) -> Component | Directive:
    first = tokens[0]
    if first.startswith("."):
        return _parse_dot_directive(line_no, tokens)

    letter = first[0].upper()
    if letter not in _ELEMENT_ARITY:
        raise ParseError(f"unsupported element letter '{first[0]}'", line_no, first)
    arity = _ELEMENT_ARITY[letter]
    if len(tokens) < 1 + arity:
        raise ParseError(f"{first} needs {arity} terminals", line_no, first)
    nets = tuple(tokens[1 : 1 + arity])
    rest = 1 + arity
    params: dict[str, ParamValue] = {}

    if letter in ("R", "C", "L"):
        if rest >= len(tokens):
            raise ParseError(f"{first} is missing its value", line_no, first)
        pv = parse_value(tokens[rest])
        if pv is None:
            raise ParseError(f"bad {letter} value", line_no, tokens[rest])
        params["value"] = pv
        rest += 1
        kind = _ELEMENT_KIND[letter]
    elif letter in ("V", "I"):
        kind = _ELEMENT_KIND[letter]
        while rest < len(tokens) and (rest + 1 >= len(tokens) or tokens[rest + 1] != "="):
            tok = tokens[rest]
            if tok in ("dc", "ac"):
                if rest + 1 >= len(tokens):
                    raise ParseError(f"{tok} needs a value", line_no, tok)
                pv = parse_value(tokens[rest + 1])
                if pv is None:
                    raise ParseError(f"bad {tok} value", line_no, tokens[rest + 1])
                params[tok] = pv
                rest += 2
            else:
                pv = parse_value(tok)
                if pv is None:
                    raise ParseError("bad source value", line_no, tok)
                params["dc"] = pv
                rest += 1
    else:  # MOS instance; kind comes from the model token
        if rest >= len(tokens):
            raise ParseError(f"{first} is missing its model name", line_no, first)
        kind = tokens[rest]
        rest += 1

    tail, end = _take_params(tokens, rest, line_no)
    if end != len(tokens):
        raise ParseError("trailing tokens after parameters", line_no, tokens[end])
    params.update(tail)
    return Component(instance_name=first, kind=kind, terminals=nets, params=params, line=line_no)


def _parse_dot_directive(line_no: int, tokens: list[str]) -> Optional[Directive]:
    word = tokens[0][1:].lower()
    if word in ("end", "ends"):
        return None
    if word == "param":
        params, end = _take_params(tokens, 1, line_no)
        if not params or end != len(tokens):
            raise ParseError(".param needs name=value pairs", line_no)
        return Directive(dtype="param", kind=".param", params=params, line=line_no)
    if word == "include":
        if len(tokens) != 2:
            raise ParseError(".include needs one path", line_no)
        path = tokens[1].strip('"')
        return Directive(dtype="include", kind=".include", args=(path,), line=line_no)
    if word == "ac":
        if len(tokens) != 5 or tokens[1] not in ("dec", "lin"):
            raise ParseError(".ac needs: dec|lin <n> <fstart> <fstop>", line_no)
        n = parse_value(tokens[2])
        f0 = parse_value(tokens[3])
        f1 = parse_value(tokens[4])
        if n is None or f0 is None or f1 is None:
            raise ParseError("bad .ac sweep numbers", line_no)
        return Directive(
            dtype="ac",
            kind=".ac",
            sweep=SweepRange(tokens[1], f0.value, f1.value, n.value),
            args=(tokens[1],),
            line=line_no,
        )
    if word == "dc":
        if len(tokens) == 1:
            return Directive(dtype="dc", kind=".dc", line=line_no)
        if len(tokens) != 5:
            raise ParseError(".dc needs: <name> <start> <stop> <step>", line_no)
        v0, v1, dv = (parse_value(t) for t in tokens[2:5])
        if v0 is None or v1 is None or dv is None:
            raise ParseError("bad .dc sweep numbers", line_no)
        return Directive(
            dtype="dc",
            kind=".dc",
            sweep=SweepRange("step", v0.value, v1.value, dv.value),
            args=(tokens[1],),
            line=line_no,
        )
    if word == "tran":
        if len(tokens) != 3:
            raise ParseError(".tran needs: <step> <stop>", line_no)
        dt = parse_value(tokens[1])
        t1 = parse_value(tokens[2])
        if dt is None or t1 is None:
            raise ParseError("bad .tran numbers", line_no)
        return Directive(
            dtype="tran",
            kind=".tran",
            sweep=SweepRange("step", 0.0, t1.value, dt.value),
            line=line_no,
        )
    raise ParseError(f"unknown directive .{word}", line_no, tokens[0])


def parse_netlist(text: str, dialect: str) -> Netlist:
    """Parse netlist text into the typed model for the given dialect."""
    if dialect not in ("spectre_like", "ads_like"):
        raise ValueError(f"unknown dialect {dialect!r}")
    items: list[object] = []
    seen_names: set[str] = set()
    for line_no, line in _logical_lines(text):
        tokens = _tokenize(line, line_no)
        if not tokens:
            continue
        if dialect == "ads_like":
            item = _parse_ads_line(line_no, tokens)
        else:
            item = _parse_spectre_line(line_no, tokens)
        if item is None:
            continue
        if isinstance(item, Component):
            if item.instance_name in seen_names:
                raise ParseError(f"duplicate instance name {item.instance_name}", line_no)
            seen_names.add(item.instance_name)
        items.append(item)
    if not items:
        raise ParseError("netlist has no statements", 1)
    return Netlist(dialect=dialect, items=tuple(items))


# ---------------------------------------------------------------------------
# Printing (round-trip: parse -> print -> parse is an AST fixpoint)
# ---------------------------------------------------------------------------


def _format_params(params: dict[str, ParamValue]) -> str:
    parts = []
    for name, pv in params.items():
        if pv.text is not None:
            parts.append(f'{name}="{pv.text}"')
        else:
            parts.append(f"{name}={pv.raw}")
    return " ".join(parts)


def print_netlist(netlist: Netlist) -> str:
    """Render a parsed netlist back to source text."""
    lines: list[str] = []
    for item in netlist.items:
        if isinstance(item, Component):
            if netlist.dialect == "ads_like":
                head = f"{item.kind}:{item.instance_name}"
                body = " ".join(item.terminals)
                tail = _format_params(item.params)
                lines.append(" ".join(x for x in (head, body, tail) if x))
            else:
                lines.append(_print_spectre_component(item))
        else:
            lines.append(_print_directive(item, netlist.dialect))
    return "\n".join(lines) + "\n"


def _print_spectre_component(c: Component) -> str:
    letter = c.instance_name[0].upper()
    parts = [c.instance_name, *c.terminals]
    params = dict(c.params)
    if letter in ("R", "C", "L"):
        parts.append(params.pop("value").raw)
    elif letter in ("V", "I"):
        if "dc" in params:
            parts += ["dc", params.pop("dc").raw]
        if "ac" in params:
            parts += ["ac", params.pop("ac").raw]
    else:
        parts.append(c.kind)
    tail = _format_params(params)
    if tail:
        parts.append(tail)
    return " ".join(parts)


def _print_directive(d: Directive, dialect: str) -> str:
    if dialect == "ads_like":
        head = f"{d.kind}:{d.name}"
        tail = _format_params(d.params)
        return " ".join(x for x in (head, tail) if x)
    if d.dtype == "param":
        return ".param " + _format_params(d.params)
    if d.dtype == "include":
        return f'.include "{d.args[0]}"'
    if d.dtype == "ac":
        s = d.sweep
        return f".ac {s.scale} {_num(s.n)} {_num(s.start)} {_num(s.stop)}"
    if d.dtype == "dc":
        if d.sweep is None:
            return ".dc"
        s = d.sweep
        return f".dc {d.args[0]} {_num(s.start)} {_num(s.stop)} {_num(s.n)}"
    if d.dtype == "tran":
        s = d.sweep
        return f".tran {_num(s.n)} {_num(s.stop)}"
    raise ValueError(f"cannot print directive {d.dtype} in dialect {dialect}")


def _num(x: float) -> str:
    # repr round-trips floats exactly; %g would truncate to 6 digits.
    return repr(float(x))
