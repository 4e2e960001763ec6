"""File formats: configuration JSON, degree lists, graph exports, run manifests.

Rationals travel as ``"p/q"`` strings everywhere; JSON numbers with a
fractional part are rejected so that no binary float ever reaches the model.
Every parser is strict: unknown keys, missing keys and out-of-range ids raise
:class:`ParseError` with a location such as ``events[3].rate``.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import InvalidInputError, ParseError
from .model import B_EPS, ConnectionGraph, Event, EventConfiguration, Parameters

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text, where: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string like \"3/5\", got {json.dumps(text)}", where)
    m = _RATIONAL.match(text.strip())
    if not m:
        raise ParseError(f"malformed rational {text!r}", where)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", where)
    return Fraction(num, den)


def _keys(obj, where: str, required: set, optional: set = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object, got {type(obj).__name__}", where)
    unknown = sorted(set(obj) - required - optional)
    if unknown:
        raise ParseError(f"unknown field(s) {', '.join(unknown)}", where)
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", where)


def _int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError(f"expected an integer, got {json.dumps(x)}", where)
    return x


# parameters and configurations

def params_from_json(obj, where: str = "params") -> Parameters:
    _keys(obj, where, {"a", "b", "c", "n"})
    a = parse_rational(obj["a"], f"{where}.a")
    c = parse_rational(obj["c"], f"{where}.c")
    b = B_EPS if obj["b"] == "eps" else parse_rational(obj["b"], f"{where}.b")
    n = _int(obj["n"], f"{where}.n")
    try:
        return Parameters(a=a, b=b, c=c, n=n)
    except InvalidInputError as e:
        raise ParseError(str(e), where) from None


def params_to_json(p: Parameters) -> dict:
    return {
        "a": format_rational(p.a),
        "b": "eps" if p.b is B_EPS else format_rational(p.b),
        "c": format_rational(p.c),
        "n": p.n,
    }


def _event_from_json(obj, where: str, n: int, host: Optional[int] = None) -> Event:
    if host is None:
        _keys(obj, where, {"host", "invitees", "rate"})
        host = _int(obj["host"], f"{where}.host")
        if not 0 <= host < n:
            raise ParseError(f"dangling agent id {host} (n={n})", f"{where}.host")
    else:
        _keys(obj, where, {"invitees", "rate"})
    inv = obj["invitees"]
    if not isinstance(inv, list) or not inv:
        raise ParseError("invitees must be a non-empty list", f"{where}.invitees")
    seen = set()
    for i, u in enumerate(inv):
        u = _int(u, f"{where}.invitees[{i}]")
        if not 0 <= u < n:
            raise ParseError(f"dangling agent id {u} (n={n})", f"{where}.invitees[{i}]")
        if u == host:
            raise ParseError(f"host {host} invites itself", f"{where}.invitees[{i}]")
        if u in seen:
            raise ParseError(f"agent {u} listed twice", f"{where}.invitees[{i}]")
        seen.add(u)
    rate = parse_rational(obj["rate"], f"{where}.rate")
    if rate <= 0:
        raise ParseError(f"rate must be positive, got {format_rational(rate)}", f"{where}.rate")
    return Event(host, frozenset(seen), rate)


def config_from_json(doc) -> EventConfiguration:
    _keys(doc, "$", {"params", "events"})
    params = params_from_json(doc["params"])
    if not isinstance(doc["events"], list):
        raise ParseError("events must be a list", "events")
    events = [_event_from_json(e, f"events[{i}]", params.n) for i, e in enumerate(doc["events"])]
    return EventConfiguration.from_events(params, events)


def config_to_json(config: EventConfiguration) -> dict:
    return {
        "params": params_to_json(config.params),
        "events": [
            {"host": e.host, "invitees": sorted(e.invitees), "rate": format_rational(e.rate)}
            for e in config.events()
        ],
    }


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def serialize(config: EventConfiguration) -> str:
    return dumps(config_to_json(config))


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"{source}:{e.lineno}:{e.colno}") from None


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(e.strerror or str(e), str(path)) from None


def parse_config_text(text: str, source: str = "<string>") -> EventConfiguration:
    try:
        return config_from_json(_load_json(text, source))
    except ParseError as e:
        if e.location.startswith(source):
            raise
        raise ParseError(e.message, f"{source}:{e.location}") from None


def parse_config(path) -> EventConfiguration:
    return parse_config_text(read_text(path), str(path))


def canonical(text: str) -> str:
    """Canonical form of a configuration document: what :func:`serialize` would emit."""
    return serialize(parse_config_text(text))


# degree sequences

def parse_degrees(text: str, source: str = "<string>") -> list:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if not re.fullmatch(r"\d+", s):
            raise ParseError(f"expected one non-negative integer per line, got {s!r}", f"{source}:{lineno}")
        out.append(int(s))
    if not out:
        raise ParseError("no degrees found", source)
    return out


# graph export

def export_graph(G: ConnectionGraph, fmt: str = "edgelist") -> str:
    edges = G.sorted_edges()
    if fmt == "edgelist":
        return "".join(f"{u} {v}\n" for u, v in edges)
    if fmt == "dot":
        lines = ["graph G {"]
        lines += [f"  {v};" for v in range(G.n)]
        lines += [f"  {u} -- {v};" for u, v in edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise InvalidInputError(f"unknown export format {fmt!r}")


def parse_edgelist(text: str, n: Optional[int] = None, source: str = "<string>") -> ConnectionGraph:
    edges = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.split()
        if not s:
            continue
        if len(s) != 2 or not all(re.fullmatch(r"\d+", t) for t in s):
            raise ParseError(f"expected 'u v', got {line!r}", f"{source}:{lineno}")
        u, v = int(s[0]), int(s[1])
        if u == v:
            raise ParseError(f"self-loop at {u}", f"{source}:{lineno}")
        edges.add((min(u, v), max(u, v)))
    top = max((v for _, v in edges), default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise ParseError(f"vertex {top - 1} outside 0..{n - 1}", source)
    return ConnectionGraph.from_edges(n, edges)


# run manifests

def sha256(data) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


@dataclass
class RunManifest:
    argv: list
    seed: Optional[int] = None
    parameters: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    version: str = ""
    backend: str = ""

    def add_input(self, path) -> None:
        self.inputs[str(path)] = sha256(Path(path).read_bytes())

    def add_output(self, path, text: str) -> None:
        self.outputs[str(path)] = sha256(text)

    def to_json(self) -> dict:
        return {
            "argv": list(self.argv),
            "seed": self.seed,
            "parameters": self.parameters,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
            "wall_clock_seconds": round(self.wall_clock, 6),
            "version": self.version,
            "backend": self.backend,
        }
