"""Run configuration: a flat ``key = value`` file or an equivalent JSON object.

Key-value grammar (one entry per line, ``#`` starts a comment)::

    base       = Z | Q | Fp <p> | F<p> | GF(<p>)
    vars       = x, y                  # identifiers
    weights    = 1, 1                  # optional, default all 1
    sequence   = x^2, y^3              # one polynomial per variable
    s_max      = 3                     # optional, >= 1
    degree_max = 8                     # optional, >= every sequence degree
    seed       = 0                     # optional
    checks     = all | ID, ID, ...     # optional
    output     = cert.json             # optional
    format     = json | text           # optional

Polynomials use integer coefficients, variable names, ``+ - * ^`` and
parentheses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .linalg import BaseRing
from .polyring import PolyRing, Polynomial, RingContext
from .suite import Bounds, CheckId

KEYS = ("base", "vars", "weights", "sequence", "s_max", "degree_max", "seed", "checks",
        "output", "format")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class ConfigError(Exception):
    """``kind`` is ``PARSE_ERROR`` or ``VALIDATION_ERROR``."""

    def __init__(self, kind: str, message: str, line: int | None = None, column: int | None = None):
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{kind}{where}: {message}")


def _parse_error(msg, line=None, col=None):
    return ConfigError("PARSE_ERROR", msg, line, col)


def _validation_error(msg, line=None, col=None):
    return ConfigError("VALIDATION_ERROR", msg, line, col)


# ---------------------------------------------------------------------------
# polynomial expressions


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _ExprParser:
    """Recursive descent over ``expr := term (('+'|'-') term)*`` and friends."""

    def __init__(self, text: str, ring: PolyRing, line: int | None, col0: int):
        self.text = text
        self.ring = ring
        self.line = line
        self.col0 = col0
        self.names = {name: i for i, name in enumerate(ring.names)}
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.end() == pos or not m.group(0).strip():
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", int(m.group(1)), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    def _err(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        return _parse_error(msg, self.line, self.col0 + pos + 1)

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise self._err("empty polynomial")
        p = self.expr()
        if self._peek() is not None:
            raise self._err(f"unexpected {self._peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while (t := self._peek()) is not None and t[0] == "op" and t[1] in "+-":
            self._take()
            q = self.term()
            p = p + q if t[1] == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while (t := self._peek()) is not None and t[0] == "op" and t[1] == "*":
            self._take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        t = self._peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            self._take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        p = self.atom()
        t = self._peek()
        if t is not None and t[0] == "op" and t[1] == "^":
            self._take()
            e = self._take()
            if e is None or e[0] != "int":
                raise self._err("exponent must be a nonnegative integer",
                                e[2] if e else None)
            p = p ** e[1]
        return p

    def atom(self) -> Polynomial:
        t = self._take()
        if t is None:
            raise self._err("unexpected end of expression", len(self.text))
        kind, val, pos = t
        if kind == "int":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.names:
                raise self._err(f"unknown variable {val!r}", pos)
            return self.ring.gen(self.names[val])
        if val == "(":
            p = self.expr()
            close = self._take()
            if close is None or close[1] != ")":
                raise self._err("expected ')'", close[2] if close else len(self.text))
            return p
        raise self._err(f"unexpected {val!r}", pos)


def parse_polynomial(text: str, ring: PolyRing, line: int | None = None, col0: int = 0) -> Polynomial:
    return _ExprParser(text, ring, line, col0).parse()


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    base: str = "Z"
    vars: list[str] = field(default_factory=lambda: ["x", "y"])
    weights: list[int] = field(default_factory=lambda: [1, 1])
    sequence: list[str] = field(default_factory=lambda: ["x", "y"])
    s_max: int = 3
    degree_max: int = 8
    seed: int = 0
    checks: list[str] | None = None  # None means all
    output: str | None = None
    format: str = "json"

    @property
    def bounds(self) -> Bounds:
        return Bounds(self.s_max, self.degree_max)

    @property
    def selection(self) -> list[CheckId] | None:
        return None if self.checks is None else [CheckId(c) for c in self.checks]

    def base_ring(self) -> BaseRing:
        return BaseRing.parse(self.base)

    def context(self) -> RingContext:
        ring = PolyRing(self.base_ring(), self.vars, self.weights)
        return RingContext(ring, [parse_polynomial(s, ring) for s in self.sequence])


def _split_list(value: str) -> list[tuple[str, int]]:
    """Comma-separated items with their column offsets inside ``value``."""
    out, start = [], 0
    for part in value.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), start + lead))
        start += len(part) + 1
    return out


def _int(value, key, line=None, col=None) -> int:
    if isinstance(value, bool):
        raise _validation_error(f"{key} must be an integer", line, col)
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError:
        raise _parse_error(f"{key} must be an integer, got {value!r}", line, col) from None


def _parse_kv(text: str) -> tuple[dict, dict]:
    raw, where = {}, {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise _parse_error("expected 'key = value'", lineno, col)
        key, value = body.split("=", 1)
        k = key.strip().lower()
        kcol = len(key) - len(key.lstrip()) + 1
        if k not in KEYS:
            raise _parse_error(f"unknown key {key.strip()!r}", lineno, kcol)
        if k in raw:
            raise _parse_error(f"duplicate key {k!r}", lineno, kcol)
        vcol = len(key) + 1 + (len(value) - len(value.lstrip()))
        raw[k] = value.strip()
        where[k] = (lineno, vcol)
    out: dict = {}
    for k, v in raw.items():
        line, col = where[k]
        if k in ("vars", "sequence", "weights"):
            items = _split_list(v)
            if k == "weights":
                out[k] = [_int(s, k, line, col + off + 1) for s, off in items]
            else:
                out[k] = [s for s, _ in items]
                where[k] = (line, col, [off for _, off in items])
        elif k in ("s_max", "degree_max", "seed"):
            out[k] = _int(v, k, line, col + 1)
        elif k == "checks":
            out[k] = [s for s, _ in _split_list(v)]
        else:
            out[k] = v
    return out, where


def _parse_json(text: str) -> tuple[dict, dict]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _parse_error(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise _parse_error("top level must be an object", 1, 1)
    for k in data:
        if k not in KEYS:
            raise _parse_error(f"unknown key {k!r}")
    out = dict(data)
    for k in ("vars", "sequence", "weights"):
        if k in out:
            v = out[k]
            if isinstance(v, str):
                v = [s for s, _ in _split_list(v)]
            if not isinstance(v, list):
                raise _validation_error(f"{k} must be a list")
            out[k] = [_int(x, k) for x in v] if k == "weights" else [str(x) for x in v]
    if "checks" in out and isinstance(out["checks"], str):
        out["checks"] = [s for s, _ in _split_list(out["checks"])]
    for k in ("s_max", "degree_max", "seed"):
        if k in out:
            out[k] = _int(out[k], k)
    return out, {}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration (JSON if it starts with ``{``)."""
    if text.lstrip().startswith("{"):
        raw, where = _parse_json(text)
    else:
        raw, where = _parse_kv(text)

    def loc(key, item=None):
        w = where.get(key)
        if not w:
            return None, None
        if item is not None and len(w) > 2:
            return w[0], w[1] + w[2][item] + 1
        return w[0], w[1] + 1

    if "vars" not in raw:
        raise _validation_error("vars is required")
    if "sequence" not in raw:
        raise _validation_error("sequence is required")
    cfg = RunConfig()
    cfg.base = str(raw.get("base", "Z")).strip()
    try:
        base = BaseRing.parse(cfg.base)
    except ValueError as exc:
        raise _validation_error(str(exc), *loc("base")) from None
    cfg.vars = list(raw["vars"])
    if not cfg.vars:
        raise _validation_error("vars must not be empty", *loc("vars"))
    for i, v in enumerate(cfg.vars):
        if not _IDENT.match(v):
            raise _validation_error(f"{v!r} is not a valid variable name", *loc("vars", i))
    if len(set(cfg.vars)) != len(cfg.vars):
        raise _validation_error("variable names must be distinct", *loc("vars"))
    cfg.weights = list(raw.get("weights", [1] * len(cfg.vars)))
    if len(cfg.weights) != len(cfg.vars):
        raise _validation_error("weights and vars differ in length", *loc("weights"))
    if any(w < 1 for w in cfg.weights):
        raise _validation_error("weights must be positive", *loc("weights"))
    cfg.sequence = list(raw["sequence"])
    if len(cfg.sequence) != len(cfg.vars):
        raise _validation_error(
            f"sequence has {len(cfg.sequence)} elements but there are {len(cfg.vars)} variables",
            *loc("sequence"))
    ring = PolyRing(base, cfg.vars, cfg.weights)
    degrees = []
    for i, s in enumerate(cfg.sequence):
        line, col = loc("sequence", i)
        p = parse_polynomial(s, ring, line, (col - 1) if col else 0)
        if p.is_zero():
            raise _validation_error(f"sequence element {s!r} is zero", line, col)
        if not p.is_homogeneous():
            raise _validation_error(f"sequence element {s!r} is not homogeneous", line, col)
        degrees.append(p.degree)
    cfg.s_max = raw.get("s_max", 3)
    if cfg.s_max < 1:
        raise _validation_error("s_max must be at least 1", *loc("s_max"))
    cfg.degree_max = raw.get("degree_max", 8)
    if cfg.degree_max < max(degrees):
        raise _validation_error(f"degree_max must be at least {max(degrees)}, the largest sequence degree",
                                *loc("degree_max"))
    cfg.seed = raw.get("seed", 0)
    checks = raw.get("checks")
    if checks is None or [c.lower() for c in checks] == ["all"]:
        cfg.checks = None
    else:
        normalized = []
        for i, c in enumerate(checks):
            try:
                normalized.append(CheckId(c.strip().upper()).value)
            except ValueError:
                raise _validation_error(f"unknown check {c!r}", *loc("checks")) from None
        cfg.checks = normalized
    out = raw.get("output")
    cfg.output = str(out) if out not in (None, "") else None
    fmt = str(raw.get("format", "json")).strip().lower()
    if fmt not in ("json", "text"):
        raise _validation_error("format must be json or text", *loc("format"))
    cfg.format = fmt
    return cfg


def render(cfg: RunConfig) -> str:
    """Key-value text that parses back to ``cfg``."""
    lines = [
        f"base = {cfg.base}",
        f"vars = {', '.join(cfg.vars)}",
        f"weights = {', '.join(str(w) for w in cfg.weights)}",
        f"sequence = {', '.join(cfg.sequence)}",
        f"s_max = {cfg.s_max}",
        f"degree_max = {cfg.degree_max}",
        f"seed = {cfg.seed}",
        f"checks = {'all' if cfg.checks is None else ', '.join(cfg.checks)}",
    ]
    if cfg.output is not None:
        lines.append(f"output = {cfg.output}")
    lines.append(f"format = {cfg.format}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


__all__ = ["ConfigError", "RunConfig", "parse_config", "parse_polynomial", "render", "load_config"]
