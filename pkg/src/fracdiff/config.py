"""Run configuration: ``key = value`` text files and their lowering to problems.

Initial and boundary data are written in a tiny polynomial grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "·") factor)*
    factor := ("+" | "-") factor | NUMBER | VAR | "(" expr ")"

where VAR is ``x`` for initial data and ``t`` for boundary data.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FractionalOrder, Grid, ProblemSpec
from .errors import ConfigError, MalformedValue, MissingRequired, UnknownKey

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*·−()]))"
)


class ExprError(ConfigError):
    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExprError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, var: str):
        self.tokens = _tokenize(text)
        self.var = var
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected {value!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-", "−"):
            op = "+" if self.take()[1] == "+" else "-"
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "·"):
            self.take()
            node = ("*", node, self.factor())
        return node

    def factor(self):
        kind, value, pos = self.take()
        if value in ("+", "-", "−"):
            inner = self.factor()
            return inner if value == "+" else ("neg", inner)
        if kind == "num":
            return ("num", float(value))
        if kind == "name":
            if value != self.var:
                raise ExprError(f"unknown variable {value!r} (expected {self.var!r})", pos)
            return ("var",)
        if value == "(":
            node = self.expr()
            kind, value, pos = self.take()
            if value != ")":
                raise ExprError("missing ')'", pos)
            return node
        raise ExprError("expected a number, variable or '('" if kind != "end" else "unexpected end of input", pos)


def _eval(node, v):
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return v
    if tag == "neg":
        return -_eval(node[1], v)
    a, b = _eval(node[1], v), _eval(node[2], v)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    return a * b


@dataclass(frozen=True)
class Expr:
    """Polynomial expression in one variable; compares by its source text."""

    text: str
    var: str = "x"
    tree: tuple = dataclasses.field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "text", self.text.strip())
        object.__setattr__(self, "tree", _Parser(self.text, self.var).parse())

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        return np.broadcast_to(np.asarray(_eval(self.tree, v), dtype=float), v.shape).copy()

    @classmethod
    def constant(cls, value: float, var: str = "x") -> "Expr":
        return cls(repr(float(value)), var)


SCHEMES = ("fdm", "fem", "both")


@dataclass(frozen=True)
class RunConfig:
    alpha: tuple
    k_alpha: float
    L: float
    N: int
    T: float
    dt: Optional[float] = None  # None means "auto"
    safety: float = 0.9
    scheme: str = "both"
    ic_p0: Expr = Expr("0", "x")
    ic_p1: Expr = Expr("0", "x")
    bc_left: Expr = Expr("0", "t")
    bc_right: Expr = Expr("0", "t")
    probe_x: Optional[float] = None  # None means L/2
    memory_window: Optional[int] = None
    output_dir: str = "fracdiff_out"
    snapshots: int = 4

    def __post_init__(self):
        if self.probe_x is None:
            object.__setattr__(self, "probe_x", self.L / 2.0)

    @property
    def schemes(self) -> tuple:
        return ("fdm", "fem") if self.scheme == "both" else (self.scheme,)

    def problem(self, alpha: float) -> ProblemSpec:
        """ProblemSpec for one sweep member; the grid carries T but F is set by the caller."""
        return ProblemSpec(
            order=FractionalOrder(alpha),
            k_alpha=self.k_alpha,
            grid=Grid(L=self.L, N=self.N, T=self.T, F=1),
            p0=self.ic_p0,
            p1=self.ic_p1,
            g0=self.bc_left,
            gL=self.bc_right,
        )


REQUIRED = ("alpha", "k_alpha", "L", "N", "T")


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number")
    return value


def _positive(text):
    value = _float(text)
    if value <= 0:
        raise ValueError("must be positive")
    return value


def _alpha_list(text):
    items = [s.strip() for s in text.split(",")]
    if not text.strip() or any(not s for s in items):
        raise ValueError("alpha list is empty or has an empty entry")
    out = []
    for s in items:
        a = _float(s)
        if not (0.0 < a <= 2.0):
            raise ValueError(f"alpha={s} outside (0, 2]")
        out.append(a)
    return tuple(out)


def _grid_count(text):
    n = int(text)
    if n < 2:
        raise ValueError("N must be at least 2")
    return n


def _dt(text):
    return None if text.strip().lower() == "auto" else _positive(text)


def _safety(text):
    s = _float(text)
    if not (0.0 < s <= 1.0):
        raise ValueError("safety must lie in (0, 1]")
    return s


def _scheme(text):
    s = text.strip().lower()
    if s not in SCHEMES:
        raise ValueError(f"scheme must be one of {', '.join(SCHEMES)}")
    return s


def _window(text):
    if text.strip().lower() == "none":
        return None
    w = int(text)
    if w < 2:
        raise ValueError("memory_window must be at least 2")
    return w


def _snapshots(text):
    n = int(text)
    if n < 2:
        raise ValueError("snapshots must be at least 2")
    return n


def _text(text):
    if not text:
        raise ValueError("empty value")
    return text


PARSERS = {
    "alpha": _alpha_list,
    "k_alpha": _positive,
    "L": _positive,
    "N": _grid_count,
    "T": _positive,
    "dt": _dt,
    "safety": _safety,
    "scheme": _scheme,
    "ic_p0": lambda s: Expr(s, "x"),
    "ic_p1": lambda s: Expr(s, "x"),
    "bc_left": lambda s: Expr(s, "t"),
    "bc_right": lambda s: Expr(s, "t"),
    "probe_x": _float,
    "memory_window": _window,
    "output_dir": _text,
    "snapshots": _snapshots,
}


def parse_value(key: str, text: str, line=None, column=None):
    """Parse one value; errors carry the location of the offending character."""
    try:
        return PARSERS[key](text)
    except ExprError as exc:
        col = None if column is None else column + exc.offset
        raise MalformedValue(f"{key}: {exc.args[0]}", line, col) from None
    except ValueError as exc:
        raise MalformedValue(f"{key}: {exc}", line, column) from None


def parse_config(text: str) -> RunConfig:
    values = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise MalformedValue("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in PARSERS:
            raise UnknownKey(f"unknown key {key!r}", lineno, key_col)
        if key in values:
            raise MalformedValue(f"duplicate key {key!r}", lineno, key_col)
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        values[key] = parse_value(key, value_part.strip(), lineno, value_col)
        where[key] = (lineno, value_col)

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise MissingRequired(f"missing required key(s): {', '.join(missing)}")
    config = RunConfig(**values)
    if not (0.0 <= config.probe_x <= config.L):
        line, col = where.get("probe_x", (None, None))
        raise MalformedValue(f"probe_x={config.probe_x} outside [0, L]", line, col)
    return config


def render(config: RunConfig) -> str:
    """Inverse of :func:`parse_config`."""
    lines = [
        "alpha = " + ", ".join(repr(a) for a in config.alpha),
        f"k_alpha = {config.k_alpha!r}",
        f"L = {config.L!r}",
        f"N = {config.N}",
        f"T = {config.T!r}",
        "dt = " + ("auto" if config.dt is None else repr(config.dt)),
        f"safety = {config.safety!r}",
        f"scheme = {config.scheme}",
        f"ic_p0 = {config.ic_p0.text}",
        f"ic_p1 = {config.ic_p1.text}",
        f"bc_left = {config.bc_left.text}",
        f"bc_right = {config.bc_right.text}",
        f"probe_x = {config.probe_x!r}",
        "memory_window = " + ("none" if config.memory_window is None else str(config.memory_window)),
        f"output_dir = {config.output_dir}",
        f"snapshots = {config.snapshots}",
    ]
    return "\n".join(lines) + "\n"
