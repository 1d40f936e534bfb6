"""A small line-oriented text format for real-time programs.

Example::

    rtp 1
    clock x, z
    stopwatch y
    location iota
    location l0
    location l1 rate y = 0
    location l2 rate y = 0
    initial iota
    accepting l2
    edge i  : iota -> l0 do x := 0; y := 0; z := 0
    edge t0 : l0 -> l1 do z := 0
    edge t1 : l1 -> l1 when x == 1 do x := 0
    edge t2 : l1 -> l2 when x - y >= 1 and z < 1

Guards combine comparisons of affine expressions with ``and``/``or`` and
parentheses; they are stored in conjunctive normal form.  Numbers are
integers or fractions ``n/d``; decimal notation is rejected so that every
constant is exact.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .encode import TimedWord
from .lra import EQ, ClausalSet, LinConstraint, LinTerm, compare, format_rational, format_term
from .model import (CLOCK, CONTINUOUS, DISCRETE, PARAMETER, STOPWATCH, Edge, Instruction,
                    RateSpec, RealTimeProgram, VarDecl, validate)

FORMAT_VERSION = "1"

_KIND_WORDS = {
    "clock": CLOCK,
    "stopwatch": STOPWATCH,
    "discrete": DISCRETE,
    "param": PARAMETER,
    "parameter": PARAMETER,
    "continuous": CONTINUOUS,
}
_KIND_KEYWORD = {CLOCK: "clock", STOPWATCH: "stopwatch", DISCRETE: "discrete",
                 PARAMETER: "param", CONTINUOUS: "continuous"}
_RESERVED = {"and", "or", "true", "false", "when", "do", "rate", "in", "edge", "location",
             "initial", "accepting", "rtp"} | set(_KIND_WORDS)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class ModelError(ValueError):
    """Raised by :func:`parse_model`; carries every diagnostic found."""

    def __init__(self, diagnostics: Sequence[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|->|<=|>=|==|<|>|\+|-|\*|/|\(|\)|\[|\]|,|;|:|=)
""", re.VERBOSE)


class _Syntax(Exception):
    def __init__(self, col: int, msg: str):
        self.col = col
        self.msg = msg


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(s: str, offset: int) -> List[_Tok]:
    out: List[_Tok] = []
    i = 0
    while i < len(s):
        m = _TOKEN.match(s, i)
        if m is None:
            raise _Syntax(offset + i, f"unexpected character {s[i]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind == "float":
            raise _Syntax(offset + i, f"decimal number {text!r}; write it as a fraction n/d")
        if kind != "ws":
            out.append(_Tok(kind, text, offset + i))
        i = m.end()
    return out


class _Parser:
    def __init__(self, toks: List[_Tok], end_col: int):
        self.toks = toks
        self.i = 0
        self.end_col = end_col

    def peek(self, k: int = 0) -> Optional[_Tok]:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def col(self) -> int:
        t = self.peek()
        return t.col if t else self.end_col

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text and t.kind in ("op", "ident")

    def take(self, text: str) -> _Tok:
        t = self.peek()
        if t is None or t.text != text:
            found = repr(t.text) if t else "end of line"
            raise _Syntax(self.col(), f"expected {text!r}, found {found}")
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> str:
        t = self.peek()
        if t is None or t.kind != "ident" or t.text in _RESERVED:
            found = repr(t.text) if t else "end of line"
            raise _Syntax(self.col(), f"expected {what}, found {found}")
        self.i += 1
        return t.text

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def expect_end(self) -> None:
        if not self.done():
            t = self.peek()
            raise _Syntax(t.col, f"unexpected {t.text!r}")

    # numbers and affine expressions ---------------------------------------

    def number(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.i += 1
            neg = True
        t = self.peek()
        if t is None or t.kind != "num":
            found = repr(t.text) if t else "end of line"
            raise _Syntax(self.col(), f"expected a number, found {found}")
        self.i += 1
        try:
            q = Fraction(t.text)
        except ZeroDivisionError:
            raise _Syntax(t.col, "zero denominator") from None
        return -q if neg else q

    def affine(self, names: Dict[str, str]) -> LinTerm:
        terms = [self._signed_term(names, first=True)]
        while self.at("+") or self.at("-"):
            terms.append(self._signed_term(names, first=False))
        acc = LinTerm()
        for t in terms:
            acc = acc + t
        return acc

    def _signed_term(self, names: Dict[str, str], first: bool) -> LinTerm:
        sign = 1
        if self.at("+") or self.at("-"):
            if self.take(self.peek().text).text == "-":
                sign = -1
        elif not first:
            raise _Syntax(self.col(), "expected '+' or '-'")
        while self.at("-"):
            self.i += 1
            sign = -sign
        t = self.peek()
        if t is None:
            raise _Syntax(self.col(), "expected a term, found end of line")
        if t.kind == "num":
            q = self.number()
            if self.at("*"):
                self.i += 1
                v = self._var(names)
                return LinTerm.var(v, sign * q)
            if self.peek() is not None and self.peek().kind == "ident" \
                    and self.peek().text not in _RESERVED:
                v = self._var(names)
                return LinTerm.var(v, sign * q)
            return LinTerm.constant(sign * q)
        if t.kind == "ident" and t.text not in _RESERVED:
            v = self._var(names)
            if self.at("*"):
                self.i += 1
                q = self.number()
                return LinTerm.var(v, sign * q)
            return LinTerm.var(v, sign)
        raise _Syntax(t.col, f"expected a term, found {t.text!r}")

    def _var(self, names: Dict[str, str]) -> str:
        t = self.peek()
        v = self.ident("variable")
        if v not in names:
            raise _Syntax(t.col, f"undeclared variable {v!r}")
        return v

    # guards -------------------------------------------------------------

    def guard(self, names: Dict[str, str]) -> List[List]:
        """Parse a boolean guard into CNF (list of clauses of atoms/bools)."""
        cnf = self._and(names)
        while self.at("or"):
            self.i += 1
            rhs = self._and(names)
            cnf = _cnf_or(cnf, rhs)
        return cnf

    def _and(self, names):
        cnf = self._prim(names)
        while self.at("and"):
            self.i += 1
            cnf = cnf + self._prim(names)
        return cnf

    def _prim(self, names):
        if self.at("true"):
            self.i += 1
            return []
        if self.at("false"):
            self.i += 1
            return [[]]
        if self.at("("):
            self.i += 1
            inner = self.guard(names)
            self.take(")")
            return inner
        lhs = self.affine(names)
        t = self.peek()
        ops = ("<", "<=", "==", ">=", ">")
        if t is None or t.text not in ops:
            if t is not None and t.text == "=":
                raise _Syntax(t.col, "use '==' for equality in guards")
            found = repr(t.text) if t else "end of line"
            raise _Syntax(self.col(), f"expected a comparison operator, found {found}")
        self.i += 1
        nxt = self.peek()
        if nxt is not None and nxt.kind == "op" and nxt.text in ("=", "==", "<", ">", "<=", ">="):
            raise _Syntax(nxt.col, f"unexpected {nxt.text!r} after {t.text!r}")
        rhs = self.affine(names)
        return [[a] for a in compare(lhs, t.text, rhs)]


def _cnf_or(a: List[List], b: List[List]) -> List[List]:
    if not a or not b:  # one side is true
        return []
    return [ca + cb for ca in a for cb in b]


def _split_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def parse_model(text: str) -> RealTimeProgram:
    """Parse a model document; raise :class:`ModelError` with all diagnostics."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelError([ParseDiagnostic(1, 1, f"input is not UTF-8: {exc.reason}")]) from None
    diags: List[ParseDiagnostic] = []
    kinds: Dict[str, str] = {}
    var_order: List[VarDecl] = []
    locations: List[str] = []
    loc_rates: Dict[str, Dict[str, RateSpec]] = {}
    initial: Optional[str] = None
    accepting: List[str] = []
    edges: List[Edge] = []
    edge_lines: Dict[str, int] = {}
    header_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _split_comment(raw)
        if not body.strip():
            continue
        try:
            toks = _tokenize(body, 1)
            p = _Parser(toks, len(body) + 1)
            head = p.peek()
            if head is None:
                continue
            key = head.text
            if not header_seen:
                if key != "rtp":
                    raise _Syntax(head.col, "document must start with 'rtp 1'")
                p.i += 1
                ver = p.peek()
                if ver is None or ver.text != FORMAT_VERSION:
                    raise _Syntax(p.col(), f"unsupported format version (expected {FORMAT_VERSION})")
                p.i += 1
                p.expect_end()
                header_seen = True
                continue
            p.i += 1
            if key in _KIND_WORDS:
                while True:
                    t = p.peek()
                    name = p.ident("variable name")
                    if name in kinds:
                        raise _Syntax(t.col, f"variable {name!r} declared twice")
                    kinds[name] = _KIND_WORDS[key]
                    var_order.append(VarDecl(name, _KIND_WORDS[key]))
                    if p.at(","):
                        p.i += 1
                        continue
                    break
                p.expect_end()
            elif key == "location":
                t = p.peek()
                name = p.ident("location name")
                if name in locations:
                    raise _Syntax(t.col, f"location {name!r} declared twice")
                locations.append(name)
                rates: Dict[str, RateSpec] = {}
                while p.at("rate"):
                    p.i += 1
                    vt = p.peek()
                    v = p._var(kinds)
                    if p.at("="):
                        p.i += 1
                        q = p.number()
                        rates[v] = RateSpec.exact(q)
                    elif p.at("in"):
                        p.i += 1
                        p.take("[")
                        lo = p.number()
                        p.take(",")
                        hi = p.number()
                        p.take("]")
                        if lo > hi:
                            raise _Syntax(vt.col, "empty rate interval")
                        rates[v] = RateSpec(lo, hi)
                    else:
                        raise _Syntax(p.col(), "expected '=' or 'in' after rate variable")
                    if p.at(","):
                        p.i += 1
                        if not p.at("rate"):
                            raise _Syntax(p.col(), "expected 'rate'")
                p.expect_end()
                if rates:
                    loc_rates[name] = rates
            elif key == "initial":
                name = p.ident("location name")
                p.expect_end()
                if initial is not None:
                    raise _Syntax(head.col, "initial location given twice")
                initial = name
            elif key == "accepting":
                while True:
                    accepting.append(p.ident("location name"))
                    if p.at(","):
                        p.i += 1
                        continue
                    break
                p.expect_end()
            elif key == "edge":
                nt = p.peek()
                name = p.ident("edge name")
                if name in edge_lines:
                    raise _Syntax(nt.col, f"edge {name!r} declared twice")
                p.take(":")
                src = p.ident("source location")
                p.take("->")
                dst = p.ident("target location")
                guard = ClausalSet()
                update: Dict[str, LinTerm] = {}
                if p.at("when"):
                    p.i += 1
                    guard = ClausalSet(p.guard(kinds))
                if p.at("do"):
                    p.i += 1
                    while True:
                        vt = p.peek()
                        v = p._var(kinds)
                        if v in update:
                            raise _Syntax(vt.col, f"{v!r} assigned twice")
                        p.take(":=")
                        update[v] = p.affine(kinds)
                        if p.at(";"):
                            p.i += 1
                            if p.done():
                                break
                            continue
                        break
                p.expect_end()
                edges.append(Edge(name, src, dst, Instruction.make(guard=guard, update=update)))
                edge_lines[name] = lineno
            else:
                raise _Syntax(head.col, f"unknown declaration {key!r}")
        except _Syntax as exc:
            diags.append(ParseDiagnostic(lineno, exc.col, exc.msg))

    if not header_seen and not diags:
        diags.append(ParseDiagnostic(1, 1, "empty document; expected 'rtp 1'"))
    if initial is None and header_seen:
        diags.append(ParseDiagnostic(len(text.splitlines()) or 1, 1, "missing 'initial' declaration"))
    if diags:
        raise ModelError(diags)
    prog = RealTimeProgram.make(var_order, locations, initial, edges, accepting, loc_rates)
    sem = validate(prog)
    if sem:
        out = []
        for d in sem:
            line = 1
            if d.where.startswith("edge "):
                line = edge_lines.get(d.where[5:], 1)
            out.append(ParseDiagnostic(line, 1, str(d)))
        raise ModelError(out)
    return prog


def format_atom(a: LinConstraint) -> str:
    s = str(a)
    return s.replace(" = ", " == ") if a.rel == EQ else s


def format_guard(g: ClausalSet) -> str:
    if g.is_bot:
        return "false"
    if g.is_top:
        return "true"
    parts = []
    for cl in g.sorted_clauses():
        if len(cl) == 1:
            parts.append(format_atom(cl[0]))
        else:
            parts.append("(" + " or ".join(format_atom(a) for a in cl) + ")")
    return " and ".join(parts)


def print_model(p: RealTimeProgram) -> str:
    """Canonical text of ``p``; :func:`parse_model` reads it back unchanged."""
    lines = [f"rtp {FORMAT_VERSION}"]
    for v in p.vars:
        lines.append(f"{_KIND_KEYWORD[v.kind]} {v.name}")
    for loc in p.cfa.locations:
        rates = p.location_rate_map(loc)
        parts = [f"location {loc}"]
        rate_txt = []
        for v, r in sorted(rates.items()):
            if r.deterministic:
                rate_txt.append(f"rate {v} = {format_rational(r.lower)}")
            else:
                rate_txt.append(f"rate {v} in [{format_rational(r.lower)}, {format_rational(r.upper)}]")
        if rate_txt:
            parts.append(", ".join(rate_txt))
        lines.append(" ".join(parts))
    lines.append(f"initial {p.cfa.initial}")
    if p.cfa.accepting:
        lines.append("accepting " + ", ".join(sorted(p.cfa.accepting)))
    for e in p.cfa.edges:
        if e.instruction.rates or e.instruction.frozen:
            raise ValueError(f"edge {e.id!r} has per-edge rates, which the text format cannot express")
        s = f"edge {e.id} : {e.source} -> {e.target}"
        if not e.instruction.guard.is_top:
            s += f" when {format_guard(e.instruction.guard)}"
        if e.instruction.update:
            s += " do " + "; ".join(f"{v} := {format_term(t)}" for v, t in e.instruction.update)
        lines.append(s)
    return "\n".join(lines) + "\n"


def load_model(path: str) -> RealTimeProgram:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_model(data)


def cfa_to_dot(p: RealTimeProgram, name: str = "model") -> str:
    """Graphviz text of the control-flow automaton, edges labelled with guards."""
    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = [f'digraph "{esc(name)}" {{', "  rankdir=LR;", '  __init [shape=point, label=""];']
    for i, loc in enumerate(p.cfa.locations):
        shape = "doublecircle" if loc in p.cfa.accepting else "circle"
        lines.append(f'  n{i} [shape={shape}, label="{esc(loc)}"];')
    index = {loc: i for i, loc in enumerate(p.cfa.locations)}
    lines.append(f"  __init -> n{index[p.cfa.initial]};")
    for e in p.cfa.edges:
        label = esc(e.id)
        if not e.instruction.guard.is_top:
            label += "\\n" + esc(format_guard(e.instruction.guard))
        lines.append(f'  n{index[e.source]} -> n{index[e.target]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# machine-readable witnesses
#
#   @x 0            initial value of a variable (one line each)
#   go 3/2          edge id and exact delay
#   go 1/1 v=1/2    ... plus elapsed amounts for interval-rate variables


def format_witness(tw: TimedWord) -> str:
    def q(v: Fraction) -> str:
        return f"{v.numerator}/{v.denominator}"

    lines = [f"@{n} {q(v)}" for n, v in tw.initial]
    for k, (e, d) in enumerate(tw.steps):
        extra = tw.elapsed[k] if k < len(tw.elapsed) else ()
        lines.append(" ".join([e, q(d)] + [f"{n}={q(v)}" for n, v in extra]))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> TimedWord:
    initial, steps, elapsed = [], [], []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0].startswith("@"):
                if len(parts) != 2 or steps:
                    raise ValueError("expected '@var value' before the first step")
                initial.append((parts[0][1:], _exact(parts[1])))
                continue
            if len(parts) < 2:
                raise ValueError("expected 'edge delay'")
            extra = []
            for tok in parts[2:]:
                n, _, v = tok.partition("=")
                if not n or not v:
                    raise ValueError(f"bad elapsed entry {tok!r}")
                extra.append((n, _exact(v)))
            steps.append((parts[0], _exact(parts[1])))
            elapsed.append(tuple(extra))
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError([ParseDiagnostic(no, 1, str(exc))]) from None
    if not any(elapsed):
        elapsed = []
    return TimedWord(tuple(steps), tuple(initial), tuple(elapsed))


def _exact(tok: str) -> Fraction:
    if not all(ch.isdigit() or ch in "-/" for ch in tok):
        raise ValueError(f"{tok!r} is not an exact rational")
    return Fraction(tok)


def parse_guard(text: str, variables=None) -> ClausalSet:
    """Read one guard expression such as ``x - y >= 1 and (z < 1 or z > 2)``.

    ``variables`` restricts the names that may appear; by default any
    identifier is accepted.
    """
    try:
        toks = _tokenize(text, 1)
        if variables is None:
            variables = [t.text for t in toks if t.kind == "ident" and t.text not in _RESERVED]
        p = _Parser(toks, len(text) + 1)
        cnf = p.guard({v: "" for v in variables})
        p.expect_end()
    except _Syntax as exc:
        raise ModelError([ParseDiagnostic(1, exc.col, exc.msg)]) from None
    return ClausalSet(cnf)
