"""Optional cross-check against an external SMT-LIB2 solver (QF_LRA).

The solver runs as a subprocess reading the query on stdin, for example
``z3 -in -smt2``.  Only satisfiability answers (and models, when offered) are
used; interpolation always stays internal.
"""
from __future__ import annotations

import shlex
import subprocess
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .lra import ConjunctiveSet, LinConstraint

SExpr = Union[str, List["SExpr"]]


class SolverError(RuntimeError):
    pass


def _num(q: Fraction) -> str:
    def nat(n: int) -> str:
        return f"{n}.0"

    mag = abs(q)
    s = nat(mag.numerator) if mag.denominator == 1 else f"(/ {nat(mag.numerator)} {nat(mag.denominator)})"
    return f"(- {s})" if q < 0 else s


def _sym(v: str) -> str:
    return f"|{v}|"


def _term(a: LinConstraint) -> str:
    parts = [f"(* {_num(c)} {_sym(v)})" for v, c in a.term.coeffs]
    if a.term.const:
        parts.append(_num(a.term.const))
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def to_smtlib(c: ConjunctiveSet, get_model: bool = True) -> str:
    """Query text asserting every atom of ``c``."""
    lines = ["(set-logic QF_LRA)"]
    if get_model:
        lines.append("(set-option :produce-models true)")
    for v in sorted(c.vars):
        lines.append(f"(declare-fun {_sym(v)} () Real)")
    if c.is_bot:
        lines.append("(assert false)")
    for a in c.atoms:
        rel = {"<": "<", "<=": "<=", "=": "="}[a.rel]
        lines.append(f"(assert ({rel} {_term(a)} 0.0))")
    lines.append("(check-sat)")
    if get_model and c.vars:
        lines.append("(get-model)")
    lines.append("(exit)")
    return "\n".join(lines) + "\n"


def parse_sexprs(text: str) -> List[SExpr]:
    """Parse a sequence of s-expressions (``|quoted|`` symbols supported)."""
    out: List[SExpr] = []
    stack: List[List[SExpr]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "(":
            stack.append([])
            i += 1
        elif ch == ")":
            if not stack:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
            i += 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SolverError("unterminated |symbol| in solver output")
            tok = text[i + 1:j]
            (stack[-1] if stack else out).append(tok)
            i = j + 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            (stack[-1] if stack else out).append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            (stack[-1] if stack else out).append(text[i:j])
            i = j
    if stack:
        raise SolverError("unbalanced '(' in solver output")
    return out


def _value(e: SExpr) -> Fraction:
    if isinstance(e, str):
        return Fraction(e)
    if len(e) == 2 and e[0] == "-":
        return -_value(e[1])
    if len(e) == 3 and e[0] == "/":
        return _value(e[1]) / _value(e[2])
    raise SolverError(f"cannot read value {e!r}")


def _model(exprs: List[SExpr]) -> Dict[str, Fraction]:
    defs: List[SExpr] = []
    for e in exprs:
        if isinstance(e, list):
            body = e[1:] if e and e[0] == "model" else e
            for d in body:
                if isinstance(d, list) and d and d[0] == "define-fun":
                    defs.append(d)
    out = {}
    for d in defs:
        if len(d) == 5 and d[2] == []:
            out[d[1]] = _value(d[4])
    return out


class SmtLibSolver:
    def __init__(self, command: str, timeout: float = 60.0):
        self.argv = shlex.split(command)
        if not self.argv:
            raise ValueError("empty solver command")
        self.timeout = timeout

    def check(self, c: ConjunctiveSet) -> Tuple[bool, Optional[Dict[str, Fraction]]]:
        query = to_smtlib(c)
        try:
            proc = subprocess.run(self.argv, input=query, capture_output=True, text=True,
                                  timeout=self.timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise SolverError(f"could not run solver: {exc}") from None
        exprs = parse_sexprs(proc.stdout)
        if not exprs:
            raise SolverError(f"no answer from solver (stderr: {proc.stderr.strip()})")
        head = exprs[0]
        if head == "unsat":
            return False, None
        if head == "sat":
            try:
                model = _model(exprs[1:])
            except (SolverError, ValueError, ZeroDivisionError):
                model = None
            return True, model
        raise SolverError(f"unexpected solver answer {head!r}")


def cross_checker(solver: SmtLibSolver):
    """Callback for :func:`timedtar.tar.check_emptiness` that compares answers."""

    def check(c: ConjunctiveSet, internal_sat: bool) -> None:
        ext, model = solver.check(c)
        if ext != internal_sat:
            raise SolverError(f"external solver says {'sat' if ext else 'unsat'}, "
                              f"internal says {'sat' if internal_sat else 'unsat'}")
        if ext and model is not None:
            full = {v: model.get(v, Fraction(0)) for v in c.vars}
            if not c.holds(full):
                raise SolverError("external model does not satisfy the query")

    return check
