"""Built-in example programs.

``P1`` is a stopwatch program whose target location is unreachable for a
reason that no zone abstraction captures; ``P2`` mixes clocks with an
unbounded counter.  The Fischer family is a mutual exclusion protocol
composed by hand into one automaton (the original sources are not part of
this package, so these are reconstructions with the same published
behaviour).  ``m3_like`` is a small robustness example whose guards can be
widened by any amount.
"""
from __future__ import annotations

import itertools
from typing import List, Optional, Sequence

from .frontend import parse_model
from .model import RealTimeProgram

P1_TEXT = """\
rtp 1
# two clocks and one stopwatch; y stops in l1 and l2
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
"""

P2_TEXT = """\
rtp 1
# clocks x, y and an unbounded counter i; `init` pins all three to zero
clock x, y
discrete i
location start
location iota
location l0
location l1
initial start
accepting l1
edge init : start -> iota do x := 0; y := 0; i := 0
edge t0 : iota -> l0 when x >= 1
edge t1 : l0 -> iota do x := 0; i := i + 1
edge t2 : l0 -> l1 when y < i
"""

# variant of P1 whose last guard is tightened; robust for 0 < eps <= 1/2
P1_TIGHT_TEXT = P1_TEXT.replace("x - y >= 1 and z < 1", "x - y >= 2 and z < 1")


def p1() -> RealTimeProgram:
    return parse_model(P1_TEXT)


def p2() -> RealTimeProgram:
    return parse_model(P2_TEXT)


def p1_tight() -> RealTimeProgram:
    return parse_model(P1_TIGHT_TEXT)


_FISCHER_LOCS = ("A", "req", "wait", "cs")


def fischer_text(n: int, a: Optional[str] = None, b: Optional[str] = None) -> str:
    """Product automaton of ``n`` Fischer processes sharing ``id``.

    With ``a``/``b`` left as None they are parameters guarded to be
    non-negative on the initial edge; otherwise the given constants are
    substituted.  Accepting locations are all product locations with two
    processes in their critical section.
    """
    if n < 1:
        raise ValueError("need at least one process")
    clocks = [f"x{k}" for k in range(1, n + 1)]
    lines = ["rtp 1", f"# Fischer's protocol, {n} processes, composed by hand"]
    lines.append("clock " + ", ".join(clocks))
    lines.append("discrete id")
    parametric = a is None and b is None
    if parametric:
        lines.append("param a, b")
        A, B = "a", "b"
    else:
        A, B = a, b
    states = list(itertools.product(_FISCHER_LOCS, repeat=n))

    def name(s: Sequence[str]) -> str:
        return "_".join(s)

    lines.append("location start")
    for s in states:
        lines.append(f"location {name(s)}")
    lines.append("initial start")
    bad = [name(s) for s in states if sum(1 for x in s if x == "cs") >= 2]
    lines.append("accepting " + ", ".join(bad))
    resets = "; ".join(f"{c} := 0" for c in clocks) + "; id := 0"
    init_guard = " when a >= 0 and b >= 0" if parametric else ""
    lines.append(f"edge init : start -> {name(('A',) * n)}{init_guard} do {resets}")
    for s in states:
        if name(s) in bad:
            continue
        for k in range(n):
            pid = k + 1
            x = clocks[k]
            here = s[k]
            moves = []
            if here == "A":
                moves.append(("try", "req", "id == 0", f"{x} := 0"))
            elif here == "req":
                moves.append(("set", "wait", f"{x} <= {A}", f"{x} := 0; id := {pid}"))
            elif here == "wait":
                moves.append(("retry", "req", "id == 0", f"{x} := 0"))
                moves.append(("enter", "cs", f"id == {pid} and {x} >= {B}", None))
            else:
                moves.append(("exit", "A", None, "id := 0"))
            for label, dst, guard, upd in moves:
                t = list(s)
                t[k] = dst
                src_n, dst_n = name(s), name(t)
                line = f"edge {label}{pid}_{src_n} : {src_n} -> {dst_n}"
                if guard:
                    line += f" when {guard}"
                if upd:
                    line += f" do {upd}"
                lines.append(line)
    return "\n".join(lines) + "\n"


def fischer(n: int = 2) -> RealTimeProgram:
    return parse_model(fischer_text(n))


def fischer_fixed(n: int = 2, a: str = "1", b: str = "2") -> RealTimeProgram:
    """Fischer with constant bounds; robust exactly for eps < (b - a)/2."""
    return parse_model(fischer_text(n, a, b))


M3_TEXT = """\
rtp 1
# a sampler that never raises its alarm: the alarm edge needs mode == 2,
# which no edge ever writes.  Widening clock guards cannot change that, so
# every eps > 0 is safe.
clock x, y
discrete mode
location start
location idle
location busy
location alarm
initial start
accepting alarm
edge init : start -> idle do x := 0; y := 0; mode := 0
edge go : idle -> busy when x > 1 and x < 3 do x := 0; mode := 1
edge back : busy -> idle when x >= 2 and y - x < 5 do x := 0; mode := 0
edge raise : busy -> alarm when mode == 2 and x < 1
"""


def m3_like() -> RealTimeProgram:
    return parse_model(M3_TEXT)


def reachable_text() -> str:
    return """\
rtp 1
clock x
location l0
location l1
initial l0
accepting l1
edge go : l0 -> l1
"""


ALL = {
    "p1": P1_TEXT,
    "p2": P2_TEXT,
    "p1_tight": P1_TIGHT_TEXT,
    "fischer2": None,
    "fischer2_fixed": None,
    "m3_like": M3_TEXT,
}


def document(name: str) -> str:
    if name == "fischer2":
        return fischer_text(2)
    if name == "fischer2_fixed":
        return fischer_text(2, "1", "2")
    if name == "fischer4":
        return fischer_text(4)
    return ALL[name]
