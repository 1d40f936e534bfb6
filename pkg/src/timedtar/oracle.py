"""Brute-force oracles used to test the verifier.

Nothing here shares code with the symbolic engine beyond the model types:
the reachability oracle runs integer delays on clamped clock vectors, and the
satisfiability oracle is a textbook Fourier-Motzkin down to constants.
"""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .lra import EQ, LE, LT, ClausalSet, LinConstraint, LinTerm, compare
from .model import (CLOCK, ControlFlowAutomaton, Edge, Instruction, RealTimeProgram, VarDecl)


class RestrictionError(ValueError):
    """The program is outside the closed timed-automaton class."""


def _check_closed_ta(p: RealTimeProgram) -> int:
    """Validate the restriction and return the largest constant."""
    clocks = set()
    for v in p.vars:
        if v.kind != CLOCK:
            raise RestrictionError(f"{v.name} is a {v.kind}; only clocks are supported")
        clocks.add(v.name)
    if p.location_rates:
        raise RestrictionError("location rates are not allowed")
    init = p.cfa.initial
    m = 0
    for e in p.cfa.edges:
        if e.target == init:
            raise RestrictionError("the initial location must have no incoming edges")
        instr = e.instruction
        if instr.rates or instr.frozen:
            raise RestrictionError(f"edge {e.id} overrides rates")
        if e.source == init:
            if not instr.guard.is_top or set(instr.update_map) != clocks:
                raise RestrictionError("edges leaving the initial location must reset every clock "
                                       "and have guard true")
        for cl in instr.guard.clauses:
            for a in cl:
                if a.rel == LT:
                    raise RestrictionError(f"edge {e.id}: strict guard {a}")
                if len(a.term.coeffs) != 1 or abs(a.term.coeffs[0][1]) != 1:
                    raise RestrictionError(f"edge {e.id}: guard {a} is not x ~ k")
                if a.term.const.denominator != 1:
                    raise RestrictionError(f"edge {e.id}: non-integer constant in {a}")
                m = max(m, abs(int(a.term.const)))
        for v, t in instr.update:
            if t.coeffs or t.const.denominator != 1 or t.const < 0:
                raise RestrictionError(f"edge {e.id}: update {v} := {t} is not a reset to a natural")
            m = max(m, int(t.const))
    return m


def brute_reachable(p: RealTimeProgram, depth: Optional[int] = None) -> bool:
    """Reachability of an accepting location with integer delays only.

    Clock values are clamped at ``M + 1`` where ``M`` is the largest constant,
    which keeps the state space finite.  ``depth`` bounds the number of
    edges; None explores everything.
    """
    m = _check_closed_ta(p)
    cap = m + 1
    clocks = [v.name for v in p.vars]
    cfa = p.cfa
    if cfa.initial in cfa.accepting:
        return True
    start = (cfa.initial, tuple(0 for _ in clocks))
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (loc, vec), d = queue.popleft()
        if depth is not None and d >= depth:
            continue
        val = dict(zip(clocks, (Fraction(x) for x in vec)))
        for e in cfa.outgoing(loc):
            if not e.instruction.guard.holds(val):
                continue
            upd = e.instruction.update_map
            base = [int(upd[c].const) if c in upd else vec[i] for i, c in enumerate(clocks)]
            for delay in range(cap + 1):
                nvec = tuple(min(x + delay, cap) for x in base)
                if e.target in cfa.accepting:
                    return True
                st = (e.target, nvec)
                if st not in seen:
                    seen.add(st)
                    queue.append((st, d + 1))
    return False


def enumerate_words(cfa: ControlFlowAutomaton, max_len: int) -> Iterator[List[str]]:
    """Accepted words of length at most ``max_len`` in shortlex order."""
    layer: List[Tuple[str, Tuple[str, ...]]] = [(cfa.initial, ())]
    if cfa.initial in cfa.accepting:
        yield []
    for _ in range(max_len):
        nxt = []
        for loc, word in layer:
            for e in cfa.outgoing(loc):
                w = word + (e.id,)
                if e.target in cfa.accepting:
                    yield list(w)
                nxt.append((e.target, w))
        layer = nxt
        if not layer:
            return


def random_closed_ta(rng: random.Random, max_clocks: int = 3, max_locations: int = 6,
                     max_const: int = 3) -> RealTimeProgram:
    """A random program in the oracle's class.

    The accepting location is always reachable in the control-flow graph, so
    the answer depends on the timing constraints.
    """
    nc = rng.randint(1, max_clocks)
    clocks = [f"x{i}" for i in range(nc)]
    nl = rng.randint(2, max_locations)
    locs = [f"l{i}" for i in range(nl)]
    edges = [Edge("e_init", "init", "l0",
                  Instruction.make(update={c: LinTerm.constant(0) for c in clocks}))]
    n_edges = rng.randint(nl, nl + 3)
    for k in range(n_edges):
        src = rng.choice(locs)
        dst = rng.choice(locs)
        clauses = []
        for c in rng.sample(clocks, rng.randint(1, nc)):
            x = LinTerm.var(c)
            lo = rng.randint(0, max_const)
            shape = rng.random()
            if shape < 0.35:
                clauses.extend([a] for a in compare(x, ">=", LinTerm.constant(lo)))
            elif shape < 0.7:
                clauses.extend([a] for a in compare(x, "<=", LinTerm.constant(lo)))
            elif shape < 0.85:
                clauses.extend([a] for a in compare(x, "==", LinTerm.constant(lo)))
            else:
                hi = rng.randint(lo, max_const)
                clauses.extend([a] for a in compare(x, ">=", LinTerm.constant(lo)))
                clauses.extend([a] for a in compare(x, "<=", LinTerm.constant(hi)))
        upd = {}
        for c in clocks:
            r = rng.random()
            if r < 0.3:
                upd[c] = LinTerm.constant(0)
            elif r < 0.35:
                upd[c] = LinTerm.constant(rng.randint(1, max_const))
        edges.append(Edge(f"e{k}", src, dst, Instruction.make(guard=ClausalSet(clauses), update=upd)))
    # accept in a location as far as possible from l0 in the graph
    dist = {"l0": 0}
    frontier = ["l0"]
    while frontier:
        nxt = []
        for e in edges:
            if e.source in frontier and e.target not in dist:
                dist[e.target] = dist[e.source] + 1
                nxt.append(e.target)
        frontier = nxt
    far = max(dist.values())
    accepting = [rng.choice(sorted(l for l, d in dist.items() if d == far))]
    return RealTimeProgram.make([VarDecl(c, CLOCK) for c in clocks], ["init"] + locs, "init",
                                edges, accepting)


# --------------------------------------------------------------------------
# independent satisfiability check


Row = Tuple[Dict[str, Fraction], Fraction, bool]   # sum(c*v) + k (< if strict else <=) 0


def fm_sat(atoms: Sequence[LinConstraint]) -> bool:
    """Plain Fourier-Motzkin to ground constraints; exponential, test-only."""
    rows: List[Row] = []
    for a in atoms:
        coeffs = dict(a.term.coeffs)
        if a.rel == EQ:
            rows.append((coeffs, a.term.const, False))
            rows.append(({v: -c for v, c in coeffs.items()}, -a.term.const, False))
        else:
            rows.append((coeffs, a.term.const, a.rel == LT))
    variables = sorted({v for r in rows for v in r[0]})
    for v in variables:
        pos, neg, rest = [], [], []
        for r in rows:
            c = r[0].get(v, 0)
            (pos if c > 0 else neg if c < 0 else rest).append(r)
        new = list(rest)
        for pc, pk, ps in pos:
            a = pc[v]
            for nc, nk, ns in neg:
                b = -nc[v]
                coeffs: Dict[str, Fraction] = {}
                for w, c in pc.items():
                    coeffs[w] = coeffs.get(w, 0) + b * c
                for w, c in nc.items():
                    coeffs[w] = coeffs.get(w, 0) + a * c
                coeffs = {w: c for w, c in coeffs.items() if c and w != v}
                new.append((coeffs, b * pk + a * nk, ps or ns))
        rows = new
    for coeffs, k, strict in rows:
        if strict and not k < 0:
            return False
        if not strict and not k <= 0:
            return False
    return True
