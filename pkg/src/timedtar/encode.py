"""Step-indexed encodings of instruction sequences.

Step ``k`` of a word reads the frame ``v@k`` of every state variable, checks
the guard there, applies the update and lets ``#d@k`` time units elapse at the
rates of the target location, which defines frame ``k+1``.  Parameters are
constants and keep their plain names in every frame.  Interval rates use an
extra elapsed variable ``#e.v@k`` bounded by ``lo*d <= e <= hi*d``.

The characters ``@`` and ``#`` never occur in user identifiers, so the
indexed names cannot collide with program variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .lra import (BOT, EQ, LE, TOP, ConjunctiveSet, LinTerm, atom, dnf_split, eliminate,
                  is_sat)
from .model import PARAMETER, Edge, RealTimeProgram


def indexed(v: str, k: int) -> str:
    return f"{v}@{k}"


def delay_var(k: int) -> str:
    return f"#d@{k}"


def elapsed_var(v: str, k: int) -> str:
    return f"#e.{v}@{k}"


def step_of(name: str) -> Optional[int]:
    if "@" not in name:
        return None
    return int(name.rsplit("@", 1)[1])


def frame(p: RealTimeProgram, k: int) -> List[str]:
    return [indexed(v, k) for v in p.state_vars]


def at_step(c: ConjunctiveSet, p: RealTimeProgram, k: int) -> ConjunctiveSet:
    """Index a plain predicate at frame ``k`` (parameters stay plain)."""
    return c.rename({v: indexed(v, k) for v in p.state_vars})


def deindex(c: ConjunctiveSet) -> ConjunctiveSet:
    """Strip the step index from every variable of ``c``."""
    mapping = {v: v.rsplit("@", 1)[0] for v in c.vars if "@" in v}
    return c.rename(mapping)


class PathError(ValueError):
    """The word does not follow the control-flow automaton."""


def _step_template(p: RealTimeProgram, e: Edge) -> List[ConjunctiveSet]:
    """Branches of the encoding of edge ``e`` between frames 0 and 1."""
    cache = p.__dict__.get("_enc_cache")
    if cache is None:
        cache = {}
        object.__setattr__(p, "_enc_cache", cache)
    hit = cache.get(e.id)
    if hit is not None and hit[0] is e:
        return hit[1]
    instr = e.instruction
    pre = {v: LinTerm.var(indexed(v, 0)) for v in p.state_vars}
    d = LinTerm.var(delay_var(0))
    body = [atom(-d, LE)]
    upd = instr.update_map
    for v, rate in p.rates_of(e).items():
        rhs = upd[v].substitute(pre) if v in upd else pre[v]
        nxt = LinTerm.var(indexed(v, 1))
        if rate.deterministic:
            body.append(atom(nxt - rhs - d.scale(rate.lower), EQ))
        else:
            ev = LinTerm.var(elapsed_var(v, 0))
            body.append(atom(nxt - rhs - ev, EQ))
            body.append(atom(d.scale(rate.lower) - ev, LE))
            body.append(atom(ev - d.scale(rate.upper), LE))
    base = ConjunctiveSet(body)
    out = []
    for g in dnf_split(instr.guard, prune_subsumed=False):
        c = base & g.rename({v: indexed(v, 0) for v in p.state_vars})
        if not c.is_bot:
            out.append(c)
    cache[e.id] = (e, out)
    return out


def _shift(c: ConjunctiveSet, k: int) -> ConjunctiveSet:
    if k == 0:
        return c
    mapping = {}
    for v in c.vars:
        if "@" in v:
            base, s = v.rsplit("@", 1)
            mapping[v] = f"{base}@{int(s) + k}"
    return c.rename(mapping)


def encode_step(p: RealTimeProgram, edge: Union[str, Edge], k: int) -> List[ConjunctiveSet]:
    """Encoding of one instruction at step ``k``, one conjunction per guard branch."""
    e = p.cfa.edge(edge) if isinstance(edge, str) else edge
    return [_shift(c, k) for c in _step_template(p, e)]


@dataclass(frozen=True)
class TraceEncoding:
    word: Tuple[str, ...]
    branches: Tuple[Tuple[ConjunctiveSet, ...], ...]
    state_vars: Tuple[str, ...]

    @property
    def single(self) -> bool:
        return all(len(b) == 1 for b in self.branches)

    @property
    def steps(self) -> List[ConjunctiveSet]:
        """Per-step conjunctions; only defined when every guard is conjunctive."""
        out = []
        for k, b in enumerate(self.branches):
            if len(b) == 1:
                out.append(b[0])
            elif not b:
                out.append(BOT)
            else:
                raise ValueError(f"step {k} has {len(b)} guard branches")
        return out

    def conjunction(self) -> ConjunctiveSet:
        c = TOP
        for s in self.steps:
            c = c & s
        return c

    def frame(self, k: int) -> List[str]:
        return [indexed(v, k) for v in self.state_vars]


def encode_word(w: Sequence[str], p: RealTimeProgram) -> TraceEncoding:
    err = p.cfa.path_error(w)
    if err is not None:
        raise PathError(err)
    branches = tuple(tuple(encode_step(p, eid, k)) for k, eid in enumerate(w))
    return TraceEncoding(tuple(w), branches, tuple(p.state_vars))


@dataclass(frozen=True)
class TimedWord:
    """Edges with exact delays, plus the initial valuation that realises them."""

    steps: Tuple[Tuple[str, Fraction], ...]
    initial: Tuple[Tuple[str, Fraction], ...] = ()
    elapsed: Tuple[Tuple[Tuple[str, Fraction], ...], ...] = ()

    def untimed(self) -> List[str]:
        return [e for e, _ in self.steps]

    @property
    def delays(self) -> List[Fraction]:
        return [d for _, d in self.steps]

    def __str__(self) -> str:
        from .lra import format_rational as fr
        return ".".join(f"({e}, {fr(d)})" for e, d in self.steps)


@dataclass(frozen=True)
class Feasible:
    witness: TimedWord
    model: Mapping[str, Fraction] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Infeasible:
    encoding: TraceEncoding


def _witness(w: Sequence[str], p: RealTimeProgram, model: Mapping[str, Fraction]) -> TimedWord:
    zero = Fraction(0)
    steps = tuple((eid, model.get(delay_var(k), zero)) for k, eid in enumerate(w))
    init = [(v, model.get(indexed(v, 0), zero)) for v in p.state_vars]
    init += [(v, model.get(v, zero)) for v in p.params]
    elapsed = []
    for k, eid in enumerate(w):
        e = p.cfa.edge(eid)
        extra = tuple((v, model.get(elapsed_var(v, k), zero))
                      for v, r in sorted(p.rates_of(e).items()) if not r.deterministic)
        elapsed.append(extra)
    if not any(elapsed):
        elapsed = []
    return TimedWord(steps, tuple(init), tuple(elapsed))


def feasible(w: Sequence[str], p: RealTimeProgram, prefix: ConjunctiveSet = TOP
             ) -> Union[Feasible, Infeasible]:
    """Decide whether some timed word realises ``w``.

    ``prefix`` is an optional constraint on indexed variables (for example a
    pinned initial valuation) that is conjoined to the encoding.
    """
    enc = encode_word(w, p)
    if enc.single:
        m = is_sat(prefix & enc.conjunction())
        if m is None:
            return Infeasible(enc)
        return Feasible(_witness(w, p, m), m)
    # clausal guards: depth-first over branch choices with early pruning
    stack: List[Tuple[int, ConjunctiveSet]] = [(0, prefix)]
    while stack:
        k, acc = stack.pop()
        if k == len(w):
            m = is_sat(acc)
            if m is not None:
                return Feasible(_witness(w, p, m), m)
            continue
        for br in reversed(enc.branches[k]):
            nxt = acc & br
            if not nxt.is_bot and is_sat(nxt) is not None:
                stack.append((k + 1, nxt))
    return Infeasible(enc)


def post_step(k: ConjunctiveSet, p: RealTimeProgram, edge: Union[str, Edge]) -> ConjunctiveSet:
    """Strongest postcondition of a plain predicate through one conjunctive edge."""
    if k.is_bot:
        return BOT
    branches = encode_step(p, edge, 0)
    if len(branches) > 1:
        raise ValueError("post() needs conjunctive guards; split the program first")
    if not branches:
        return BOT
    c = at_step(k, p, 0) & branches[0]
    if c.is_bot:
        return BOT
    keep = set(frame(p, 1)) | set(p.params)
    res = eliminate(c, [v for v in c.vars if v not in keep])
    return deindex(res)


def post(k: ConjunctiveSet, w: Sequence[str], p: RealTimeProgram) -> ConjunctiveSet:
    """Strongest postcondition of ``k`` along the word ``w``."""
    for a, b in zip(w, w[1:]):
        if p.cfa.edge(a).target != p.cfa.edge(b).source:
            raise PathError(f"{a!r} ends where {b!r} cannot start")
    cur = k
    for eid in w:
        cur = post_step(cur, p, eid)
        if cur.is_bot:
            return BOT
    return cur


class ReplayError(ValueError):
    pass


def replay(p: RealTimeProgram, tw: TimedWord, require_accepting: bool = True) -> Dict[str, Fraction]:
    """Execute a timed word with exact arithmetic; return the final valuation.

    Raises :class:`ReplayError` naming the first step that fails.
    """
    w = tw.untimed()
    err = p.cfa.path_error(w)
    if err is not None:
        raise ReplayError(err)
    val: Dict[str, Fraction] = {v: Fraction(0) for v in p.state_vars + p.params}
    val.update(dict(tw.initial))
    for k, (eid, d) in enumerate(tw.steps):
        if d < 0:
            raise ReplayError(f"step {k}: negative delay {d}")
        e = p.cfa.edge(eid)
        if not e.instruction.guard.holds(val):
            raise ReplayError(f"step {k}: guard of {eid!r} violated")
        upd = e.instruction.update_map
        nxt = dict(val)
        for v, t in upd.items():
            nxt[v] = t.evaluate(val)
        extra = dict(tw.elapsed[k]) if k < len(tw.elapsed) else {}
        for v, r in p.rates_of(e).items():
            if r.deterministic:
                nxt[v] += r.lower * d
            else:
                ev = extra.get(v)
                if ev is None:
                    raise ReplayError(f"step {k}: missing elapsed amount for {v!r}")
                if not (r.lower * d <= ev <= r.upper * d):
                    raise ReplayError(f"step {k}: elapsed amount for {v!r} outside its rate")
                nxt[v] += ev
        val = nxt
    if require_accepting and not p.cfa.accepts(w):
        raise ReplayError("word does not end in an accepting location")
    return val
