"""Real-time programs: variables, instructions and control-flow automata.

A program is a finite automaton whose letters are edge identifiers.  Each
edge carries an :class:`Instruction` made of a guard (CNF over the program
variables), a deterministic affine update, and rates.  Rates not given on the
instruction come from the target location and then from the variable kind.

Everything here is immutable; the transformers return new programs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .lra import (CTOP, EQ, LE, LT, ClausalSet, ConjunctiveSet, LinConstraint, LinTerm,
                  atom, dnf_split)

CLOCK = "clock"
STOPWATCH = "stopwatch"
DISCRETE = "discrete"
PARAMETER = "parameter"
CONTINUOUS = "continuous"
KINDS = (CLOCK, STOPWATCH, DISCRETE, PARAMETER, CONTINUOUS)

# kinds whose guard atoms are widened by robustness enlargement
TIMED_KINDS = (CLOCK, STOPWATCH, CONTINUOUS)


@dataclass(frozen=True)
class RateSpec:
    lower: Fraction
    upper: Fraction

    @classmethod
    def exact(cls, q) -> "RateSpec":
        q = Fraction(q)
        return cls(q, q)

    @property
    def deterministic(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        from .lra import format_rational as fr
        if self.deterministic:
            return fr(self.lower)
        return f"[{fr(self.lower)}, {fr(self.upper)}]"


_DEFAULT_RATE = {
    CLOCK: RateSpec.exact(1),
    STOPWATCH: RateSpec.exact(1),
    DISCRETE: RateSpec.exact(0),
    PARAMETER: RateSpec.exact(0),
    CONTINUOUS: RateSpec.exact(0),
}


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str

    @property
    def default_rate(self) -> RateSpec:
        return _DEFAULT_RATE[self.kind]


@dataclass(frozen=True)
class Instruction:
    """Guard, affine update and explicit rate overrides.

    ``frozen`` marks a pure-guard instruction: every rate is zero whatever
    the target location says.  Assume instructions are frozen.
    """

    guard: ClausalSet = CTOP
    update: Tuple[Tuple[str, LinTerm], ...] = ()
    rates: Tuple[Tuple[str, RateSpec], ...] = ()
    frozen: bool = False

    @classmethod
    def make(cls, guard: Optional[ClausalSet] = None, update: Optional[Mapping[str, LinTerm]] = None,
             rates: Optional[Mapping[str, RateSpec]] = None, frozen: bool = False) -> "Instruction":
        return cls(guard if guard is not None else CTOP,
                   tuple(sorted((update or {}).items())),
                   tuple(sorted((rates or {}).items())),
                   frozen)

    @property
    def update_map(self) -> Dict[str, LinTerm]:
        return dict(self.update)

    @property
    def rate_map(self) -> Dict[str, RateSpec]:
        return dict(self.rates)


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    instruction: Instruction


@dataclass(frozen=True)
class ControlFlowAutomaton:
    locations: Tuple[str, ...]
    initial: str
    edges: Tuple[Edge, ...]
    accepting: FrozenSet[str]

    def edge(self, eid: str) -> Edge:
        try:
            return self._index()[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def _index(self) -> Dict[str, Edge]:
        idx = self.__dict__.get("_edge_index")
        if idx is None:
            idx = {e.id: e for e in self.edges}
            object.__setattr__(self, "_edge_index", idx)
        return idx

    def has_edge(self, eid: str) -> bool:
        return eid in self._index()

    def outgoing(self, loc: str) -> List[Edge]:
        out = self.__dict__.get("_out")
        if out is None:
            out = {}
            for e in sorted(self.edges, key=lambda e: e.id):
                out.setdefault(e.source, []).append(e)
            object.__setattr__(self, "_out", out)
        return out.get(loc, [])

    @property
    def alphabet(self) -> List[str]:
        return sorted(e.id for e in self.edges)

    def path_error(self, word: Sequence[str]) -> Optional[str]:
        """None when ``word`` is a path from the initial location, else a message."""
        loc = self.initial
        for k, eid in enumerate(word):
            if not self.has_edge(eid):
                return f"letter {k} ({eid!r}) is not an edge"
            e = self.edge(eid)
            if e.source != loc:
                prev = word[k - 1] if k else "<initial>"
                return f"{prev!r} ends in {loc!r} but {eid!r} starts in {e.source!r}"
            loc = e.target
        return None

    def accepts(self, word: Sequence[str]) -> bool:
        if self.path_error(word) is not None:
            return False
        loc = self.initial if not word else self.edge(word[-1]).target
        return loc in self.accepting


@dataclass(frozen=True)
class RealTimeProgram:
    vars: Tuple[VarDecl, ...]
    cfa: ControlFlowAutomaton
    location_rates: Tuple[Tuple[str, Tuple[Tuple[str, RateSpec], ...]], ...] = ()

    @classmethod
    def make(cls, vars: Iterable[VarDecl], locations: Iterable[str], initial: str,
             edges: Iterable[Edge], accepting: Iterable[str],
             location_rates: Optional[Mapping[str, Mapping[str, RateSpec]]] = None) -> "RealTimeProgram":
        cfa = ControlFlowAutomaton(tuple(locations), initial, tuple(edges), frozenset(accepting))
        lr = tuple(sorted((loc, tuple(sorted(r.items())))
                          for loc, r in (location_rates or {}).items() if r))
        return cls(tuple(vars), cfa, lr)

    @property
    def var_map(self) -> Dict[str, VarDecl]:
        return {v.name: v for v in self.vars}

    def kind(self, name: str) -> str:
        return self.var_map[name].kind

    @property
    def params(self) -> List[str]:
        return [v.name for v in self.vars if v.kind == PARAMETER]

    @property
    def state_vars(self) -> List[str]:
        """Variables that are indexed per step (everything except parameters)."""
        return [v.name for v in self.vars if v.kind != PARAMETER]

    def location_rate_map(self, loc: str) -> Dict[str, RateSpec]:
        for l, r in self.location_rates:
            if l == loc:
                return dict(r)
        return {}

    def rates_of(self, edge: Edge) -> Dict[str, RateSpec]:
        """Effective rate of every state variable while waiting after ``edge``."""
        instr = edge.instruction
        if instr.frozen:
            return {v: RateSpec.exact(0) for v in self.state_vars}
        loc_rates = self.location_rate_map(edge.target)
        own = instr.rate_map
        out = {}
        for v in self.vars:
            if v.kind == PARAMETER:
                continue
            out[v.name] = own.get(v.name) or loc_rates.get(v.name) or v.default_rate
        return out


@dataclass(frozen=True)
class Diagnostic:
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.where}: {self.message}"


def _rate_ok(kind: str, r: RateSpec) -> bool:
    if r.lower > r.upper:
        return False
    if kind == CLOCK:
        return r == RateSpec.exact(1)
    if kind == STOPWATCH:
        return r.deterministic and r.lower in (0, 1)
    if kind in (DISCRETE, PARAMETER):
        return r == RateSpec.exact(0)
    return True


def validate(p: RealTimeProgram) -> List[Diagnostic]:
    """Structural and typing checks; an empty list means the program is usable."""
    diags: List[Diagnostic] = []
    names = [v.name for v in p.vars]
    declared = set(names)
    for n in sorted({n for n in names if names.count(n) > 1}):
        diags.append(Diagnostic(f"variable {n}", "declared more than once"))
    for v in p.vars:
        if v.kind not in KINDS:
            diags.append(Diagnostic(f"variable {v.name}", f"unknown kind {v.kind!r}"))
        if not v.name or "@" in v.name or "#" in v.name or "'" in v.name:
            diags.append(Diagnostic(f"variable {v.name!r}", "invalid identifier"))
    kinds = {v.name: v.kind for v in p.vars}
    locs = set(p.cfa.locations)
    if len(locs) != len(p.cfa.locations):
        diags.append(Diagnostic("locations", "duplicate location names"))
    if p.cfa.initial not in locs:
        diags.append(Diagnostic("initial", f"unknown location {p.cfa.initial!r}"))
    for a in sorted(p.cfa.accepting - locs):
        diags.append(Diagnostic("accepting", f"unknown location {a!r}"))
    for loc, rates in p.location_rates:
        if loc not in locs:
            diags.append(Diagnostic(f"location {loc}", "rates given for an unknown location"))
        for v, r in rates:
            if v not in declared:
                diags.append(Diagnostic(f"location {loc}", f"rate for undeclared variable {v!r}"))
            elif not _rate_ok(kinds[v], r):
                diags.append(Diagnostic(f"location {loc}", f"rate {r} not allowed for {kinds[v]} {v}"))
    seen = set()
    for e in p.cfa.edges:
        where = f"edge {e.id}"
        if e.id in seen:
            diags.append(Diagnostic(where, "duplicate edge id"))
        seen.add(e.id)
        if "@" in e.id or "#" in e.id:
            diags.append(Diagnostic(where, "invalid edge identifier"))
        if e.source not in locs:
            diags.append(Diagnostic(where, f"unknown source location {e.source!r}"))
        if e.target not in locs:
            diags.append(Diagnostic(where, f"unknown target location {e.target!r}"))
        instr = e.instruction
        for v in sorted(instr.guard.vars - declared):
            diags.append(Diagnostic(where, f"guard uses undeclared variable {v!r}"))
        for v, t in instr.update:
            if v not in declared:
                diags.append(Diagnostic(where, f"update of undeclared variable {v!r}"))
            elif kinds[v] == PARAMETER:
                diags.append(Diagnostic(where, f"update writes parameter {v!r}"))
            for w in sorted(t.vars - declared):
                diags.append(Diagnostic(where, f"update uses undeclared variable {w!r}"))
        for v, r in instr.rates:
            if v not in declared:
                diags.append(Diagnostic(where, f"rate for undeclared variable {v!r}"))
            elif not instr.frozen and not _rate_ok(kinds[v], r):
                diags.append(Diagnostic(where, f"rate {r} not allowed for {kinds[v]} {v}"))
    return diags


class InvalidProgram(ValueError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


def ensure_valid(p: RealTimeProgram) -> None:
    diags = validate(p)
    if diags:
        raise InvalidProgram(diags)


# --------------------------------------------------------------------------
# transformers


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    for k in itertools.count(1):
        cand = f"{base}{k}"
        if cand not in taken:
            return cand
    raise AssertionError("unreachable")


ASSUME_PREFIX = "__assume"
START_PREFIX = "__start"


def assume_prefix(p: RealTimeProgram, i: ClausalSet, edge_id: Optional[str] = None,
                  location: Optional[str] = None) -> RealTimeProgram:
    """Prefix ``p`` with a fresh initial location and a frozen guard-only edge."""
    loc = location or fresh_name(START_PREFIX, p.cfa.locations)
    if loc in p.cfa.locations:
        raise ValueError(f"location {loc!r} already exists")
    eid = edge_id or fresh_name(ASSUME_PREFIX, (e.id for e in p.cfa.edges))
    if p.cfa.has_edge(eid):
        raise ValueError(f"edge {eid!r} already exists")
    edge = Edge(eid, loc, p.cfa.initial, Instruction.make(guard=i, frozen=True))
    cfa = ControlFlowAutomaton((loc,) + p.cfa.locations, loc, (edge,) + p.cfa.edges,
                               p.cfa.accepting)
    return replace(p, cfa=cfa)


def _scale_to_clocks(a: LinConstraint, timed: Iterable[str]) -> Optional[LinTerm]:
    timed = set(timed)
    m = max((abs(c) for v, c in a.term.coeffs if v in timed), default=None)
    if m is None:
        return None
    return a.term.scale(1 / m)


def enlarge_atom(a: LinConstraint, eps: str, timed: Iterable[str]) -> List[LinConstraint]:
    """The enlarged version of one atom as a conjunction (list of atoms).

    Only atoms over at least one timed variable are widened.  The atom is
    first scaled so its largest timed coefficient has magnitude one.
    """
    if eps in a.vars:
        raise ValueError(f"guard atom {a} already mentions {eps!r}")
    t = _scale_to_clocks(a, timed)
    if t is None:
        return [a]
    e = LinTerm.var(eps)
    if a.rel == EQ:
        return [atom(t - e, LE), atom(-t - e, LE)]
    return [atom(t - e, a.rel)]


def enlarge_guards(p: RealTimeProgram, eps: str) -> RealTimeProgram:
    """Widen every timed guard atom by the new parameter ``eps``."""
    if eps in p.var_map:
        raise ValueError(f"variable {eps!r} already declared")
    timed = [v.name for v in p.vars if v.kind in TIMED_KINDS]
    edges = []
    for e in p.cfa.edges:
        g = e.instruction.guard
        clauses = []
        for clause in g.clauses:
            options = [enlarge_atom(a, eps, timed) for a in sorted(clause)]
            # (A1 and A2) or B  ==  (A1 or B) and (A2 or B)
            for pick in itertools.product(*options):
                clauses.append(list(pick))
        instr = replace(e.instruction, guard=ClausalSet(clauses))
        edges.append(replace(e, instruction=instr))
    cfa = replace(p.cfa, edges=tuple(edges))
    return replace(p, vars=p.vars + (VarDecl(eps, PARAMETER),), cfa=cfa)


BRANCH_SEP = "#"


@dataclass(frozen=True)
class SplitProgram:
    """A program whose guards are all conjunctive, plus the letter origin map."""

    program: RealTimeProgram
    origin: Tuple[Tuple[str, str], ...]
    branch_guard: Tuple[Tuple[str, ConjunctiveSet], ...]

    def original(self, letter: str) -> str:
        return dict(self.origin)[letter]

    def guard(self, letter: str) -> ConjunctiveSet:
        return self._guards()[letter]

    def _guards(self) -> Dict[str, ConjunctiveSet]:
        g = self.__dict__.get("_g")
        if g is None:
            g = dict(self.branch_guard)
            object.__setattr__(self, "_g", g)
        return g


def split_clausal(p: RealTimeProgram) -> SplitProgram:
    """Replace every edge by one edge per satisfiable DNF branch of its guard.

    Conjunctive guards keep their edge id; a clausal guard with branches
    ``g0, g1, ...`` yields edges ``e#0, e#1, ...``.  Edges whose guard has no
    satisfiable branch disappear.
    """
    edges, origin, guards = [], [], []
    for e in p.cfa.edges:
        g = e.instruction.guard
        if g.is_bot:
            continue
        if g.is_conjunctive():
            conj = ConjunctiveSet(a for cl in g.clauses for a in cl)
            branches = [conj] if not conj.is_bot else []
            names = [e.id]
        else:
            branches = dnf_split(g)
            names = [f"{e.id}{BRANCH_SEP}{k}" for k in range(len(branches))]
        for name, br in zip(names, branches):
            instr = replace(e.instruction, guard=ClausalSet.from_conjunction(br))
            edges.append(replace(e, id=name, instruction=instr))
            origin.append((name, e.id))
            guards.append((name, br))
    cfa = replace(p.cfa, edges=tuple(edges))
    return SplitProgram(replace(p, cfa=cfa), tuple(origin), tuple(guards))


def conjunctive_guard(instr: Instruction) -> ConjunctiveSet:
    g = instr.guard
    if g.is_bot:
        return ConjunctiveSet(bottom=True)
    if not g.is_conjunctive():
        raise ValueError("instruction guard is not conjunctive")
    return ConjunctiveSet(a for cl in g.clauses for a in cl)
