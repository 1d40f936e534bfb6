"""Generators and property checks shared by the unit and acceptance suites.

Each ``suite_*`` function runs ``n`` seeded cases and returns the number of
cases it checked.  A failing case raises AssertionError with the seed, so a
failure can be reproduced on its own.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from timedtar.encode import Feasible, Infeasible, encode_word, feasible, indexed, replay
from timedtar.interp import check_inductive, hoare_chain, hoare_valid, interpolate
from timedtar.ita import HoareCache, PredicateAutomaton, build_ita, check_sound, extended_union
from timedtar.lra import (BOT, LE, LT, EQ, TOP, ClausalSet, ConjunctiveSet, LinTerm, atom,
                          eliminate, entails, is_sat)
from timedtar.model import (CLOCK, DISCRETE, PARAMETER, STOPWATCH, Edge, Instruction, RateSpec,
                            RealTimeProgram, VarDecl, split_clausal)
from timedtar.oracle import fm_sat
from timedtar.synth import exists_init
from timedtar.tar import Budget, Empty, NonEmpty, check_emptiness


# --------------------------------------------------------------------------
# constraint generators

def rand_term(rng: random.Random, names: Sequence[str], max_coef: int = 3,
              max_const: int = 4) -> LinTerm:
    t = LinTerm.constant(rng.randint(-max_const, max_const))
    for v in rng.sample(list(names), rng.randint(1, min(3, len(names)))):
        c = rng.randint(-max_coef, max_coef) or 1
        t = t + LinTerm.var(v).scale(Fraction(c))
    return t


def rand_atom(rng: random.Random, names: Sequence[str]):
    rel = rng.choice([LT, LE, LE, EQ])
    return atom(rand_term(rng, names), rel)


def rand_conj(rng: random.Random, names: Sequence[str], lo: int = 1, hi: int = 5) -> ConjunctiveSet:
    atoms = []
    for _ in range(rng.randint(lo, hi)):
        a = rand_atom(rng, names)
        if a is False:
            return BOT
        if a is not True:
            atoms.append(a)
    return ConjunctiveSet(atoms)


# --------------------------------------------------------------------------
# program generators

def random_program(rng: random.Random, free_init: bool = False) -> RealTimeProgram:
    """A small program mixing clocks, a stopwatch, a counter and a parameter.

    With ``free_init`` the initial location has no resetting edge, so the
    initial valuation is unconstrained.
    """
    decls = [VarDecl("x", CLOCK)]
    if rng.random() < 0.6:
        decls.append(VarDecl("y", CLOCK))
    if rng.random() < 0.3:
        decls.append(VarDecl("s", STOPWATCH))
    if rng.random() < 0.3:
        decls.append(VarDecl("n", DISCRETE))
    if rng.random() < 0.2:
        decls.append(VarDecl("a", PARAMETER))
    names = [d.name for d in decls]
    state = [d.name for d in decls if d.kind != PARAMETER]
    nl = rng.randint(2, 4)
    locs = [f"l{i}" for i in range(nl)]
    rates = {}
    if "s" in names:
        for loc in locs:
            if rng.random() < 0.5:
                rates[loc] = {"s": RateSpec(Fraction(0), Fraction(0))}
    edges = []
    if not free_init:
        edges.append(Edge("e_init", "init", "l0",
                          Instruction.make(update={v: LinTerm.constant(0) for v in state})))
    for k in range(rng.randint(nl, nl + 2)):
        src, dst = rng.choice(locs), rng.choice(locs)
        atoms = []
        for _ in range(rng.randint(0, 2)):
            a = atom(rand_term(rng, names, max_coef=1, max_const=3), rng.choice([LT, LE, LE, EQ]))
            if isinstance(a, bool):
                continue
            atoms.append([a])
        upd = {}
        for v in state:
            r = rng.random()
            if r < 0.3:
                upd[v] = LinTerm.constant(0)
            elif v == "n" and r < 0.5:
                upd[v] = LinTerm.var("n") + LinTerm.constant(1)
        edges.append(Edge(f"e{k}", src, dst, Instruction.make(guard=ClausalSet(atoms), update=upd)))
    init = "l0" if free_init else "init"
    all_locs = locs if free_init else ["init"] + locs
    accepting = [rng.choice(locs[1:])]
    return RealTimeProgram.make(decls, all_locs, init, edges, accepting, location_rates=rates)


def paths(p: RealTimeProgram, max_len: int) -> Iterator[List[str]]:
    """Every non-empty control-flow path from the initial location, shortlex."""
    layer = [(p.cfa.initial, ())]
    for _ in range(max_len):
        nxt = []
        for loc, word in layer:
            for e in p.cfa.outgoing(loc):
                w = word + (e.id,)
                yield list(w)
                nxt.append((e.target, w))
        layer = nxt


def _words(rng: random.Random, p: RealTimeProgram, max_len: int, k: int) -> List[List[str]]:
    ws = list(paths(p, max_len))
    rng.shuffle(ws)
    return ws[:k]


# --------------------------------------------------------------------------
# suites

def suite_fm(n: int, seed: int = 0) -> int:
    """Projection is sound and complete, and satisfiability agrees with plain FM."""
    rng = random.Random(seed)
    names = ["u", "v", "w", "z"]
    for case in range(n):
        c = rand_conj(rng, names, 1, 6)
        keep = rng.sample(names, rng.randint(0, 3))
        gone = [v for v in names if v not in keep]
        r = eliminate(c, gone)
        sat = is_sat(c) is not None
        if not c.is_bot:
            assert sat == fm_sat(list(c.atoms)), f"fm seed {seed} case {case}: {c}"
        assert sat == (is_sat(r) is not None), f"projection emptiness, case {case}: {c} -> {r}"
        assert set(r.vars) <= set(keep), f"case {case}: {r} mentions eliminated variables"
        # soundness: c implies its projection
        assert entails(c, r), f"case {case}: {c} does not imply {r}"
        # completeness: a point of the projection extends to a point of c
        m = is_sat(r)
        if m is not None:
            pinned = c.substitute({v: LinTerm.constant(m.get(v, Fraction(0))) for v in keep})
            assert is_sat(pinned) is not None, f"case {case}: {m} does not extend into {c}"
    return n


def _infeasible_cases(rng: random.Random):
    """Endless stream of (program, word, encoding) for infeasible paths."""
    while True:
        p = split_clausal(random_program(rng)).program
        for w in _words(rng, p, 5, 12):
            enc = encode_word(w, p)
            if is_sat(enc.conjunction()) is None:
                yield p, w, enc


def suite_interpolants(n: int, seed: int = 0, mode: str = "sp") -> int:
    rng = random.Random(seed)
    stream = _infeasible_cases(rng)
    for case in range(n):
        p, w, enc = next(stream)
        ii = interpolate(enc, p, mode)
        problems = check_inductive(enc, ii)
        assert not problems, f"case {case} word {w}: {problems}"
    return n


def suite_hoare_chain(n: int, seed: int = 0) -> int:
    rng = random.Random(seed)
    stream = _infeasible_cases(rng)
    for case in range(n):
        p, w, enc = next(stream)
        ii = interpolate(enc, p)
        for t in hoare_chain(w, ii):
            assert hoare_valid(t, p), f"case {case} word {w}: invalid triple {t}"
    return n


def suite_ita_soundness(n: int, seed: int = 0, max_len: int = 8) -> int:
    """Words accepted by refinements built from interpolant automata are infeasible.

    A case is one (refinement, control-flow path) pair with the refinement
    accepting the path.
    """
    rng = random.Random(seed)
    checked = 0
    while checked < n:
        p = split_clausal(random_program(rng)).program
        cache = HoareCache(p)
        r = PredicateAutomaton.empty()
        ws = _words(rng, p, 5, 40)
        for w in ws:
            if r.accepts(w) or isinstance(feasible(w, p), Feasible):
                continue
            ii = interpolate(encode_word(w, p), p)
            ita = build_ita(w, ii, cache)
            assert check_sound(ita, p), f"unsound automaton for {w}"
            assert ita.accepts(w)
            r = extended_union(r, ita, cache)
        if len(r.transitions) == 0:
            continue
        assert check_sound(r, p), "unsound union"
        for w in paths(p, max_len):
            if r.accepts(w):
                assert isinstance(feasible(w, p), Infeasible), f"refinement accepts feasible {w}"
                checked += 1
                if checked >= n:
                    break
    return checked


def suite_replay(n: int, seed: int = 0) -> int:
    """Every feasible path yields a witness that replays exactly."""
    rng = random.Random(seed)
    checked = 0
    while checked < n:
        p = split_clausal(random_program(rng)).program
        for w in _words(rng, p, 6, 15):
            res = feasible(w, p)
            if isinstance(res, Feasible):
                assert res.witness.untimed() == w
                replay(p, res.witness, require_accepting=False)
                checked += 1
    return checked


def suite_safeinit(n: int, seed: int = 0) -> int:
    """Valuations removed for a word really run the word.

    For every path the exact initial set is computed, a point of it is pinned
    at step 0, and the word must stay feasible from that point.  A point just
    outside (when there is one) must make the pinned word infeasible.
    """
    rng = random.Random(seed)
    checked = 0
    while checked < n:
        p = split_clausal(random_program(rng, free_init=True)).program
        for w in _words(rng, p, 4, 10):
            removed = exists_init(w, p)
            m = is_sat(removed)
            if m is None:
                assert isinstance(feasible(w, p), Infeasible)
                continue
            pin = ConjunctiveSet(
                a for v in p.state_vars + p.params
                for a in [atom(LinTerm.var(indexed(v, 0) if v in p.state_vars else v)
                               - LinTerm.constant(m.get(v, Fraction(0))), EQ)]
                if not isinstance(a, bool))
            assert isinstance(feasible(w, p, pin), Feasible), f"removed point {m} cannot run {w}"
            checked += 1
    return checked


def random_ta_stream(seed: int):
    """(seed, program) pairs of the oracle class, deterministic per seed."""
    from timedtar.oracle import random_closed_ta
    s = seed
    while True:
        yield s, random_closed_ta(random.Random(s))
        s += 1


def stratified_tas(count: int, seed: int = 0) -> List[Tuple[int, RealTimeProgram, bool]]:
    """``count`` instances, half with a reachable accepting location, half without."""
    from timedtar.oracle import brute_reachable
    want = {True: count // 2, False: count - count // 2}
    out = []
    for s, p in random_ta_stream(seed):
        r = brute_reachable(p)
        if want[r] > 0:
            want[r] -= 1
            out.append((s, p, r))
        if not any(want.values()):
            return out
    return out  # pragma: no cover
