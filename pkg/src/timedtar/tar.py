"""The refinement loop deciding emptiness of a program's timed language.

Each iteration takes the shortest control-flow word not yet covered by the
refinement.  If some timed word realises it the language is non-empty and
the timed word is the witness.  Otherwise the word's inductive interpolant
becomes an interpolant automaton that is merged into the refinement.  The
procedure is a semi-algorithm, so a :class:`Budget` bounds it.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

from .encode import Feasible, TimedWord, encode_word, feasible
from .interp import InductiveInterpolant, interpolate
from .ita import (HoareCache, PredicateAutomaton, build_ita, check_sound, extended_union,
                  plain_union)
from .lang import next_candidate
from .lra import format_rational
from .model import RealTimeProgram, SplitProgram, ensure_valid, split_clausal


@dataclass(frozen=True)
class Budget:
    max_iterations: int = 500
    max_word_length: int = 64
    timeout: float = 300.0

    def __post_init__(self):
        if self.max_iterations <= 0 or self.max_word_length <= 0 or self.timeout <= 0:
            raise ValueError("budget limits must be positive")


@dataclass(frozen=True)
class Empty:
    proof: PredicateAutomaton
    iterations: int
    program: RealTimeProgram = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class NonEmpty:
    witness: TimedWord
    iterations: int
    letters: tuple = ()   # the word over split letters (one per guard branch)
    proof: Optional[PredicateAutomaton] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Exhausted:
    reason: str
    iterations: int
    last_candidate: Optional[tuple]
    proof: PredicateAutomaton


Verdict = Union[Empty, NonEmpty, Exhausted]


@dataclass
class Stats:
    iteration: int
    candidate_length: int
    states: int
    transitions: int
    solver_time: float

    def line(self) -> str:
        return (f"iteration {self.iteration}: candidate length {self.candidate_length}, "
                f"refinement {self.states} states / {self.transitions} transitions, "
                f"{self.solver_time:.3f}s")


def _map_witness(tw: TimedWord, split: SplitProgram) -> TimedWord:
    steps = tuple((split.original(e), d) for e, d in tw.steps)
    return TimedWord(steps, tw.initial, tw.elapsed)


def check_emptiness(p: RealTimeProgram, budget: Optional[Budget] = None, *,
                    interpolants: str = "sp", union: str = "extended",
                    all_letters: bool = False,
                    initial: Optional[PredicateAutomaton] = None,
                    cache: Optional[HoareCache] = None,
                    on_iteration: Optional[Callable[[Stats], None]] = None,
                    deadline: Optional[float] = None,
                    self_check: bool = False,
                    cross_check: Optional[Callable] = None) -> Verdict:
    """Decide whether the timed language of ``p`` is empty.

    ``initial`` seeds the refinement (it must be sound for ``p``) and
    ``cache`` lets several related runs share post and entailment results.
    With ``self_check`` every new interpolant automaton is verified to be
    sound before it is merged.  ``cross_check(query, sat)`` is called with the
    encoding of every candidate and the internal answer, so an external solver
    can confirm it.
    """
    ensure_valid(p)
    budget = budget or Budget()
    if union not in ("extended", "plain"):
        raise ValueError(f"unknown union mode {union!r}")
    split = split_clausal(p)
    sp = split.program
    if cache is None:
        cache = HoareCache(sp)
    else:
        cache.program = sp
    r = initial if initial is not None else PredicateAutomaton.empty()
    end = deadline if deadline is not None else time.monotonic() + budget.timeout
    alphabet = sp.cfa.alphabet
    last = None
    for it in range(1, budget.max_iterations + 1):
        if time.monotonic() > end:
            return Exhausted("timeout", it - 1, last, r)
        t0 = time.monotonic()
        w = next_candidate(sp.cfa, r)
        if w is None:
            return Empty(r, it - 1, sp)
        last = tuple(w)
        if len(w) > budget.max_word_length:
            return Exhausted("word length", it - 1, last, r)
        res = feasible(w, sp)
        if cross_check is not None:
            cross_check(encode_word(w, sp).conjunction(), isinstance(res, Feasible))
        if isinstance(res, Feasible):
            return NonEmpty(_map_witness(res.witness, split), it, tuple(w), r)
        ii = interpolate(res.encoding, sp, interpolants)
        ita = build_ita(w, ii, cache, alphabet if all_letters else None)
        if self_check and not check_sound(ita, sp):
            raise AssertionError(f"unsound interpolant automaton for {w}")
        if not ita.accepts(w):
            raise AssertionError(f"interpolant automaton misses its own word {w}")
        r = extended_union(r, ita, cache) if union == "extended" else plain_union(r, ita, cache)
        if on_iteration is not None:
            on_iteration(Stats(it, len(w), len(r.states), len(r.transitions),
                               time.monotonic() - t0))
    return Exhausted("iterations", budget.max_iterations, last, r)


def explain(v: Verdict) -> str:
    """Human-readable account of a verdict."""
    if isinstance(v, Empty):
        lines = [f"EMPTY: the timed language is empty ({v.iterations} refinement iterations)",
                 "Proof (valid Hoare triples):"]
        for t in v.proof.triples():
            if t.post.is_top:
                continue
            lines.append(f"  {t}")
        return "\n".join(lines) + "\n"
    if isinstance(v, NonEmpty):
        lines = [f"NON-EMPTY: witness found after {v.iterations} iterations"]
        init = [(n, q) for n, q in v.witness.initial]
        if init:
            lines.append("  initial: " + ", ".join(f"{n} = {format_rational(q)}" for n, q in init))
        for e, d in v.witness.steps:
            lines.append(f"  {e} then wait {format_rational(d)}")
        return "\n".join(lines) + "\n"
    lines = [f"EXHAUSTED: budget hit ({v.reason}) after {v.iterations} iterations",
             f"  refinement size: {len(v.proof.states)} states / {len(v.proof.transitions)} transitions"]
    if v.last_candidate is not None:
        lines.append("  last candidate: " + ".".join(v.last_candidate))
    return "\n".join(lines) + "\n"
