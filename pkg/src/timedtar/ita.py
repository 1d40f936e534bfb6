"""Interpolant automata and their combination.

A :class:`PredicateAutomaton` is an NFA whose states are predicates over the
program variables.  State 0 is ``true`` (initial) and state 1 is ``false``
(the only accepting state).  ``false`` is absorbing for every letter; that
self-loop is implicit and never stored.  Every stored transition
``(p, a, q)`` is a valid Hoare triple ``{p} a {q}``, so every accepted word
is infeasible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .encode import post_step
from .interp import HoareTriple, InductiveInterpolant, hoare_valid
from .lra import BOT, TOP, ConjunctiveSet, entails, is_sat
from .model import RealTimeProgram

TRUE_STATE = 0
FALSE_STATE = 1
DEDUP_LIMIT = 64


class HoareCache:
    """Memoised posts and entailments for one program alphabet.

    The program may be swapped for another one that gives the same meaning
    to every shared letter (SafeInit only adds fresh assume letters).
    """

    def __init__(self, program: RealTimeProgram):
        self.program = program
        self.posts: Dict[Tuple[ConjunctiveSet, str], ConjunctiveSet] = {}
        self.entail: Dict[Tuple[ConjunctiveSet, ConjunctiveSet], bool] = {}
        self.checks = 0

    def post(self, pre: ConjunctiveSet, letter: str) -> ConjunctiveSet:
        key = (pre, letter)
        hit = self.posts.get(key)
        if hit is None:
            hit = post_step(pre, self.program, letter)
            self.posts[key] = hit
        return hit

    def entails(self, a: ConjunctiveSet, b: ConjunctiveSet) -> bool:
        if a == b or a.is_bot or b.is_top:
            return True
        if a.is_top and not b.is_bot:
            return False  # a canonical atom over variables is never valid
        key = (a, b)
        hit = self.entail.get(key)
        if hit is None:
            self.checks += 1
            hit = is_sat(a) is None if b.is_bot else entails(a, b)
            self.entail[key] = hit
        return hit

    def valid(self, pre: ConjunctiveSet, letter: str, post: ConjunctiveSet) -> bool:
        if pre.is_bot or post.is_top:
            return True
        return self.entails(self.post(pre, letter), post)


@dataclass(frozen=True)
class PredicateAutomaton:
    states: Tuple[ConjunctiveSet, ...]
    transitions: FrozenSet[Tuple[int, str, int]]

    @classmethod
    def empty(cls) -> "PredicateAutomaton":
        return cls((TOP, BOT), frozenset())

    @property
    def alphabet(self) -> Set[str]:
        return {a for _, a, _ in self.transitions}

    def successor_map(self) -> Dict[Tuple[int, str], FrozenSet[int]]:
        sm = self.__dict__.get("_succ")
        if sm is None:
            tmp: Dict[Tuple[int, str], Set[int]] = {}
            for s, a, t in self.transitions:
                tmp.setdefault((s, a), set()).add(t)
            sm = {k: frozenset(v) for k, v in tmp.items()}
            object.__setattr__(self, "_succ", sm)
        return sm

    def step(self, macro: Iterable[int], letter: str) -> FrozenSet[int]:
        sm = self.successor_map()
        out: Set[int] = set()
        for q in macro:
            if q == FALSE_STATE:
                out.add(FALSE_STATE)
            else:
                out |= sm.get((q, letter), frozenset())
        return frozenset(out)

    def accepts(self, word: Sequence[str]) -> bool:
        macro: FrozenSet[int] = frozenset([TRUE_STATE])
        for a in word:
            macro = self.step(macro, a)
            if not macro:
                return False
        return FALSE_STATE in macro

    def triples(self) -> List[HoareTriple]:
        return [HoareTriple(self.states[s], a, self.states[t])
                for s, a, t in sorted(self.transitions, key=lambda x: (x[1], x[0], x[2]))]

    def restrict_letters(self, keep) -> "PredicateAutomaton":
        return PredicateAutomaton(self.states,
                                  frozenset(t for t in self.transitions if keep(t[1])))

    def __len__(self) -> int:
        return len(self.transitions)


def _dedup(preds: Sequence[ConjunctiveSet], cache: Optional[HoareCache]
           ) -> Tuple[List[ConjunctiveSet], List[int]]:
    """Merge equal (then equivalent) predicates; TRUE and FALSE stay first."""
    states: List[ConjunctiveSet] = [TOP, BOT]
    index: Dict[ConjunctiveSet, int] = {TOP: 0, BOT: 1}
    mapping: List[int] = []
    for c in preds:
        k = index.get(c)
        if k is None and cache is not None and len(states) <= DEDUP_LIMIT:
            for j, s in enumerate(states):
                if cache.entails(c, s) and cache.entails(s, c):
                    k = j
                    break
        if k is None:
            k = len(states)
            states.append(c)
        index[c] = k
        mapping.append(k)
    return states, mapping


def build_ita(word: Sequence[str], ii: InductiveInterpolant, cache: HoareCache,
              letters: Optional[Iterable[str]] = None) -> PredicateAutomaton:
    """Interpolant automaton of an infeasible word.

    The chain ``true -w0-> I_0 -w1-> ... -> false`` is always present; every
    other pair of states gets a transition on each letter of ``letters``
    (default: the letters of ``word``) whenever the Hoare triple is valid.
    """
    preds = ii.predicates
    states, mapping = _dedup(preds, cache)
    chain = [TRUE_STATE] + mapping + [FALSE_STATE]
    trans: Set[Tuple[int, str, int]] = set()
    for k, a in enumerate(word):
        if chain[k] != FALSE_STATE:
            trans.add((chain[k], a, chain[k + 1]))
    alphabet = sorted(set(word) if letters is None else set(letters))
    for a in alphabet:
        for i, s in enumerate(states):
            if i == FALSE_STATE:
                continue
            ps = cache.post(s, a)
            for j, t in enumerate(states):
                if (i, a, j) in trans:
                    continue
                if t.is_top or cache.entails(ps, t):
                    trans.add((i, a, j))
    return PredicateAutomaton(tuple(states), frozenset(trans))


def _merge_states(r: PredicateAutomaton, a: PredicateAutomaton, cache: Optional[HoareCache]):
    states, mapping = _dedup(list(r.states[2:]) + list(a.states[2:]), cache)
    rmap = [0, 1] + mapping[:len(r.states) - 2]
    amap = [0, 1] + mapping[len(r.states) - 2:]
    trans = {(rmap[s], x, rmap[t]) for s, x, t in r.transitions}
    trans |= {(amap[s], x, amap[t]) for s, x, t in a.transitions}
    trans = {t for t in trans if t[0] != FALSE_STATE}
    return states, trans


def plain_union(r: PredicateAutomaton, a: PredicateAutomaton,
                cache: Optional[HoareCache] = None) -> PredicateAutomaton:
    states, trans = _merge_states(r, a, cache)
    return PredicateAutomaton(tuple(states), frozenset(trans))


def extended_union(r: PredicateAutomaton, a: PredicateAutomaton,
                   cache: HoareCache) -> PredicateAutomaton:
    """Union that also adds every triple weaker than an existing one.

    ``(p, x, p')`` is added when some ``(q, x, q')`` exists with ``p``
    entailing ``q`` and ``q'`` entailing ``p'``.  Only states already present
    in one of the operands are used.
    """
    states, trans = _merge_states(r, a, cache)
    n = len(states)
    down: List[List[int]] = []
    up: List[List[int]] = []
    for q in range(n):
        down.append([p for p in range(n) if p != FALSE_STATE and cache.entails(states[p], states[q])])
        up.append([p for p in range(n) if cache.entails(states[q], states[p])])
    out = set(trans)
    for q, x, q2 in trans:
        for p in down[q]:
            for p2 in up[q2]:
                out.add((p, x, p2))
    return PredicateAutomaton(tuple(states), frozenset(out))


def check_sound(a: PredicateAutomaton, p: RealTimeProgram) -> bool:
    """Every stored transition is a valid Hoare triple of ``p``."""
    return all(hoare_valid(t, p) for t in a.triples()) and a.states[0].is_top and a.states[1].is_bot


def to_dot(a: PredicateAutomaton, name: str = "proof") -> str:
    def esc(s: str) -> str:
        return s.replace("\\", "\\\\").replace('"', '\\"')

    lines = [f'digraph "{esc(name)}" {{', "  rankdir=LR;", '  init [shape=point, label=""];']
    for i, s in enumerate(a.states):
        shape = "doublecircle" if i == FALSE_STATE else "box"
        lines.append(f'  s{i} [shape={shape}, label="{esc(str(s))}"];')
    lines.append("  init -> s0;")
    grouped: Dict[Tuple[int, int], List[str]] = {}
    for s, x, t in a.transitions:
        grouped.setdefault((s, t), []).append(x)
    for (s, t), xs in sorted(grouped.items()):
        lines.append(f'  s{s} -> s{t} [label="{esc(", ".join(sorted(xs)))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
