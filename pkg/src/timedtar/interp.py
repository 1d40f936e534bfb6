"""Inductive interpolants for infeasible words, and Hoare-triple checks.

Given an unsatisfiable encoding ``C_0 and ... and C_m`` the predicates
``I_0 .. I_{m-1}`` (over frames ``1 .. m``) satisfy

* ``C_0`` implies ``I_0``,
* ``I_{k-1} and C_k`` implies ``I_k``,
* ``I_{m-1} and C_m`` is unsatisfiable.

Three constructions are offered.  ``"sp"`` walks forward: the strongest post
of the previous predicate is weakened against the exact projection of the
remaining suffix, using a minimal subset of its atoms and then a single
Farkas combination of them.  ``"wp"`` walks backward from the last cut using
the same binary step.  ``"strongest"`` returns plain strongest
postconditions, which are valid but rarely generalise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .encode import TraceEncoding, at_step, deindex, encode_step, indexed
from .lra import (BOT, EQ, LE, LT, TOP, ConjunctiveSet, LinConstraint, LinTerm, atom,
                  eliminate, entails, is_sat, negate_atom, remove_redundant, split_equalities)
from .model import RealTimeProgram

MODES = ("sp", "wp", "strongest")


class InterpolationError(ValueError):
    pass


@dataclass(frozen=True)
class InductiveInterpolant:
    word: Tuple[str, ...]
    indexed: Tuple[ConjunctiveSet, ...]   # I_k over frame k+1 (plus parameters)

    @property
    def predicates(self) -> List[ConjunctiveSet]:
        """De-indexed predicates, one per cut of the word."""
        return [deindex(c) for c in self.indexed]


@dataclass(frozen=True)
class HoareTriple:
    pre: ConjunctiveSet
    letter: str
    post: ConjunctiveSet

    def __str__(self) -> str:
        return f"{{{self.pre}}} {self.letter} {{{self.post}}}"


# --------------------------------------------------------------------------
# binary interpolation


def farkas(atoms: Sequence[LinConstraint]) -> Optional[Dict[int, Fraction]]:
    """Multipliers refuting the conjunction of ``atoms``, or None if it is satisfiable.

    The combination ``sum(l_i * t_i)`` has no variables, and either its
    constant is positive or it uses a strict atom with positive weight.
    """
    names = [f"#l{i}" for i in range(len(atoms))]
    rows: Dict[str, LinTerm] = {}
    cons = LinTerm()
    strict = LinTerm()
    cs = []
    for i, a in enumerate(atoms):
        lam = LinTerm.var(names[i])
        if a.rel != EQ:
            cs.append(atom(-lam, LE))
        if a.rel == LT:
            strict = strict + lam
        for v, c in a.term.coeffs:
            rows[v] = rows.get(v, LinTerm()) + lam.scale(c)
        cons = cons + lam.scale(a.term.const)
    for t in rows.values():
        cs.append(atom(t, EQ))
    cs.append(atom(-cons, LE))
    cs.append(atom(LinTerm.constant(1) - cons - strict, LE))
    m = is_sat(ConjunctiveSet(cs))
    if m is None:
        return None
    return {i: m.get(names[i], Fraction(0)) for i in range(len(atoms))}


def _minimise(a_atoms: List[LinConstraint], b: ConjunctiveSet) -> List[LinConstraint]:
    """Greedily drop atoms of A while A and B stay jointly unsatisfiable."""
    kept = list(a_atoms)
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1:]
        if is_sat(b.conjoin(trial)) is None:
            kept = trial
        else:
            i += 1
    return kept


def _order_for_dropping(atoms: List[LinConstraint]) -> List[LinConstraint]:
    # try to drop the atoms with the most variables first so that the
    # survivors are simple bounds and differences
    return sorted(atoms, key=lambda a: (-len(a.term.coeffs), a.sort_key()))


def binary_interpolant(a: ConjunctiveSet, b: ConjunctiveSet) -> ConjunctiveSet:
    """A predicate implied by ``a``, inconsistent with ``b``, over their shared variables.

    Both arguments are expected to be over the same frame already.
    """
    if a.is_bot or is_sat(a) is None:
        return BOT
    if b.is_bot or is_sat(b) is None:
        return TOP
    if is_sat(a & b) is not None:
        raise InterpolationError("A and B are jointly satisfiable")
    core = _minimise(_order_for_dropping(split_equalities(a)), b)
    if not core:
        return TOP
    if len(core) == 1:
        return ConjunctiveSet(core)
    lam = farkas(core + split_equalities(b))
    if lam is None:  # pragma: no cover - core and b are unsat by construction
        raise InterpolationError("no Farkas certificate found")
    t = LinTerm()
    strict = False
    for i, at in enumerate(core):
        w = lam[i]
        if w:
            t = t + at.term.scale(w)
            if at.rel == LT:
                strict = True
    res = atom(t, LT if strict else LE)
    if res is True:
        return TOP
    if res is False:
        return BOT
    cand = ConjunctiveSet([res])
    return cand


# --------------------------------------------------------------------------
# inductive interpolants


def _project(c: ConjunctiveSet, keep: Sequence[str], params: Sequence[str]) -> ConjunctiveSet:
    ks = set(keep) | set(params)
    return eliminate(c, [v for v in c.vars if v not in ks])


def suffix_projections(enc: TraceEncoding, params: Sequence[str]) -> List[ConjunctiveSet]:
    """``S[k]``: exact projection of ``C_{k+1} .. C_m`` on frame ``k+1``."""
    steps = enc.steps
    m = len(steps) - 1
    out: List[ConjunctiveSet] = [TOP] * max(m, 0)
    acc = TOP
    for k in range(m - 1, -1, -1):
        acc = _project(steps[k + 1] & acc, enc.frame(k + 1), params)
        out[k] = acc
    return out


def interpolate(enc: TraceEncoding, p: RealTimeProgram, mode: str = "sp") -> InductiveInterpolant:
    """Inductive interpolant of an unsatisfiable single-branch encoding."""
    if mode not in MODES:
        raise ValueError(f"unknown interpolation mode {mode!r}")
    steps = enc.steps
    if is_sat(enc.conjunction()) is not None:
        raise InterpolationError("the word is feasible")
    params = p.params
    m = len(steps) - 1
    if m <= 0:
        return InductiveInterpolant(enc.word, ())
    preds: List[ConjunctiveSet] = []
    if mode == "strongest":
        cur = TOP
        for k in range(m):
            cur = _project(cur & steps[k], enc.frame(k + 1), params)
            cur = remove_redundant(cur)
            preds.append(cur)
    elif mode == "sp":
        suffix = suffix_projections(enc, params)
        cur = TOP
        for k in range(m):
            a = _project(cur & steps[k], enc.frame(k + 1), params)
            cur = binary_interpolant(a, suffix[k])
            preds.append(cur)
    else:  # wp
        forward: List[ConjunctiveSet] = []
        cur = TOP
        for k in range(m):
            cur = _project(cur & steps[k], enc.frame(k + 1), params)
            forward.append(cur)
        preds = [TOP] * m
        last_b = _project(steps[m], enc.frame(m), params)
        preds[m - 1] = binary_interpolant(forward[m - 1], last_b)
        for k in range(m - 2, -1, -1):
            nxt = preds[k + 1]
            if nxt.is_top:
                preds[k] = TOP
                continue
            parts: List[LinConstraint] = []
            res = TOP
            if nxt.is_bot:
                res = binary_interpolant(forward[k], _project(steps[k + 1], enc.frame(k + 1), params))
            else:
                for at in nxt.atoms:
                    for lit in negate_atom(at):
                        b = _project(steps[k + 1].conjoin([lit]), enc.frame(k + 1), params)
                        res = res & binary_interpolant(forward[k], b)
            preds[k] = res
    return InductiveInterpolant(enc.word, tuple(preds))


def check_inductive(enc: TraceEncoding, ii: InductiveInterpolant) -> List[str]:
    """Violated interpolant conditions (empty when all hold)."""
    steps = enc.steps
    problems = []
    m = len(steps) - 1
    if len(ii.indexed) != max(m, 0):
        return [f"expected {max(m, 0)} predicates, got {len(ii.indexed)}"]
    allowed = [set(enc.frame(k + 1)) for k in range(m)]
    for k, c in enumerate(ii.indexed):
        extra = {v for v in c.vars if "@" in v} - allowed[k]
        if extra:
            problems.append(f"I_{k} uses variables outside its frame: {sorted(extra)}")
    if m == 0:
        if is_sat(steps[0]) is not None:
            problems.append("single step is satisfiable")
        return problems
    if not entails(steps[0], ii.indexed[0]):
        problems.append("C_0 does not imply I_0")
    for k in range(1, m):
        if not entails(ii.indexed[k - 1] & steps[k], ii.indexed[k]):
            problems.append(f"I_{k - 1} and C_{k} do not imply I_{k}")
    if is_sat(ii.indexed[m - 1] & steps[m]) is not None:
        problems.append(f"I_{m - 1} and C_{m} is satisfiable")
    return problems


def hoare_valid(t: HoareTriple, p: RealTimeProgram) -> bool:
    """Validity of ``{pre} letter {post}`` for a conjunctive-guard edge."""
    if t.pre.is_bot or t.post.is_top:
        p.cfa.edge(t.letter)
        return True
    branches = encode_step(p, t.letter, 0)
    pre = at_step(t.pre, p, 0)
    post = at_step(t.post, p, 1)
    for br in branches:
        c = pre & br
        if c.is_bot:
            continue
        if t.post.is_bot:
            if is_sat(c) is not None:
                return False
            continue
        for at in post.atoms:
            for lit in negate_atom(at):
                if is_sat(c.conjoin([lit])) is not None:
                    return False
    return True


def hoare_chain(word: Sequence[str], ii: InductiveInterpolant) -> List[HoareTriple]:
    preds = [TOP] + ii.predicates + [BOT]
    return [HoareTriple(preds[k], word[k], preds[k + 1]) for k in range(len(word))]
