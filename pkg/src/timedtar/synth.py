"""Maximal safe initial sets, parameter synthesis and robustness margins.

SafeInit repeatedly asks whether ``Assume(I).P`` has an empty timed
language.  Each witness word ``w`` found on the way is feasible from some
initial valuations; the exact set of those (the projection of the word's
encoding on its first frame) is removed from ``I`` and the loop continues.
When the language becomes empty, ``I`` is the largest safe set.

Parameter synthesis is the same loop with every removed set projected onto
the parameters.  Robustness widens all clock guards by a fresh parameter
``eps`` and synthesises over the parameters with ``eps > 0`` assumed.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .encode import deindex, encode_word
from .ita import HoareCache
from .lra import (CTOP, LE, LT, TOP, ClausalSet, ConjunctiveSet, LinTerm, atom, clausal_entails,
                  dnf_split, eliminate, negate)
from .model import (ASSUME_PREFIX, PARAMETER, RealTimeProgram, assume_prefix, enlarge_guards,
                    ensure_valid, fresh_name, split_clausal)
from .tar import Budget, Empty, Exhausted, NonEmpty, check_emptiness

MAXIMAL = "Maximal"
PARTIAL = "PartialAtBudget"


@dataclass(frozen=True)
class Removal:
    """One strengthening step: the witness word and the set it removed."""

    word: Tuple[str, ...]
    removed: ConjunctiveSet


@dataclass(frozen=True)
class SafeInitResult:
    constraint: ClausalSet
    status: str
    iterations: int
    removals: Tuple[Removal, ...] = ()
    tar_iterations: int = 0

    @property
    def maximal(self) -> bool:
        return self.status == MAXIMAL


ParamResult = SafeInitResult


def exists_init(w: Sequence[str], p: RealTimeProgram,
                keep: Optional[Sequence[str]] = None) -> ConjunctiveSet:
    """Initial valuations (or parameter values, with ``keep``) from which ``w`` is feasible.

    ``p`` must have conjunctive guards along ``w``.  The projection is done
    step by step from the end of the word so each elimination is small.
    """
    enc = encode_word(w, p)
    steps = enc.steps
    params = p.params
    acc = TOP
    for k in range(len(steps) - 1, -1, -1):
        c = steps[k] & acc
        if c.is_bot:
            return ConjunctiveSet(bottom=True)
        ks = set(enc.frame(k)) | set(params)
        acc = eliminate(c, [v for v in c.vars if v not in ks])
        if acc.is_bot:
            return acc
    res = deindex(acc)
    if keep is not None:
        ks = set(keep)
        res = eliminate(res, [v for v in res.vars if v not in ks])
    return res


def _assume_names(p: RealTimeProgram) -> Tuple[str, str]:
    loc = fresh_name("__start", p.cfa.locations)
    return loc, ASSUME_PREFIX


def _is_assume(letter: str, eid: str) -> bool:
    return letter == eid or letter.startswith(eid + "#")


def safe_init(p: RealTimeProgram, budget: Optional[Budget] = None, *,
              params: Optional[Sequence[str]] = None,
              interpolants: str = "sp", union: str = "extended",
              reuse: bool = True, on_iteration=None, cross_check=None) -> SafeInitResult:
    """Largest initial constraint under which the timed language of ``p`` is empty.

    With ``params`` the constraint only mentions those variables.
    """
    ensure_valid(p)
    budget = budget or Budget()
    deadline = time.monotonic() + budget.timeout
    loc, base = _assume_names(p)
    taken = {e.id for e in p.cfa.edges}
    split_p = split_clausal(p).program
    cache = None
    refinement = None
    constraint = CTOP
    removals: List[Removal] = []
    tar_its = 0
    gen = 0
    while True:
        gen += 1
        eid = fresh_name(f"{base}{gen}", taken)
        q = assume_prefix(p, constraint, edge_id=eid, location=loc)
        if cache is None:
            cache = HoareCache(split_clausal(q).program)
        v = check_emptiness(q, budget, interpolants=interpolants, union=union,
                            initial=refinement if reuse else None, cache=cache,
                            deadline=deadline, on_iteration=on_iteration,
                            cross_check=cross_check)
        tar_its += v.iterations
        if isinstance(v, Empty):
            return SafeInitResult(constraint, MAXIMAL, gen, tuple(removals), tar_its)
        if isinstance(v, Exhausted):
            return SafeInitResult(constraint, PARTIAL, gen, tuple(removals), tar_its)
        word = list(v.letters[1:])
        removed = exists_init(word, split_p, params)
        if removed.is_bot:  # pragma: no cover - the word was just found feasible
            raise AssertionError("feasible witness with an empty initial set")
        removals.append(Removal(tuple(word), removed))
        if removed.is_top:
            constraint = ClausalSet([[]])
        else:
            constraint = constraint.add_clause(negate(removed))
        if reuse and v.proof is not None:
            refinement = v.proof.restrict_letters(lambda x, e=eid: not _is_assume(x, e))


def synth_params(p: RealTimeProgram, params: Sequence[str], budget: Optional[Budget] = None,
                 **kw) -> ParamResult:
    """Largest constraint over ``params`` making the timed language empty."""
    kinds = {v.name: v.kind for v in p.vars}
    for x in params:
        if kinds.get(x) != PARAMETER:
            raise ValueError(f"{x!r} is not a declared parameter")
    return safe_init(p, budget, params=list(params), **kw)


@dataclass(frozen=True)
class Margin:
    """Supremum of the safe widenings: ``value`` None means unbounded."""

    value: Optional[Fraction]
    closed: bool = False

    @property
    def unbounded(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        from .lra import format_rational
        if self.value is None:
            return "inf"
        return f"{format_rational(self.value)} ({'attained' if self.closed else 'not attained'})"


@dataclass(frozen=True)
class RobustResult:
    constraint: ClausalSet
    eps: str
    max_eps: Optional[Margin]
    status: str
    iterations: int
    program: RealTimeProgram = field(repr=False, compare=False, default=None)


def _interval(c: ConjunctiveSet, eps: str) -> Optional[Tuple[Fraction, bool, Optional[Fraction], bool]]:
    """(lo, lo_closed, hi, hi_closed) of a one-variable conjunction; hi None = +inf."""
    lo, lo_c, hi, hi_c = Fraction(0), False, None, False
    for a in c.atoms:
        k = a.term.coef(eps)
        bound = -a.term.const / k
        if a.rel == "=":
            return (bound, True, bound, True)
        closed = a.rel == LE
        if k > 0:  # eps <= bound
            if hi is None or bound < hi or (bound == hi and not closed):
                hi, hi_c = bound, closed
        else:      # eps >= bound
            if bound > lo or (bound == lo and not closed):
                lo, lo_c = bound, closed
    return lo, lo_c, hi, hi_c


def max_eps(constraint: ClausalSet, eps: str) -> Optional[Margin]:
    """Supremum of a downward-closed safe set ``{eps > 0 | constraint}``.

    Returns None when the constraint mentions other variables or when the
    safe values of ``eps`` do not form an interval starting at 0.
    """
    if constraint.vars - {eps}:
        return None
    gt0 = [atom(-LinTerm.var(eps), LT)]
    branches = dnf_split(constraint.add_clause(gt0))
    ivs = []
    for br in branches:
        proj = eliminate(br, [v for v in br.vars if v != eps])
        if proj.is_bot:
            continue
        ivs.append(_interval(proj, eps))
    if not ivs:
        return None
    ivs.sort(key=lambda t: (t[0], not t[1]))
    lo, lo_c, hi, hi_c = ivs[0]
    if lo != 0 or lo_c:
        return None
    for nlo, nlo_c, nhi, nhi_c in ivs[1:]:
        if hi is None:
            break
        if nlo > hi or (nlo == hi and not (hi_c or nlo_c)):
            return None
        if nhi is None or nhi > hi or (nhi == hi and nhi_c):
            hi, hi_c = nhi, nhi_c
    return Margin(hi, hi_c if hi is not None else False)


def synth_robust(p: RealTimeProgram, budget: Optional[Budget] = None, eps: str = "eps",
                 **kw) -> RobustResult:
    """Guard widening by a fresh ``eps`` and synthesis over all parameters."""
    ensure_valid(p)
    eps = fresh_name(eps, [v.name for v in p.vars])
    wide = enlarge_guards(p, eps)
    gt0 = ClausalSet([[atom(-LinTerm.var(eps), LT)]])
    wide = assume_prefix(wide, gt0, edge_id=fresh_name("__robust", (e.id for e in wide.cfa.edges)),
                         location=fresh_name("__robust_start", wide.cfa.locations))
    res = synth_params(wide, wide.params, budget, **kw)
    margin = max_eps(res.constraint, eps) if res.maximal else None
    return RobustResult(res.constraint, eps, margin, res.status, res.iterations, wide)


def branches_at_zero(constraint: ClausalSet, eps: str) -> List[ConjunctiveSet]:
    """DNF branches that allow some ``eps > 0``, with ``eps`` then set to 0.

    This is the limit of the robust region as the widening vanishes.
    """
    gt0 = [atom(-LinTerm.var(eps), LT)]
    out = []
    for br in dnf_split(constraint.add_clause(gt0)):
        if br.is_bot:
            continue
        # drop the helper eps > 0 atom before substituting
        z = ConjunctiveSet(a for a in br.atoms if a != gt0[0]).substitute(
            {eps: LinTerm.constant(0)})
        if not z.is_bot:
            out.append(z)
    return out


def dnf_entails(branches: Sequence[ConjunctiveSet], target: ClausalSet) -> bool:
    return all(clausal_entails(ClausalSet.from_conjunction(b), target) for b in branches)
