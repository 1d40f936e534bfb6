"""Exact linear real arithmetic over the rationals.

Terms, atoms and conjunctions are immutable and kept in a canonical form so
that syntactic equality is a cheap first test for semantic equality.
Satisfiability is decided by :mod:`timedtar.simplex`; quantifier elimination
is Fourier-Motzkin with equality substitution and Chernikov pruning.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import simplex

Rational = Fraction
Valuation = Dict[str, Fraction]

LT = "<"
LE = "<="
EQ = "="

_REL_ORDER = {EQ: 0, LE: 1, LT: 2}


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"n/d"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class LinTerm:
    """Affine term ``sum(c_v * v) + const`` with no stored zero coefficient."""

    __slots__ = ("coeffs", "const", "_hash")

    def __init__(self, coeffs: Union[Mapping[str, Fraction], Iterable[Tuple[str, Fraction]]] = (),
                 const=0):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: Dict[str, Fraction] = {}
        for v, c in items:
            c = as_rational(c)
            if c:
                acc[v] = acc.get(v, 0) + c
        self.coeffs: Tuple[Tuple[str, Fraction], ...] = tuple(
            sorted((v, c) for v, c in acc.items() if c))
        self.const: Fraction = as_rational(const)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: Tuple[Tuple[str, Fraction], ...], const: Fraction) -> "LinTerm":
        t = object.__new__(cls)
        t.coeffs = coeffs
        t.const = const
        t._hash = None
        return t

    @classmethod
    def var(cls, name: str, coef=1) -> "LinTerm":
        return cls(((name, coef),))

    @classmethod
    def constant(cls, value) -> "LinTerm":
        return cls((), value)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)

    def coef(self, v: str) -> Fraction:
        for name, c in self.coeffs:
            if name == v:
                return c
        return Fraction(0)

    @property
    def vars(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other) -> "LinTerm":
        if not isinstance(other, LinTerm):
            other = LinTerm.constant(other)
        d = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinTerm._raw(tuple(sorted((v, c) for v, c in d.items() if c)),
                            self.const + other.const)

    def __neg__(self) -> "LinTerm":
        return LinTerm._raw(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other) -> "LinTerm":
        if not isinstance(other, LinTerm):
            other = LinTerm.constant(other)
        return self + (-other)

    def scale(self, k) -> "LinTerm":
        k = as_rational(k)
        if not k:
            return LinTerm._raw((), Fraction(0))
        return LinTerm._raw(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    def substitute(self, mapping: Mapping[str, "LinTerm"]) -> "LinTerm":
        """Replace variables by terms (simultaneously)."""
        d: Dict[str, Fraction] = {}
        const = self.const
        for v, c in self.coeffs:
            repl = mapping.get(v)
            if repl is None:
                d[v] = d.get(v, 0) + c
            else:
                const += c * repl.const
                for w, cw in repl.coeffs:
                    d[w] = d.get(w, 0) + c * cw
        return LinTerm._raw(tuple(sorted((v, c) for v, c in d.items() if c)), const)

    def rename(self, mapping: Mapping[str, str]) -> "LinTerm":
        d: Dict[str, Fraction] = {}
        for v, c in self.coeffs:
            w = mapping.get(v, v)
            d[w] = d.get(w, 0) + c
        return LinTerm._raw(tuple(sorted((v, c) for v, c in d.items() if c)), self.const)

    def evaluate(self, val: Mapping[str, Fraction]) -> Fraction:
        s = self.const
        for v, c in self.coeffs:
            s += c * val[v]
        return s

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinTerm) and self.coeffs == other.coeffs
                and self.const == other.const)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.coeffs, self.const))
        return self._hash

    def __repr__(self) -> str:
        return f"LinTerm({format_term(self)!r})"

    def __str__(self) -> str:
        return format_term(self)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_linear(coeffs: Sequence[Tuple[str, Fraction]]) -> str:
    parts: List[str] = []
    for i, (v, c) in enumerate(coeffs):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{format_rational(mag)}*{v}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts) if parts else "0"


def format_term(t: LinTerm) -> str:
    s = format_linear(t.coeffs)
    if not t.coeffs:
        return format_rational(t.const)
    if t.const > 0:
        s += f" + {format_rational(t.const)}"
    elif t.const < 0:
        s += f" - {format_rational(-t.const)}"
    return s


class LinConstraint:
    """Canonical atom ``term REL 0`` with REL one of ``<``, ``<=``, ``=``.

    Canonical means the coefficient of the first variable (in name order) is
    +1 for equalities and +-1 for inequalities.  Build atoms through
    :func:`atom`, which also folds constant atoms into booleans.
    """

    __slots__ = ("term", "rel", "_hash")

    def __init__(self, term: LinTerm, rel: str):
        self.term = term
        self.rel = rel
        self._hash = hash((term, rel))

    @property
    def vars(self) -> frozenset:
        return self.term.vars

    @property
    def strict(self) -> bool:
        return self.rel == LT

    def direction(self) -> Tuple[Tuple[Tuple[str, Fraction], ...], int]:
        """Linear part normalised to leading +1, and the sign that was removed."""
        lead = self.term.coeffs[0][1]
        if lead > 0:
            return self.term.coeffs, 1
        return tuple((v, -c) for v, c in self.term.coeffs), -1

    def holds(self, val: Mapping[str, Fraction]) -> bool:
        x = self.term.evaluate(val)
        if self.rel == LT:
            return x < 0
        if self.rel == LE:
            return x <= 0
        return x == 0

    def sort_key(self):
        lin, sign = self.direction()
        return (lin, sign, _REL_ORDER[self.rel], self.term.const)

    def substitute(self, mapping: Mapping[str, LinTerm]) -> Union["LinConstraint", bool]:
        return atom(self.term.substitute(mapping), self.rel)

    def rename(self, mapping: Mapping[str, str]) -> Union["LinConstraint", bool]:
        return atom(self.term.rename(mapping), self.rel)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinConstraint) and self.rel == other.rel
                and self.term == other.term)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "LinConstraint") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"LinConstraint({str(self)!r})"

    def __str__(self) -> str:
        lin, sign = self.direction()
        bound = -self.term.const * sign
        rel = self.rel
        if sign < 0 and rel != EQ:
            rel = ">" if rel == LT else ">="
        return f"{format_linear(lin)} {rel} {format_rational(bound)}"


def atom(term: LinTerm, rel: str) -> Union[LinConstraint, bool]:
    """Canonical atom for ``term rel 0``; constant atoms evaluate to a bool."""
    if rel not in _REL_ORDER:
        raise ValueError(f"unknown relation {rel!r}")
    if not term.coeffs:
        c = term.const
        return c < 0 if rel == LT else (c <= 0 if rel == LE else c == 0)
    lead = term.coeffs[0][1]
    k = abs(lead) if rel != EQ else lead
    if k != 1:
        term = term.scale(1 / k)
    return LinConstraint(term, rel)


def compare(lhs: LinTerm, op: str, rhs: LinTerm) -> List[Union[LinConstraint, bool]]:
    """Atoms for ``lhs op rhs`` with op in ``< <= == = >= >``."""
    d = lhs - rhs
    if op == "<":
        return [atom(d, LT)]
    if op == "<=":
        return [atom(d, LE)]
    if op in ("==", "="):
        return [atom(d, EQ)]
    if op == ">=":
        return [atom(-d, LE)]
    if op == ">":
        return [atom(-d, LT)]
    raise ValueError(f"unknown comparison {op!r}")


class ConjunctiveSet:
    """A conjunction of canonical atoms, or one of the constants TOP / BOT.

    Construction normalises per linear direction: at most one upper bound, one
    lower bound or a single equality survives for each direction, matching
    bounds collapse to an equality, and crossing bounds yield BOT.
    """

    __slots__ = ("atoms", "is_bot", "_hash")

    def __init__(self, atoms: Iterable[Union[LinConstraint, bool]] = (), bottom: bool = False):
        self.atoms: Tuple[LinConstraint, ...] = ()
        self.is_bot = False
        if bottom:
            self.is_bot = True
        else:
            norm = _normalise(atoms)
            if norm is None:
                self.is_bot = True
            else:
                self.atoms = norm
        self._hash = hash((self.atoms, self.is_bot))

    @classmethod
    def top(cls) -> "ConjunctiveSet":
        return TOP

    @classmethod
    def bot(cls) -> "ConjunctiveSet":
        return BOT

    @property
    def is_top(self) -> bool:
        return not self.is_bot and not self.atoms

    @property
    def vars(self) -> frozenset:
        out = set()
        for a in self.atoms:
            out |= a.vars
        return frozenset(out)

    def __and__(self, other: "ConjunctiveSet") -> "ConjunctiveSet":
        if self.is_bot or other.is_bot:
            return BOT
        if not other.atoms:
            return self
        if not self.atoms:
            return other
        return ConjunctiveSet(self.atoms + other.atoms)

    def conjoin(self, extra: Iterable[Union[LinConstraint, bool]]) -> "ConjunctiveSet":
        if self.is_bot:
            return BOT
        return ConjunctiveSet(itertools.chain(self.atoms, extra))

    def substitute(self, mapping: Mapping[str, LinTerm]) -> "ConjunctiveSet":
        if self.is_bot:
            return BOT
        return ConjunctiveSet(a.substitute(mapping) for a in self.atoms)

    def rename(self, mapping: Mapping[str, str]) -> "ConjunctiveSet":
        if self.is_bot:
            return BOT
        return ConjunctiveSet(a.rename(mapping) for a in self.atoms)

    def holds(self, val: Mapping[str, Fraction]) -> bool:
        return not self.is_bot and all(a.holds(val) for a in self.atoms)

    def __iter__(self) -> Iterator[LinConstraint]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ConjunctiveSet) and self.is_bot == other.is_bot
                and self.atoms == other.atoms)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ConjunctiveSet({str(self)!r})"

    def __str__(self) -> str:
        if self.is_bot:
            return "false"
        if not self.atoms:
            return "true"
        return " and ".join(str(a) for a in self.atoms)


def _normalise(atoms: Iterable[Union[LinConstraint, bool]]) -> Optional[Tuple[LinConstraint, ...]]:
    # direction -> [upper(value, strict) | None, lower(value, strict) | None, eq | None]
    table: Dict[tuple, list] = {}
    for a in atoms:
        if a is True:
            continue
        if a is False:
            return None
        lin, sign = a.direction()
        # a: sign*L + c  rel 0  ->  L rel' -c*sign
        value = -a.term.const * sign
        slot = table.setdefault(lin, [None, None, None])
        if a.rel == EQ:
            if slot[2] is not None and slot[2] != value:
                return None
            slot[2] = value
        else:
            strict = a.rel == LT
            if sign > 0:
                cur = slot[0]
                if cur is None or value < cur[0] or (value == cur[0] and strict):
                    slot[0] = (value, strict)
            else:
                cur = slot[1]
                if cur is None or value > cur[0] or (value == cur[0] and strict):
                    slot[1] = (value, strict)
    out: List[LinConstraint] = []
    for lin, (up, lo, eq) in table.items():
        lt = LinTerm._raw(lin, Fraction(0))
        if eq is not None:
            if up is not None and (eq > up[0] or (eq == up[0] and up[1])):
                return None
            if lo is not None and (eq < lo[0] or (eq == lo[0] and lo[1])):
                return None
            out.append(LinConstraint(LinTerm._raw(lin, -eq), EQ))
            continue
        if up is not None and lo is not None:
            if lo[0] > up[0] or (lo[0] == up[0] and (lo[1] or up[1])):
                return None
            if lo[0] == up[0]:
                out.append(LinConstraint(LinTerm._raw(lin, -up[0]), EQ))
                continue
        if up is not None:
            out.append(LinConstraint(LinTerm._raw(lin, -up[0]), LT if up[1] else LE))
        if lo is not None:
            neg = tuple((v, -c) for v, c in lt.coeffs)
            out.append(LinConstraint(LinTerm._raw(neg, lo[0]), LT if lo[1] else LE))
    out.sort(key=LinConstraint.sort_key)
    return tuple(out)


TOP = ConjunctiveSet()
BOT = ConjunctiveSet(bottom=True)

Clause = frozenset  # frozenset of LinConstraint, read as a disjunction


class ClausalSet:
    """Conjunction of clauses (CNF).  No clauses is TOP; an empty clause is BOT."""

    __slots__ = ("clauses", "_hash")

    def __init__(self, clauses: Iterable[Iterable[Union[LinConstraint, bool]]] = ()):
        cls_set = set()
        bottom = False
        for clause in clauses:
            lits = set()
            tautology = False
            for lit in clause:
                if lit is True:
                    tautology = True
                    break
                if lit is False:
                    continue
                lits.add(lit)
            if tautology:
                continue
            if not lits:
                bottom = True
                break
            cls_set.add(frozenset(lits))
        if bottom:
            self.clauses = frozenset([frozenset()])
        else:
            # drop clauses subsumed by a smaller clause
            kept = [c for c in cls_set if not any(o < c for o in cls_set)]
            self.clauses = frozenset(kept)
        self._hash = hash(self.clauses)

    @classmethod
    def from_conjunction(cls, c: ConjunctiveSet) -> "ClausalSet":
        if c.is_bot:
            return cls([[]])
        return cls([[a] for a in c.atoms])

    @property
    def is_bot(self) -> bool:
        return frozenset() in self.clauses

    @property
    def is_top(self) -> bool:
        return not self.clauses

    @property
    def vars(self) -> frozenset:
        out = set()
        for cl in self.clauses:
            for a in cl:
                out |= a.vars
        return frozenset(out)

    def is_conjunctive(self) -> bool:
        return all(len(c) == 1 for c in self.clauses)

    def sorted_clauses(self) -> List[List[LinConstraint]]:
        out = [sorted(c, key=LinConstraint.sort_key) for c in self.clauses]
        out.sort(key=lambda c: (len(c), [a.sort_key() for a in c]))
        return out

    def __and__(self, other: "ClausalSet") -> "ClausalSet":
        return ClausalSet(itertools.chain(self.clauses, other.clauses))

    def add_clause(self, clause: Iterable[LinConstraint]) -> "ClausalSet":
        return ClausalSet(itertools.chain(self.clauses, [clause]))

    def map_atoms(self, fn) -> "ClausalSet":
        return ClausalSet([[fn(a) for a in cl] for cl in self.clauses])

    def holds(self, val: Mapping[str, Fraction]) -> bool:
        return all(any(a.holds(val) for a in cl) for cl in self.clauses)

    def __eq__(self, other) -> bool:
        return isinstance(other, ClausalSet) and self.clauses == other.clauses

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ClausalSet({str(self)!r})"

    def __str__(self) -> str:
        if self.is_bot:
            return "false"
        if self.is_top:
            return "true"
        parts = []
        for cl in self.sorted_clauses():
            if len(cl) == 1:
                parts.append(str(cl[0]))
            else:
                parts.append("(" + " or ".join(str(a) for a in cl) + ")")
        return " and ".join(parts)


CTOP = ClausalSet()
CBOT = ClausalSet([[]])


# --------------------------------------------------------------------------
# decision procedures


def is_sat(c: ConjunctiveSet) -> Optional[Valuation]:
    """Return a satisfying valuation over ``c.vars`` or None when unsatisfiable."""
    if c.is_bot:
        return None
    if not c.atoms:
        return {}
    return simplex.solve(c.atoms)


def negate_atom(a: LinConstraint) -> List[LinConstraint]:
    """Negation of one atom as a list of disjuncts."""
    t = a.term
    if a.rel == LE:
        return [atom(-t, LT)]
    if a.rel == LT:
        return [atom(-t, LE)]
    return [atom(t, LT), atom(-t, LT)]


def negate(c: ConjunctiveSet) -> Clause:
    """De Morgan: the clause equivalent to the negation of a proper conjunction."""
    if c.is_bot or c.is_top:
        raise ValueError("negate() needs a conjunction other than TOP/BOT")
    lits = []
    for a in c.atoms:
        lits.extend(negate_atom(a))
    return frozenset(lits)


def entails_atom(a: ConjunctiveSet, b: LinConstraint) -> bool:
    if a.is_bot:
        return True
    if b in a.atoms:
        return True
    for lit in negate_atom(b):
        if is_sat(a.conjoin([lit])) is not None:
            return False
    return True


def entails(a: ConjunctiveSet, b: ConjunctiveSet) -> bool:
    """True iff every valuation satisfying ``a`` satisfies ``b``."""
    if a.is_bot:
        return True
    if b.is_bot:
        return is_sat(a) is None
    return all(entails_atom(a, x) for x in b.atoms)


def counterexample(a: ConjunctiveSet, b: ConjunctiveSet) -> Optional[Valuation]:
    """A valuation of ``a`` violating ``b``, or None when ``a`` entails ``b``."""
    if a.is_bot:
        return None
    if b.is_bot:
        return is_sat(a)
    for x in b.atoms:
        for lit in negate_atom(x):
            m = is_sat(a.conjoin([lit]))
            if m is not None:
                return m
    return None


def equivalent(a: ConjunctiveSet, b: ConjunctiveSet) -> bool:
    return a == b or (entails(a, b) and entails(b, a))


def clausal_entails(a: ClausalSet, b: ClausalSet) -> bool:
    """Entailment between CNF formulas, via DNF branches of ``a``."""
    branches = dnf_split(a)
    for br in branches:
        for cl in b.clauses:
            # br |= (l1 or ... or lk)  iff  br and not l1 and ... and not lk unsat
            negs = [negate_atom(l) for l in cl]
            for choice in itertools.product(*negs):
                if is_sat(br.conjoin(choice)) is not None:
                    return False
    return True


def clausal_equivalent(a: ClausalSet, b: ClausalSet) -> bool:
    return clausal_entails(a, b) and clausal_entails(b, a)


def dnf_split(f: ClausalSet, prune_subsumed: bool = True) -> List[ConjunctiveSet]:
    """Satisfiable DNF branches whose union is the solution set of ``f``."""
    if f.is_bot:
        return []
    branches = [TOP]
    for clause in f.sorted_clauses():
        nxt: List[ConjunctiveSet] = []
        seen = set()
        for br in branches:
            for lit in clause:
                cand = br.conjoin([lit])
                if cand.is_bot or cand in seen:
                    continue
                if is_sat(cand) is None:
                    continue
                seen.add(cand)
                nxt.append(cand)
        branches = nxt
        if not branches:
            return []
    if prune_subsumed and len(branches) > 1:
        kept: List[ConjunctiveSet] = []
        for i, br in enumerate(branches):
            others = kept + branches[i + 1:]
            if any(entails(br, o) for o in others):
                continue
            kept.append(br)
        branches = kept
    return branches


# --------------------------------------------------------------------------
# quantifier elimination


def _solve_for(a: LinConstraint, v: str) -> LinTerm:
    """From equality atom ``a`` (term = 0) return the term t with v = t."""
    c = a.term.coef(v)
    rest = LinTerm._raw(tuple((w, k) for w, k in a.term.coeffs if w != v), a.term.const)
    return rest.scale(-1 / c)


def eliminate(c: ConjunctiveSet, elim: Iterable[str], prune: bool = True) -> ConjunctiveSet:
    """Exact projection of ``c`` that existentially quantifies ``elim``.

    Equalities are used for substitution first, the remaining variables are
    removed by Fourier-Motzkin.  Derived atoms whose Chernikov history is too
    large are dropped, and with ``prune`` every remaining atom entailed by the
    others is removed afterwards.
    """
    if c.is_bot:
        return BOT
    elim = set(elim) & c.vars
    if not elim:
        return c
    atoms: List[LinConstraint] = list(c.atoms)

    # phase 1: substitution through equalities
    progress = True
    while progress and elim:
        progress = False
        for a in atoms:
            if a.rel != EQ:
                continue
            cand = [v for v, _ in a.term.coeffs if v in elim]
            if not cand:
                continue
            v = cand[0]
            repl = {v: _solve_for(a, v)}
            nxt = []
            for b in atoms:
                if b is a:
                    continue
                nb = b.substitute(repl) if v in b.vars else b
                if nb is False:
                    return BOT
                if nb is True:
                    continue
                nxt.append(nb)
            cs = ConjunctiveSet(nxt)
            if cs.is_bot:
                return BOT
            atoms = list(cs.atoms)
            elim.discard(v)
            progress = True
            break
    present = set()
    for a in atoms:
        present |= a.vars
    elim &= present

    # phase 2: Fourier-Motzkin with histories
    hist: Dict[LinConstraint, frozenset] = {a: frozenset([i]) for i, a in enumerate(atoms)}
    eliminated = 0
    while elim:
        v = min(sorted(elim), key=lambda x: _fm_cost(atoms, x))
        elim.discard(v)
        eliminated += 1
        pos, neg, rest = [], [], []
        eq_atom = None
        for a in atoms:
            cv = a.term.coef(v)
            if not cv:
                rest.append(a)
            elif a.rel == EQ:
                eq_atom = a
                break
            elif cv > 0:
                pos.append(a)
            else:
                neg.append(a)
        if eq_atom is not None:
            # an equality re-appeared through normalisation: substitute it
            repl = {v: _solve_for(eq_atom, v)}
            h = hist.get(eq_atom, frozenset())
            nxt, nh = [], {}
            for b in atoms:
                if b is eq_atom:
                    continue
                nb = b.substitute(repl) if v in b.vars else b
                if nb is False:
                    return BOT
                if nb is True:
                    continue
                nxt.append(nb)
                nh[nb] = hist.get(b, frozenset()) | (h if v in b.vars else frozenset())
            atoms, hist = nxt, nh
            cs = ConjunctiveSet(atoms)
            if cs.is_bot:
                return BOT
            atoms = list(cs.atoms)
            hist = {a: nh.get(a, frozenset()) for a in atoms}
            continue
        new_atoms = list(rest)
        new_hist = {a: hist.get(a, frozenset()) for a in rest}
        for p in pos:
            cp = p.term.coef(v)
            for n in neg:
                cn = n.term.coef(v)
                h = hist.get(p, frozenset()) | hist.get(n, frozenset())
                if len(h) > eliminated + 1:
                    continue
                t = p.term.scale(-cn) + n.term.scale(cp)
                rel = LT if (p.rel == LT or n.rel == LT) else LE
                na = atom(t, rel)
                if na is True:
                    continue
                if na is False:
                    return BOT
                if na in new_hist:
                    if len(h) < len(new_hist[na]):
                        new_hist[na] = h
                    continue
                new_atoms.append(na)
                new_hist[na] = h
        cs = ConjunctiveSet(new_atoms)
        if cs.is_bot:
            return BOT
        atoms = list(cs.atoms)
        hist = {a: new_hist.get(a, frozenset()) for a in atoms}
    result = ConjunctiveSet(atoms)
    if prune and len(result.atoms) > 1:
        result = remove_redundant(result)
    return result


def _fm_cost(atoms: Sequence[LinConstraint], v: str) -> int:
    p = n = 0
    for a in atoms:
        c = a.term.coef(v)
        if c > 0:
            p += 1
        elif c < 0:
            n += 1
    return p * n - p - n


def remove_redundant(c: ConjunctiveSet) -> ConjunctiveSet:
    """Drop atoms entailed by the remaining ones (best effort, order dependent)."""
    if c.is_bot or len(c.atoms) < 2:
        return c
    if is_sat(c) is None:
        return BOT
    kept = list(c.atoms)
    i = 0
    while i < len(kept):
        others = ConjunctiveSet(kept[:i] + kept[i + 1:])
        if entails_atom(others, kept[i]):
            kept.pop(i)
        else:
            i += 1
    return ConjunctiveSet(kept)


def project(c: ConjunctiveSet, keep: Iterable[str]) -> ConjunctiveSet:
    keep = set(keep)
    return eliminate(c, [v for v in c.vars if v not in keep])


def split_equalities(c: ConjunctiveSet) -> List[LinConstraint]:
    """Atoms of ``c`` with every equality written as two non-strict halves."""
    out: List[LinConstraint] = []
    for a in c.atoms:
        if a.rel == EQ:
            out.append(atom(a.term, LE))
            out.append(atom(-a.term, LE))
        else:
            out.append(a)
    return out
