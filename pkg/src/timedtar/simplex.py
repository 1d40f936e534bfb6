"""General-form simplex over exact rationals with strict-bound support.

Strict inequalities are handled with delta-rationals: a bound ``x < c`` is
stored as ``x <= c - d`` for a symbolic positive infinitesimal ``d``.  Values
are pairs ``(a, b)`` meaning ``a + b*d`` and Python's tuple ordering is the
correct lexicographic order on them.  After a feasible assignment is found a
concrete rational ``d`` is chosen so that every bound still holds.

Pivoting follows Bland's rule, so the procedure always terminates.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

ZERO = Fraction(0)
DZERO = (ZERO, ZERO)

DRat = Tuple[Fraction, Fraction]


def _add(a: DRat, b: DRat) -> DRat:
    return (a[0] + b[0], a[1] + b[1])


def _scale(k: Fraction, a: DRat) -> DRat:
    return (k * a[0], k * a[1])


class Tableau:
    """Sparse tableau ``basic = sum(coef * nonbasic)`` with variable bounds."""

    def __init__(self, n_original: int):
        self.n = n_original
        self.rows: Dict[int, Dict[int, Fraction]] = {}
        self.lower: Dict[int, DRat] = {}
        self.upper: Dict[int, DRat] = {}
        self.value: Dict[int, DRat] = {i: DZERO for i in range(n_original)}
        # nonbasic -> set of basic rows where it occurs (column index)
        self.cols: Dict[int, set] = {i: set() for i in range(n_original)}

    def add_row(self, coeffs: Dict[int, Fraction]) -> int:
        """Introduce a slack variable equal to the given combination."""
        s = len(self.value)
        row: Dict[int, Fraction] = {}
        for v, c in coeffs.items():
            if v in self.rows:
                for w, cw in self.rows[v].items():
                    nv = row.get(w, ZERO) + c * cw
                    if nv:
                        row[w] = nv
                    else:
                        row.pop(w, None)
            else:
                nv = row.get(v, ZERO) + c
                if nv:
                    row[v] = nv
                else:
                    row.pop(v, None)
        self.rows[s] = row
        for w in row:
            self.cols[w].add(s)
        val = DZERO
        for w, c in row.items():
            val = _add(val, _scale(c, self.value[w]))
        self.value[s] = val
        return s

    def tighten(self, v: int, lo: Optional[DRat], hi: Optional[DRat]) -> bool:
        if lo is not None:
            cur = self.lower.get(v)
            if cur is None or lo > cur:
                self.lower[v] = lo
        if hi is not None:
            cur = self.upper.get(v)
            if cur is None or hi < cur:
                self.upper[v] = hi
        l, u = self.lower.get(v), self.upper.get(v)
        if l is not None and u is not None and l > u:
            return False
        if v not in self.rows:
            val = self.value[v]
            if l is not None and val < l:
                self._update(v, l)
            elif u is not None and val > u:
                self._update(v, u)
        return True

    def _update(self, v: int, new: DRat) -> None:
        diff = (new[0] - self.value[v][0], new[1] - self.value[v][1])
        for b in self.cols[v]:
            c = self.rows[b][v]
            self.value[b] = _add(self.value[b], _scale(c, diff))
        self.value[v] = new

    def _pivot(self, b: int, nb: int) -> None:
        row = self.rows.pop(b)
        a = row.pop(nb)
        for w in row:
            self.cols[w].discard(b)
        self.cols[nb].discard(b)
        # nb = (b - sum(row)) / a
        inv = 1 / a
        new_row = {w: -c * inv for w, c in row.items()}
        new_row[b] = inv
        self.cols.setdefault(b, set())
        for other in list(self.cols[nb]):
            orow = self.rows[other]
            k = orow.pop(nb)
            for w, c in new_row.items():
                nv = orow.get(w, ZERO) + k * c
                if nv:
                    if w not in orow:
                        self.cols[w].add(other)
                    orow[w] = nv
                else:
                    if w in orow:
                        del orow[w]
                        self.cols[w].discard(other)
        self.cols[nb] = set()
        self.rows[nb] = new_row
        for w in new_row:
            self.cols[w].add(nb)

    def _pivot_and_update(self, b: int, nb: int, target: DRat) -> None:
        a = self.rows[b][nb]
        theta = ((target[0] - self.value[b][0]) / a, (target[1] - self.value[b][1]) / a)
        self.value[b] = target
        self.value[nb] = _add(self.value[nb], theta)
        for other in self.cols[nb]:
            if other != b:
                self.value[other] = _add(self.value[other], _scale(self.rows[other][nb], theta))
        self._pivot(b, nb)

    def check(self) -> bool:
        while True:
            bad = None
            for b in sorted(self.rows):
                val = self.value[b]
                l = self.lower.get(b)
                if l is not None and val < l:
                    bad = (b, l, True)
                    break
                u = self.upper.get(b)
                if u is not None and val > u:
                    bad = (b, u, False)
                    break
            if bad is None:
                return True
            b, target, raise_it = bad
            chosen = None
            for nb in sorted(self.rows[b]):
                a = self.rows[b][nb]
                val = self.value[nb]
                if (a > 0) == raise_it:
                    u = self.upper.get(nb)
                    ok = u is None or val < u
                else:
                    l = self.lower.get(nb)
                    ok = l is None or val > l
                if ok:
                    chosen = nb
                    break
            if chosen is None:
                return False
            self._pivot_and_update(b, chosen, target)

    def concrete_delta(self) -> Fraction:
        delta = Fraction(1)
        for v, val in self.value.items():
            l = self.lower.get(v)
            if l is not None and l[0] < val[0] and l[1] > val[1]:
                delta = min(delta, (val[0] - l[0]) / (l[1] - val[1]))
            u = self.upper.get(v)
            if u is not None and val[0] < u[0] and val[1] > u[1]:
                delta = min(delta, (u[0] - val[0]) / (val[1] - u[1]))
        return delta


def solve(atoms: Sequence) -> Optional[Dict[str, Fraction]]:
    """Decide a conjunction of canonical atoms; return a model or None."""
    names = sorted({v for a in atoms for v, _ in a.term.coeffs})
    index = {v: i for i, v in enumerate(names)}
    tab = Tableau(len(names))
    slack_of: Dict[tuple, int] = {}
    for a in atoms:
        lin, sign = a.direction()
        if len(lin) == 1:
            var = index[lin[0][0]]
        else:
            var = slack_of.get(lin)
            if var is None:
                var = tab.add_row({index[v]: c for v, c in lin})
                slack_of[lin] = var
        bound = -a.term.const * sign
        if a.rel == "=":
            ok = tab.tighten(var, (bound, ZERO), (bound, ZERO))
        elif sign > 0:
            hi = (bound, Fraction(-1)) if a.rel == "<" else (bound, ZERO)
            ok = tab.tighten(var, None, hi)
        else:
            lo = (bound, Fraction(1)) if a.rel == "<" else (bound, ZERO)
            ok = tab.tighten(var, lo, None)
        if not ok:
            return None
    if not tab.check():
        return None
    d = tab.concrete_delta()
    return {v: tab.value[i][0] + d * tab.value[i][1] for v, i in index.items()}
