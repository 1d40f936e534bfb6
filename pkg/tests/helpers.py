"""Small constructors used across the test modules."""
from fractions import Fraction

from timedtar.frontend import parse_guard
from timedtar.lra import BOT, ClausalSet, ConjunctiveSet


def conj(text: str) -> ConjunctiveSet:
    """Conjunction written in guard syntax, e.g. ``"x <= 1 and y > 0"``."""
    g = parse_guard(text)
    if g.is_bot:
        return BOT
    assert g.is_conjunctive, text
    return ConjunctiveSet(a for cl in g.clauses for a in cl)


def clausal(text: str) -> ClausalSet:
    return parse_guard(text)


def q(s) -> Fraction:
    return Fraction(s)
