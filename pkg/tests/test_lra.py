from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import clausal, conj
from timedtar.lra import (BOT, CBOT, CTOP, EQ, LE, LT, TOP, ClausalSet, ConjunctiveSet, LinTerm,
                          as_rational, atom, clausal_entails, clausal_equivalent, counterexample,
                          dnf_split, eliminate, entails, equivalent, format_rational, is_sat,
                          negate, project, remove_redundant)
from timedtar.oracle import fm_sat

x, y, z = LinTerm.var("x"), LinTerm.var("y"), LinTerm.var("z")


class TestTerms:
    def test_arithmetic_is_exact(self):
        t = x.scale(Fraction(1, 3)) + x.scale(Fraction(2, 3)) - y + LinTerm.constant(Fraction(1, 2))
        assert t.coef("x") == 1 and t.coef("y") == -1 and t.const == Fraction(1, 2)

    def test_cancelled_variables_disappear(self):
        assert (x - x).coeffs == () and (x - x).vars == set()

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_substitute_and_evaluate(self):
        t = (x + y.scale(Fraction(2))).substitute({"y": z + LinTerm.constant(1)})
        assert t.evaluate({"x": Fraction(1), "z": Fraction(3)}) == 9

    def test_format_rational(self):
        assert format_rational(Fraction(3, 2)) == "3/2"
        assert format_rational(Fraction(-4)) == "-4"


class TestAtoms:
    def test_ground_atoms_fold(self):
        assert atom(LinTerm.constant(-1), LT) is True
        assert atom(LinTerm.constant(0), LT) is False

    def test_canonical_leading_coefficient(self):
        a = atom(x.scale(Fraction(3)) - y.scale(Fraction(6)) + LinTerm.constant(3), LE)
        b = atom(x - y.scale(Fraction(2)) + LinTerm.constant(1), LE)
        assert a == b

    def test_tightest_bound_kept(self):
        c = conj("x <= 3 and x <= 1 and x < 1")
        assert c == conj("x < 1")

    def test_opposite_bounds_become_equality(self):
        c = conj("x <= 2 and x >= 2")
        assert len(c.atoms) == 1 and c.atoms[0].rel == EQ

    def test_conflicting_bounds_are_bot(self):
        assert conj("x < 2 and x >= 2").is_bot


class TestSat:
    def test_interval_emptiness(self):
        assert is_sat(conj("x - 1 >= 0 and 0 - x >= 0")) is None

    def test_top_is_sat_with_zero_valuation(self):
        assert is_sat(TOP) == {}

    def test_strict_model(self):
        c = conj("x > 0 and x < 1 and y > x")
        m = is_sat(c)
        assert m is not None and c.holds(m)
        assert all(isinstance(v, Fraction) for v in m.values())

    def test_equalities(self):
        m = is_sat(conj("x + y == 3 and x - y == 1"))
        assert m == {"x": 2, "y": 1}


class TestEntailment:
    def test_weakening(self):
        assert entails(conj("x <= 0"), conj("x <= 1"))

    def test_counterexample(self):
        assert not entails(conj("x <= 1"), conj("x <= 0"))
        m = counterexample(conj("x <= 1"), conj("x <= 0"))
        assert m is not None and m["x"] <= 1 and m["x"] > 0

    def test_ex_falso(self):
        assert entails(BOT, conj("x <= 0 and y == 7"))

    def test_equivalence(self):
        assert equivalent(conj("x <= y and y <= x"), conj("x - y == 0"))


class TestNegation:
    def test_single(self):
        assert set(negate(conj("x <= 1"))) == {atom(LinTerm.constant(1) - x, LT)}

    def test_de_morgan(self):
        cl = negate(conj("x <= 1 and y < 2"))
        assert ClausalSet([cl]) == clausal("x > 1 or y >= 2")

    def test_equality_splits(self):
        assert ClausalSet([negate(conj("x == 0"))]) == clausal("x < 0 or x > 0")

    def test_negating_top_and_bot(self):
        with pytest.raises(ValueError):
            negate(TOP)
        with pytest.raises(ValueError):
            negate(BOT)


class TestDnf:
    def test_top(self):
        assert dnf_split(CTOP) == [TOP]

    def test_single_clause(self):
        assert set(dnf_split(clausal("x > 1 or y >= 2"))) == {conj("x > 1"), conj("y >= 2")}

    def test_unsat_branch_pruned(self):
        assert dnf_split(clausal("(x > 1 or y >= 2) and x <= 0")) == [conj("y >= 2 and x <= 0")]

    def test_bot(self):
        assert dnf_split(CBOT) == []

    def test_clausal_entailment(self):
        assert clausal_entails(clausal("x < 0"), clausal("x < 0 or y < 0"))
        assert not clausal_entails(clausal("x < 0 or y < 0"), clausal("x < 0"))
        assert clausal_equivalent(clausal("(x < 0 or y < 0) and x < 0"), clausal("x < 0"))


class TestElimination:
    def test_unused_variable(self):
        assert eliminate(conj("x <= y"), ["z"]) == conj("x <= y")

    def test_equality_substitution(self):
        d = LinTerm.var("d")
        c = ConjunctiveSet([atom(-d, LE), atom(x - d, EQ), atom(LinTerm.constant(1) - x, LE)])
        assert eliminate(c, ["d"]) == conj("x >= 1")

    def test_chain(self):
        assert equivalent(eliminate(conj("x < y and y <= z"), ["y"]), conj("x < z"))

    def test_empty_projection(self):
        assert eliminate(conj("x < y and y < x"), ["y"]).is_bot

    def test_project_keeps(self):
        assert project(conj("x <= y and y <= 1 and z == y"), ["x"]) == conj("x <= 1")

    def test_remove_redundant(self):
        c = ConjunctiveSet([atom(x - y, LE), atom(y - z, LE), atom(x - z, LE)])
        assert equivalent(remove_redundant(c), c) and len(remove_redundant(c).atoms) == 2


# -- properties -------------------------------------------------------------

names = st.sampled_from(["u", "v", "w"])
coef = st.integers(-3, 3)


@st.composite
def atoms(draw):
    t = LinTerm.constant(draw(st.integers(-4, 4)))
    for v in draw(st.lists(names, min_size=1, max_size=3, unique=True)):
        t = t + LinTerm.var(v).scale(Fraction(draw(coef) or 1))
    return atom(t, draw(st.sampled_from([LT, LE, EQ])))


@st.composite
def conjunctions(draw):
    xs = [a for a in draw(st.lists(atoms(), min_size=1, max_size=5)) if a is not True]
    return BOT if False in xs else ConjunctiveSet(xs)


@given(conjunctions())
def test_sat_matches_plain_fourier_motzkin(c):
    if c.is_bot:
        return
    assert (is_sat(c) is not None) == fm_sat(list(c.atoms))


@given(conjunctions())
def test_models_satisfy(c):
    m = is_sat(c)
    if m is not None:
        assert c.holds({**{v: Fraction(0) for v in c.vars}, **m})


@given(conjunctions(), st.lists(names, unique=True))
def test_projection_sound_and_complete(c, gone):
    r = eliminate(c, gone)
    assert not (r.vars & set(gone))
    assert entails(c, r)
    m = is_sat(r)
    assert (m is not None) == (is_sat(c) is not None)
    if m is not None:
        pinned = c.substitute({v: LinTerm.constant(m.get(v, Fraction(0))) for v in r.vars})
        assert is_sat(pinned) is not None


@given(conjunctions(), conjunctions())
def test_entailment_agrees_with_counterexample(a, b):
    ce = counterexample(a, b)
    assert entails(a, b) == (ce is None)
    if ce is not None:
        full = {v: ce.get(v, Fraction(0)) for v in a.vars | b.vars}
        assert a.holds(full) and not b.holds(full)


@given(conjunctions())
def test_negation_is_complement(c):
    m = is_sat(c)
    if m is not None:
        full = {v: m.get(v, Fraction(0)) for v in c.vars}
        assert not any(a.holds(full) for a in negate(c))
