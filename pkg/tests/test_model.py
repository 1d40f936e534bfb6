from fractions import Fraction

import pytest

from helpers import clausal, conj
from timedtar import models
from timedtar.lra import CTOP, LinTerm, clausal_equivalent
from timedtar.model import (CLOCK, PARAMETER, STOPWATCH, Edge, Instruction, InvalidProgram,
                            RateSpec, RealTimeProgram, VarDecl, assume_prefix, enlarge_guards,
                            ensure_valid, split_clausal, validate)


def tiny(guard=CTOP, update=None, decls=None):
    decls = decls or [VarDecl("x", CLOCK), VarDecl("a", PARAMETER)]
    e = Edge("go", "l0", "l1", Instruction.make(guard=guard, update=update or {}))
    return RealTimeProgram.make(decls, ["l0", "l1"], "l0", [e], ["l1"])


def test_p1_is_valid():
    assert validate(models.p1()) == []


def test_update_to_parameter_is_reported():
    diags = validate(tiny(update={"a": LinTerm.constant(1)}))
    assert len(diags) == 1 and "go" in str(diags[0])


def test_undeclared_guard_variable_is_reported():
    diags = validate(tiny(guard=clausal("q >= 1")))
    assert len(diags) == 1 and "q" in str(diags[0])


def test_ensure_valid_raises():
    with pytest.raises(InvalidProgram):
        ensure_valid(tiny(update={"a": LinTerm.constant(1)}))


def test_rates():
    p = models.p1()
    assert p.rates_of(p.cfa.edge("t1"))["y"] == RateSpec.exact(Fraction(0))
    assert p.rates_of(p.cfa.edge("t1"))["x"] == RateSpec.exact(Fraction(1))
    assert p.var_map["y"].kind == STOPWATCH


def test_cfa_paths():
    cfa = models.p1().cfa
    assert cfa.accepts(["i", "t0", "t2"])
    assert not cfa.accepts(["i", "t0"])
    assert cfa.path_error(["i", "t2"]) is not None


def test_enlarge_equality():
    p = enlarge_guards(models.p1(), "eps")
    assert clausal_equivalent(p.cfa.edge("t1").instruction.guard,
                              clausal("x >= 1 - eps and x <= 1 + eps"))


def test_enlarge_true_and_difference():
    p = enlarge_guards(models.p1(), "eps")
    assert p.cfa.edge("i").instruction.guard.is_top
    assert clausal_equivalent(p.cfa.edge("t2").instruction.guard,
                              clausal("x - y >= 1 - eps and z < 1 + eps"))
    assert p.var_map["eps"].kind == PARAMETER


def test_enlarge_leaves_discrete_atoms_alone():
    p = enlarge_guards(models.p2(), "eps")
    assert clausal_equivalent(p.cfa.edge("t2").instruction.guard, clausal("y < i + eps"))


def test_assume_prefix_is_frozen():
    p = assume_prefix(models.p1(), clausal("x <= 3"), edge_id="as", location="st")
    e = p.cfa.edge("as")
    assert p.cfa.initial == "st" and e.target == "iota" and e.instruction.frozen
    assert all(r == RateSpec.exact(Fraction(0)) for r in p.rates_of(e).values())


def test_split_clausal_branches():
    p = tiny(guard=clausal("x < 1 or x > 2"))
    sp = split_clausal(p)
    letters = sorted(e.id for e in sp.program.cfa.edges)
    assert len(letters) == 2 and {sp.original(l) for l in letters} == {"go"}
    assert all(e.instruction.guard.is_conjunctive for e in sp.program.cfa.edges)


def test_split_drops_false_guards():
    assert split_clausal(tiny(guard=clausal("false"))).program.cfa.edges == ()
