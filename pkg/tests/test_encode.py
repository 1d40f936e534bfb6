from fractions import Fraction

import pytest

from helpers import clausal, conj
from timedtar import models
from timedtar.encode import (Feasible, Infeasible, PathError, ReplayError, TimedWord, delay_var,
                             encode_step, encode_word, feasible, post, replay)
from timedtar.frontend import parse_model
from timedtar.lra import TOP, LinTerm, atom, EQ, ConjunctiveSet, eliminate, equivalent, is_sat


def step_relation(p, edge, keep):
    (c,) = encode_step(p, edge, 0)
    return eliminate(c, [v for v in c.vars if v not in keep])


def test_init_edge_of_p1():
    p = models.p1()
    (c,) = encode_step(p, "i", 0)
    d = delay_var(0)
    r = eliminate(c, [v for v in c.vars if v not in ("x@1", "y@1", "z@1", d)])
    expect = conj(f"x@1 == y@1 and y@1 == z@1 and z@1 >= 0".replace("@", "__")).rename(
        {"x__1": "x@1", "y__1": "y@1", "z__1": "z@1"})
    assert equivalent(eliminate(r, [d]), expect)


def test_identity_instruction():
    p = parse_model("rtp 1\nstopwatch x\ndiscrete n\nlocation a rate x = 0\ninitial a\naccepting a\n"
                    "edge s : a -> a\n")
    r = step_relation(p, "s", {"x@0", "x@1", "n@0", "n@1"})
    assert equivalent(r, conj("x1 == x0 and n1 == n0").rename(
        {"x1": "x@1", "x0": "x@0", "n1": "n@1", "n0": "n@0"}))


def test_stopwatch_frozen_in_l1():
    p = models.p1()
    r = step_relation(p, "t1", {"y@0", "y@1"})
    assert equivalent(r, conj("y1 == y0").rename({"y1": "y@1", "y0": "y@0"}))


def test_p1_first_word_is_unsat():
    assert is_sat(encode_word(["i", "t0", "t2"], models.p1()).conjunction()) is None


def test_p2_first_word_is_unsat():
    assert is_sat(encode_word(["init", "t0", "t2"], models.p2()).conjunction()) is None


def test_empty_word():
    enc = encode_word([], models.p1())
    assert enc.conjunction() == TOP


def test_non_path_names_the_pair():
    with pytest.raises(PathError, match="t2"):
        encode_word(["i", "t2"], models.p1())


def test_infeasible_and_feasible():
    assert isinstance(feasible(["i", "t0", "t2"], models.p1()), Infeasible)
    p = parse_model(models.reachable_text())
    res = feasible(["go"], p)
    assert isinstance(res, Feasible)


def test_delay_needed():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\nlocation c\ninitial a\naccepting c\n"
                    "edge r : a -> b do x := 0\nedge g : b -> c when x >= 1\n")
    res = feasible(["r", "g"], p)
    assert isinstance(res, Feasible)
    assert res.witness.steps[0][1] >= 1
    replay(p, res.witness)


def test_replay_reports_guard():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\nlocation c\ninitial a\naccepting c\n"
                    "edge r : a -> b do x := 0\nedge g : b -> c when x >= 1\n")
    bad = TimedWord((("r", Fraction(1, 2)), ("g", Fraction(0))), (("x", Fraction(0)),))
    with pytest.raises(ReplayError, match="step 1"):
        replay(p, bad)


def test_replay_needs_accepting_end():
    p = parse_model(models.reachable_text())
    with pytest.raises(ReplayError):
        replay(p, TimedWord(()))


def test_interval_rates_witness_replays():
    p = parse_model("rtp 1\ncontinuous v\nclock x\nlocation a\nlocation b rate v in [1, 2]\n"
                    "location c\ninitial a\naccepting c\n"
                    "edge r : a -> b do x := 0; v := 0\nedge g : b -> c when v >= 3 and x <= 2\n")
    res = feasible(["r", "g"], p)
    assert isinstance(res, Feasible)
    replay(p, res.witness)
    assert isinstance(feasible(["r", "g"], parse_model(
        "rtp 1\ncontinuous v\nclock x\nlocation a\nlocation b rate v in [1, 2]\n"
        "location c\ninitial a\naccepting c\n"
        "edge r : a -> b do x := 0; v := 0\nedge g : b -> c when v >= 5 and x <= 2\n")), Infeasible)


def test_clausal_guard_feasibility():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\nlocation c\ninitial a\naccepting c\n"
                    "edge r : a -> b do x := 0\nedge g : b -> c when x < 0 or x == 2\n")
    res = feasible(["r", "g"], p)
    assert isinstance(res, Feasible) and res.witness.steps[0][1] == 2


def test_post():
    p = models.p1()
    got = post(TOP, ["i", "t0"], p)
    assert equivalent(got, conj("x - y == z and z >= 0 and x - z >= 0"))
    with pytest.raises(PathError):
        post(TOP, ["i", "t2", "t0"], p)
