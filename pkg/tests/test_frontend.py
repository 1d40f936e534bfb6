from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from timedtar import models
from timedtar.frontend import (ModelError, cfa_to_dot, format_witness, parse_guard, parse_model,
                               parse_witness, print_model)
from timedtar.ita import to_dot
from timedtar.model import DISCRETE, STOPWATCH, RateSpec
from timedtar.tar import check_emptiness

pydot = pytest.importorskip("pydot")


def test_p1_document():
    p = models.p1()
    assert p.cfa.initial == "iota" and p.cfa.accepting == {"l2"}
    assert p.var_map["y"].kind == STOPWATCH
    assert p.location_rate_map("l1")["y"] == RateSpec.exact(Fraction(0))
    assert len(p.cfa.edge("t2").instruction.guard.clauses) == 2


def test_p2_document():
    p = models.p2()
    assert p.var_map["i"].kind == DISCRETE
    upd = p.cfa.edge("t1").instruction.update_map
    assert set(upd) == {"x", "i"} and upd["i"].coef("i") == 1 and upd["i"].const == 1


@pytest.mark.parametrize("name", ["p1", "p2", "p1_tight", "fischer2", "fischer2_fixed", "m3_like"])
def test_round_trip(name):
    p = parse_model(models.document(name))
    text = print_model(p)
    assert parse_model(text) == p
    assert print_model(parse_model(text)) == text


def test_rationals_printed_as_fractions():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\ninitial a\naccepting b\n"
                    "edge g : a -> b when 2*x <= 3\n")
    assert "3/2" in print_model(p)


def test_disjunctive_guard_survives():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\ninitial a\naccepting b\n"
                    "edge g : a -> b when (x < 1 or x > 2) and x < 5\n")
    text = print_model(p)
    assert " or " in text
    assert parse_model(text) == p


def test_bad_operator_column():
    src = "rtp 1\nclock x\nlocation a\nlocation b\ninitial a\naccepting b\nedge g : a -> b when x === 1\n"
    with pytest.raises(ModelError) as exc:
        parse_model(src)
    d = exc.value.diagnostics[0]
    assert d.line == 7 and d.column == src.splitlines()[6].index("===") + 3


def test_batched_diagnostics():
    src = "rtp 1\nclock x\nlocation a\nlocation a\ninitial b\nedge g : a -> c when q > 1\n"
    with pytest.raises(ModelError) as exc:
        parse_model(src)
    assert len(exc.value.diagnostics) >= 2
    assert exc.value.diagnostics == sorted(exc.value.diagnostics, key=lambda d: (d.line, d.column))


def test_decimals_rejected():
    with pytest.raises(ModelError, match="decimal|exact"):
        parse_guard("x <= 0.5")


def test_witness_format_round_trip():
    from timedtar.encode import TimedWord
    tw = TimedWord((("go", Fraction(3, 2)), ("back", Fraction(0))), (("x", Fraction(0)),))
    text = format_witness(tw)
    assert text == "@x 0/1\ngo 3/2\nback 0/1\n"
    assert parse_witness(text) == tw
    assert format_witness(parse_witness(text)) == text


def test_bad_witness():
    with pytest.raises(ModelError):
        parse_witness("go 0.5\n")


@given(st.binary(max_size=300))
def test_parser_never_crashes_on_bytes(data):
    try:
        parse_model(data)
    except ModelError as exc:
        assert exc.diagnostics


_WORDS = ["rtp 1", "clock x", "param a", "location l", "location m rate x = 0", "initial l",
          "accepting m", "edge e : l -> m", "when", "x", ">=", "1", "and", "or", "(", ")", "do",
          ":=", ";", "\n", "#", "-", "1/0", "rate", "in", "[", "]", ","]


@given(st.lists(st.sampled_from(_WORDS), max_size=40))
def test_parser_never_crashes_on_token_soup(words):
    try:
        parse_model(" ".join(words))
    except ModelError as exc:
        assert exc.diagnostics


def _valid_dot(text):
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    return graphs[0]


@pytest.mark.parametrize("name", ["p1", "p2", "fischer2"])
def test_model_dot_parses(name):
    p = parse_model(models.document(name))
    g = _valid_dot(cfa_to_dot(p))
    assert len(g.get_edges()) == len(p.cfa.edges) + 1


def test_proof_dot_parses():
    v = check_emptiness(models.p1())
    g = _valid_dot(to_dot(v.proof))
    labels = {n.get_label() for n in g.get_nodes()}
    assert '"x - y - z <= 0"' in labels
