from timedtar import models
from timedtar.encode import encode_word
from timedtar.frontend import parse_model
from timedtar.interp import interpolate
from timedtar.ita import HoareCache, PredicateAutomaton, build_ita, extended_union
from timedtar.lang import accepts, next_candidate


def test_first_candidate_is_shortest():
    assert next_candidate(models.p1().cfa, PredicateAutomaton.empty()) == ["i", "t0", "t2"]


def test_p2_two_automata_cover_everything():
    p = models.p2()
    cache = HoareCache(p)
    r = PredicateAutomaton.empty()
    for w in (["init", "t0", "t2"], ["init", "t0", "t1", "t0", "t2"]):
        r = extended_union(r, build_ita(w, interpolate(encode_word(w, p), p), cache), cache)
    assert next_candidate(p.cfa, r) is None


def test_no_accepting_path():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\nlocation c\ninitial a\naccepting c\n"
                    "edge go : a -> b\nedge back : b -> a\n")
    assert next_candidate(p.cfa, PredicateAutomaton.empty()) is None


def test_ties_break_by_edge_id():
    p = parse_model("rtp 1\nclock x\nlocation a\nlocation b\ninitial a\naccepting b\n"
                    "edge zz : a -> b\nedge aa : a -> b\n")
    assert next_candidate(p.cfa, PredicateAutomaton.empty()) == ["aa"]


def test_max_len():
    assert next_candidate(models.p1().cfa, PredicateAutomaton.empty(), max_len=2) is None


def test_accepts_helper():
    assert accepts(models.p1().cfa, ["i", "t0", "t2"])
