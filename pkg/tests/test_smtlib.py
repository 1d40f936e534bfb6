import shutil
import sys
import textwrap
from fractions import Fraction

import pytest

from helpers import conj
from timedtar import models
from timedtar.smtlib import SmtLibSolver, SolverError, cross_checker, parse_sexprs, to_smtlib
from timedtar.tar import Empty, check_emptiness


def test_query_text():
    text = to_smtlib(conj("x - 1/2*y < 3").rename({"x": "x@1"}))
    assert "(declare-fun |x@1| () Real)" in text
    assert "(/ 1.0 2.0)" in text and "(check-sat)" in text


def test_sexpr_parser():
    out = parse_sexprs("sat\n(model (define-fun |x@1| () Real (/ 1.0 2.0)) (define-fun y () Real (- 3.0)))")
    assert out[0] == "sat"
    assert out[1][1] == ["define-fun", "x@1", [], "Real", ["/", "1.0", "2.0"]]


def test_unbalanced():
    with pytest.raises(SolverError):
        parse_sexprs("(sat")


FAKE = textwrap.dedent("""
    import sys
    q = sys.stdin.read()
    if "{bad}" in q:
        print("unsat")
    else:
        print("sat")
        print("(model (define-fun |x| () Real (/ 1.0 2.0)))")
""")


def fake_solver(tmp_path, bad="never-matches"):
    f = tmp_path / "fake.py"
    f.write_text(FAKE.format(bad=bad))
    return SmtLibSolver(f"{sys.executable} {f}")


def test_fake_solver_answers(tmp_path):
    sat, model = fake_solver(tmp_path).check(conj("x > 0"))
    assert sat and model == {"x": Fraction(1, 2)}


def test_disagreement_is_reported(tmp_path):
    check = cross_checker(fake_solver(tmp_path))
    with pytest.raises(SolverError):
        check(conj("x > 0 and x < 0 - 1"), False)


def test_bad_model_is_reported(tmp_path):
    check = cross_checker(fake_solver(tmp_path))
    with pytest.raises(SolverError):
        check(conj("x > 1"), True)


@pytest.mark.skipif(shutil.which("z3") is None, reason="z3 not installed")
def test_z3_cross_check():
    solver = SmtLibSolver("z3 -in -smt2")
    assert isinstance(check_emptiness(models.p1(), cross_check=cross_checker(solver)), Empty)
    assert solver.check(conj("x > 1/3 and x < 1/2"))[0]
