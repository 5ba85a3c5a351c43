import pytest

import epschain


def test_eval_and_render():
    assert epschain.eval_expr("S[1](n)", 3) == "11/6"
    assert epschain.eval_range("2^n/(n+1)", 0, 2) == ["1", "1", "4/3"]
    assert epschain.render("S[2,1](n)") == "S[2,1](n)"
    assert "\\" in epschain.render("S[1](n)/(n+1)", "latex")
    assert epschain.equal("S[1](n)^2", "2*S[1,1](n) - S[2](n)")


def test_parse_error():
    with pytest.raises(ValueError):
        epschain.eval_expr("S[1](n", 1)


def test_guess_and_solve():
    h, seq = 0, []
    from fractions import Fraction

    for n in range(1, 41):
        h += Fraction(1, n)
        seq.append(str(h))
    coeffs = epschain.guess_recurrence(seq, 2, 1, 1)
    assert coeffs is not None and len(coeffs) == 3
    assert epschain.solve_rec(["n+1", "-(2n+3)", "n+2"], [1, "3/2"], 1) == "S[1](n)"
    assert epschain.solve_rec(["-1", "-1", "1"], [0, 1], 0) is None


def test_quasi_shuffle():
    terms = dict((tuple(i), c) for i, c in epschain.quasi_shuffle([1], [1]))
    assert terms == {(1, 1): "2", (2,): "-1"}


def test_run_problem():
    problem = {
        "epsrec": {
            "coeffs": ["-(n+1)", "n+1+eps"],
            "orders": [-1, 1],
            "initial": {"-1": {"0": "1"}, "0": {"0": "0"}, "1": {"0": "0"}},
        }
    }
    env, code = epschain.run_problem("eps-expand", problem, format="text")
    assert code == 0 and env["status"] == "ok"
    assert env["payload"]["orders"]["0"]["expr"] == "-S[1](n)"
    env, code = epschain.run_problem("eps-expand", "{ not json")
    assert code == 1 and env["error"]["kind"] == "parse"
