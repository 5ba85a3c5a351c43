"""Exact nested-sum arithmetic, recurrence solving and eps-expansions."""

import json as _json

from ._core import (
    ParseError,
    canonicalize,
    equal,
    eval_expr,
    eval_range,
    guess_recurrence,
    quasi_shuffle,
    render,
    solve_rec,
)
from ._core import run_problem_text as _run_problem_text

__all__ = [
    "ParseError",
    "canonicalize",
    "equal",
    "eval_expr",
    "eval_range",
    "guess_recurrence",
    "quasi_shuffle",
    "render",
    "run_problem",
    "solve_rec",
]


def run_problem(command, problem, *, verify=None, max_order=None, orders=None, mu=None, format=None):
    """Run a problem (a dict or JSON text) and return (envelope dict, exit code)."""
    text = problem if isinstance(problem, str) else _json.dumps(problem)
    envelope, code = _run_problem_text(command, text, verify, max_order, orders, mu, format)
    return _json.loads(envelope), code
