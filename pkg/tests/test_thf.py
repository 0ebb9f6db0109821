from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import problem_path
from ncpo.sampling import random_problem
from ncpo.simple_types import Arrow, Base
from ncpo.terms import App, Fun, Lam
from ncpo.thf import (
    InvalidRules,
    THFError,
    format_problem,
    infer_arities,
    load_problem,
    parse_problem,
    parse_type,
    validate_rules,
)

HEADER = """
thf(a_type, type, a: $tType).
thf(c_decl, type, c: a).
thf(f_decl, type, f: a > a).
thf(g_decl, type, g: a > a > a).
"""


def load_text(text: str):
    return validate_rules(infer_arities(parse_problem(HEADER + text)))


def test_arities_follow_minimal_use(problems):
    sig = problems["ex2_diff"].signature
    assert {n: d.arity for n, d in sig.items()} == {"sin": 1, "cos": 1, "diff": 1, "plus": 2, "times": 2}
    ex4 = problems["ex4_mapinc"].signature
    assert ex4["map"].arity == 2 and ex4["nil"].arity == 0


def test_partial_use_lowers_arity():
    p = load_text("thf(r, axiom, ![X: a]: ((g @ X @ c) = (f @ X))).\nthf(s, axiom, (f = f)).")
    assert p.signature["f"].arity == 0
    rhs = p.rules[0].rhs
    assert isinstance(rhs, App) and isinstance(rhs.fun, Fun) and rhs.fun.args == ()


def test_lambda_and_types_parse(problems):
    rule = problems["ex3_nnf"].rules[3]
    assert rule.name == "not_forall"
    exists_arg = rule.rhs.args[0]
    assert isinstance(exists_arg, Lam) and exists_arg.var_type == Base("t")


def test_parse_type_is_right_associative():
    assert parse_type("(a > a) > a > a", ["a"]) == Arrow(Arrow(Base("a"), Base("a")), Arrow(Base("a"), Base("a")))
    with pytest.raises(THFError):
        parse_type("a > q", ["a"])


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("thf(r, axiom, ![X: a]: ((h @ X) = X)).", "unknown"),
        ("thf(r, axiom, ((f @ Y) = c)).", "Y"),
        ("thf(r, axiom, ![X: a]: ((f @ X) = f)).", "type"),
        ("thf(r, axiom, ![X: a]: ((f @ X) != X)).", "equation"),
        ("thf(r, conjecture, (c = c)).", "role"),
        ("thf(r, axiom, (c = c)).\nthf(r, axiom, (c = c)).", "duplicate"),
        ("thf(r, axiom, ![X: a]: (f @ X)).", "equality"),
    ],
)
def test_parse_errors_are_reported(text, fragment):
    with pytest.raises(THFError) as info:
        parse_problem(HEADER + text)
    assert fragment in str(info.value)


def test_parse_error_carries_position():
    with pytest.raises(THFError) as info:
        parse_problem(HEADER + "thf(r, axiom, ((f @ Y) = c)).")
    assert info.value.line is not None


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("thf(r, axiom, ![X: a > a]: ((X @ c) = c)).", "variable"),
        ("thf(r, axiom, ![X: a, Y: a]: ((f @ X) = Y)).", "do not occur"),
        ("thf(r, axiom, ![X: a]: ((f @ X) = ((^[Y: a]: (f @ Y)) @ X))).", "not βη-normal"),
    ],
)
def test_invalid_rules_are_rejected(text, fragment):
    with pytest.raises(InvalidRules) as info:
        load_text(text)
    assert fragment in str(info.value)


def test_non_normal_report_names_normal_form():
    with pytest.raises(InvalidRules) as info:
        load_text("thf(r, axiom, ![X: a]: ((f @ X) = ((^[Y: a]: (f @ Y)) @ X))).")
    assert "normal form f(X)" in str(info.value)


def test_every_shipped_problem_loads():
    for name in ("ex1_etalong", "ex2_diff", "ex3_nnf", "ex4_mapinc", "selfembed"):
        p = load_problem(problem_path(name))
        assert p.arity_fixed and p.rules


@given(st.integers(0, 10**6))
def test_printing_round_trips(seed):
    p = random_problem(random.Random(seed))
    text = format_problem(p)
    again = validate_rules(infer_arities(parse_problem(text, "<again>")))
    fixed = infer_arities(p)
    assert [(r.lhs, r.rhs) for r in again.rules] == [(r.lhs, r.rhs) for r in fixed.rules]
    assert again.signature == fixed.signature
