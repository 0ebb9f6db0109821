from __future__ import annotations

import pytest

from ncpo.params import OrderParams, parse_params
from ncpo.simple_types import Arrow, Base, arrow
from ncpo.structure import (
    VersatileTerm,
    asubt_paths,
    asubt_targets,
    bsubt_candidates,
    bsubt_targets,
    is_nonversatile,
    structsm,
    structsm_witnesses,
    validate_params,
)
from ncpo.terms import App, FreeVar, Fun, lam

a, t_, f_ = Base("a"), Base("t"), Base("f")
aa = Arrow(a, a)


def test_four_nonversatility_verdicts():
    x, y = FreeVar("x", a), FreeVar("y", aa)
    c = Fun("c", aa)
    f_unary = lambda arg: Fun("f", aa, (arg,))
    f_binary = lambda arg: Fun("f", arrow(a, a, a), (arg,))
    assert is_nonversatile(App(c, x))
    assert is_nonversatile(lam(x, f_unary(App(y, x))))
    assert not is_nonversatile(App(y, x))
    assert not is_nonversatile(lam(x, App(f_binary(App(y, x)), x)))


def test_nonversatility_needs_normal_input():
    x = FreeVar("x", a)
    with pytest.raises(ValueError):
        is_nonversatile(App(lam(x, x), x))


def test_lambda_with_applied_argument():
    x, y = FreeVar("x", a), FreeVar("y", aa)
    k = Fun("k", arrow(a, a, a), (x,))  # k(x) : a > a
    # the argument of the body must itself pass the test
    assert not is_nonversatile(lam(x, App(k, App(y, x))))
    assert is_nonversatile(lam(x, App(k, App(Fun("c", aa), x))))
    # a variable-headed body fails outright
    z = FreeVar("z", Arrow(a, aa))
    assert not is_nonversatile(lam(x, App(App(z, FreeVar("w", a)), Fun("h", aa, (x,)))))


def test_basic_subterms_respect_binders_and_flags():
    x, y = FreeVar("x", a), FreeVar("y", a)
    h = Arrow(a, a)
    s = Fun("k", arrow(aa, a, a), (lam(x, Fun("h", h, (x,))), Fun("h", h, (y,))))
    cands = bsubt_candidates(s)
    assert Fun("h", h, (y,)) in cands and y in cands
    assert all(c.loose == 0 for c in cands)
    none = bsubt_targets(s, OrderParams())
    assert none == set()
    some = bsubt_targets(s, parse_params("basic a true"))
    assert y in some
    with pytest.raises(VersatileTerm):
        bsubt_targets(App(FreeVar("F", aa), y), OrderParams())


def test_accessible_paths_collect_guards(problems):
    p = problems["ex3_nnf"]
    R = FreeVar("R", Arrow(t_, f_))
    s = p.symbol("forall", R)
    paths = asubt_paths(s)
    assert (R, (("forall", 1),)) in paths
    params = parse_params("acc forall 1")
    assert asubt_targets(s, params) == {R}
    assert asubt_targets(s, OrderParams()) == set()


def test_structurally_smaller_applies_marked_variables(problems):
    p = problems["ex3_nnf"]
    R = FreeVar("R", Arrow(t_, f_))
    z = FreeVar("_z0", t_)
    s = p.symbol("forall", R)
    params = parse_params("level f 1\nacc forall 1")
    assert structsm(s, App(R, z), frozenset({z}), params)
    assert not structsm(s, App(R, z), frozenset(), params)
    assert not structsm(s, App(R, z), frozenset({z}), OrderParams())
    assert structsm(s, App(R, z), frozenset({z}), params, min_k=1)
    witnesses = structsm_witnesses(s, frozenset({z}))
    assert (App(R, z), (("forall", 1),), 1) in witnesses


def test_example_parameters_are_valid(problems, paper_params):
    for name, params in paper_params.items():
        assert validate_params(problems[name], params) == [], name


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("prec not 1\nprec and 1\nstatus not lex", "status"),
        ("big and false\nprec and 1", "big"),
        ("acc forall 1", "acc"),
        ("level f 1\nbasic f true\nacc forall 1", "basic"),
        ("level f 1\nbasic f true", "basic"),
        ("big forall false\nprec forall -1\nprec exists -1\nprec not -1\nprec and -1\nprec or -1\nlevel f 1", "small"),
        ("prec nope 1", "unknown"),
    ],
)
def test_parameter_violations_are_found(problems, text, fragment):
    problems_found = validate_params(problems["ex3_nnf"], parse_params(text))
    assert any(fragment in msg for msg in problems_found), problems_found
