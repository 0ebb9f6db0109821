from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncpo.engine import Engine, NotNormal, cpo_gt, ncpo_gt, orient_rule
from ncpo.params import OrderParams
from ncpo.replay import ReplayError, replay
from ncpo.sampling import TermSampler, random_problem
from ncpo.simple_types import Arrow, Base, arrow
from ncpo.terms import App, FreeVar, Fun, beta_eta_normalize, lam
from ncpo.trace import ProofTrace
from ncpo.type_order import BaseLevels

from helpers import random_params

a = Base("a")
aa = Arrow(a, a)


def _rules(problems, params, name):
    return {r.name: orient_rule(r, params) for r in problems[name].rules}


@pytest.mark.parametrize("name", ["ex2_diff", "ex3_nnf", "ex4_mapinc"])
def test_examples_orient_with_shipped_params(problems, paper_params, name):
    for rule_name, trace in _rules(problems, paper_params[name], name).items():
        assert trace is not None, rule_name
        assert replay(trace, paper_params[name]) > 0


def test_characteristic_rules(problems, paper_params):
    diff = _rules(problems, paper_params["ex2_diff"], "ex2_diff")
    assert {"Fb≻", "λ⊳η"} <= diff["diff_sin"].rules_used()
    nnf = _rules(problems, paper_params["ex3_nnf"], "ex3_nnf")
    assert "≫" in nnf["not_forall"].rules_used()
    assert "≫" in nnf["not_exists"].rules_used()
    plus = _rules(problems, paper_params["ex4_mapinc"], "ex4_mapinc")
    assert {"@=", "@Fs"} <= plus["plus_succ"].rules_used()


def test_self_embedding_never_orients(problems):
    rule = problems["selfembed"].rules[0]
    for big in (True, False):
        for status in ("mul", "lex"):
            params = OrderParams(BaseLevels({"a": 0}), {"f": 0}, {"f": status}, {"f": big})
            assert orient_rule(rule, params) is None


def test_rejects_non_normal_input():
    x, F = FreeVar("x", a), FreeVar("F", aa)
    redex = App(lam(x, x), x)
    with pytest.raises(NotNormal):
        ncpo_gt(redex, x, params=OrderParams())
    with pytest.raises(NotNormal):
        ncpo_gt(lam(x, App(F, x)), F, params=OrderParams())


def test_plain_mode_orients_beta_and_eta_steps():
    x, F = FreeVar("x", a), FreeVar("F", aa)
    c = Fun("c", a)
    g = Fun("g", arrow(a, a, a))
    params = OrderParams(BaseLevels({"a": 0}))
    beta = cpo_gt(App(lam(x, App(App(g, x), x)), c), App(App(g, c), c), params=params)
    assert beta is not None and "@β" in beta.rules_used()
    replay(beta, params, plain=True)
    eta = cpo_gt(lam(x, App(F, x)), F, params=params)
    assert eta is not None and "λη" in eta.rules_used()
    replay(eta, params, plain=True)


def test_cpo_gt_refuses_normal_engine():
    with pytest.raises(ValueError):
        cpo_gt(Fun("c", a), Fun("c", a), engine=Engine(OrderParams()))


def test_replay_rejects_tampered_trace(problems, paper_params):
    params = paper_params["ex3_nnf"]
    trace = orient_rule(problems["ex3_nnf"].rules[1], params)
    forged = ProofTrace(trace.rule, trace.rhs, trace.lhs, trace.X, trace.rel, trace.children, trace.info)
    with pytest.raises(ReplayError):
        replay(forged, params)


def test_memo_is_session_local(problems, paper_params):
    params = paper_params["ex4_mapinc"]
    engine = Engine(params)
    for rule in problems["ex4_mapinc"].rules:
        orient_rule(rule, params, engine)
    first = engine.stats["judgments"]
    for rule in problems["ex4_mapinc"].rules:
        orient_rule(rule, params, engine)
    assert engine.stats["judgments"] == first
    assert engine.stats["memo_hits"] > 0


def _random_pair(seed: int):
    rng = random.Random(seed)
    problem = random_problem(rng, max_rules=0)
    sampler = TermSampler(rng, problem.signature, "Z")
    pool: list = []
    ty = Base(rng.choice(problem.base_types))
    s = sampler.normal_term(ty, rng.randint(1, 7), pool)
    t = sampler.normal_term(ty, rng.randint(1, 7), pool)
    return rng, problem, s, t, pool


@given(st.integers(0, 10**6))
def test_irreflexive_and_replayable(seed):
    rng, problem, s, t, pool = _random_pair(seed)
    if s is None or t is None:
        return
    params = random_params(rng, problem.signature, problem.base_types)
    engine = Engine(params)
    X = frozenset(v for v in pool if rng.random() < 0.3)
    assert engine.gt(s, s, X) is None
    for left, right in ((s, t), (t, s)):
        found = engine.gt(left, right, X)
        if found is not None:
            replay(found, params)


@given(st.integers(0, 10**6))
def test_asymmetric_on_admissible_random_params(seed):
    rng, problem, s, t, pool = _random_pair(seed)
    if s is None or t is None:
        return
    from ncpo.structure import validate_params

    params = random_params(rng, problem.signature, problem.base_types)
    if validate_params(problem, params):
        return
    engine = Engine(params)
    assert engine.gt(s, t) is None or engine.gt(t, s) is None


@given(st.integers(0, 10**6))
def test_plain_mode_agrees_on_normal_forms_of_redexes(seed):
    # s ⊐ its own beta-eta normal form whenever a beta step is available at the root
    rng = random.Random(seed)
    x = FreeVar("x", a)
    c, h = Fun("c", a), Fun("h", aa)
    body = rng.choice([x, App(h, x), App(h, App(h, x))])
    s = App(lam(x, body), rng.choice([c, App(h, c)]))
    params = OrderParams(BaseLevels({"a": 0}), {"h": 1, "c": 0})
    found = cpo_gt(s, beta_eta_normalize(s), params=params)
    assert found is not None
    replay(found, params, plain=True)
