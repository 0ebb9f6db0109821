from __future__ import annotations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import random

from helpers import random_term
from ncpo.sampling import TermSampler
from ncpo.simple_types import Arrow, Base, arrow
from ncpo.terms import (
    App,
    Bound,
    FreeVar,
    Fun,
    IllTyped,
    Lam,
    ReductCapExceeded,
    abstract,
    beta_eta_normalize,
    enumerate_beta_eta_reducts,
    eta_contract,
    free_vars,
    fresh_var,
    instantiate,
    is_eta_redex,
    is_normal,
    lam,
    one_step_reducts,
    show,
    substitute,
)

a, b = Base("a"), Base("b")
aa = Arrow(a, a)
F = FreeVar("F", aa)
G = FreeVar("G", Arrow(a, aa))
x, y = FreeVar("x", a), FreeVar("y", a)
f = Fun("f", aa, ())
c = Fun("c", a)

seeds = st.integers(0, 10**6)


def test_alpha_equivalent_abstractions_are_equal():
    assert lam(x, App(F, x)) == lam(y, App(F, y))
    assert hash(lam(x, App(F, x))) == hash(lam(y, App(F, y)))
    assert lam(x, App(App(G, x), y)) != lam(y, App(App(G, y), y))


def test_ill_typed_application_is_rejected():
    with pytest.raises(IllTyped):
        App(F, F)
    with pytest.raises(IllTyped):
        Fun("f", aa, (F,))


def test_beta_step_is_capture_avoiding():
    # (λx. λy. G x y) y  ~>  λy'. G y y'
    t = App(lam(x, lam(y, App(App(G, x), y))), y)
    nf = beta_eta_normalize(t)
    assert nf == App(G, y)  # eta contracts λy'. G y y'
    assert free_vars(nf) == {G, y}


def test_eta_contraction_respects_occurrence():
    assert eta_contract(lam(x, App(F, x))) == F
    keep = lam(x, App(App(G, x), x))
    assert eta_contract(keep) == keep
    assert is_eta_redex(lam(x, App(F, x)))
    assert not is_eta_redex(keep)


def test_instantiate_opens_binder():
    body = lam(x, App(F, x)).body
    assert instantiate(body, y) == App(F, y)


def test_fresh_var_avoids_given_terms():
    z = fresh_var(a, F, FreeVar("_z3", a))
    assert z.name == "_z4" and z.type == a


def test_show_renames_shadowed_binders():
    t = lam(x, lam(y, App(App(G, x), y)))
    assert show(t).count("λ") == 2


def test_reduct_cap_is_enforced():
    # (λx. G x x) ((λy. y) c) has a handful of reducts; a tiny cap must trip
    ident = lam(y, y)
    t = App(lam(x, App(App(G, x), x)), App(ident, c))
    assert len(enumerate_beta_eta_reducts(t)) >= 3
    with pytest.raises(ReductCapExceeded):
        enumerate_beta_eta_reducts(t, size_cap=1)


@given(seeds)
def test_normalization_is_idempotent_and_typed(seed):
    t = random_term(seed)
    assume(t is not None)
    nf = beta_eta_normalize(t)
    assert is_normal(nf)
    assert nf.type == t.type
    assert beta_eta_normalize(nf) == nf
    assert free_vars(nf) <= free_vars(t)


@given(seeds)
def test_every_reduct_shares_the_normal_form(seed):
    t = random_term(seed, size=6)
    assume(t is not None)
    try:
        reducts = enumerate_beta_eta_reducts(t, size_cap=300)
    except ReductCapExceeded:
        assume(False)
    nf = beta_eta_normalize(t)
    assert t in reducts and nf in reducts
    for r in reducts:
        assert beta_eta_normalize(r) == nf


@given(seeds)
def test_one_step_reducts_are_typed(seed):
    t = random_term(seed, size=6)
    assume(t is not None)
    for r in one_step_reducts(t):
        assert r.type == t.type


@given(seeds, seeds)
def test_substitution_commutes_with_normalization(seed, seed2):
    t = random_term(seed, size=6)
    assume(t is not None)
    vs = sorted(free_vars(t), key=lambda v: v.name)
    assume(vs)
    target = vs[seed2 % len(vs)]
    smp = TermSampler(random.Random(seed2), {}, "S")
    image = smp.term(target.type, 4, [F, G, x])
    assume(image is not None)
    sigma = {target: image}
    lhs = beta_eta_normalize(substitute(t, sigma))
    rhs = beta_eta_normalize(substitute(beta_eta_normalize(t), sigma))
    assert lhs == rhs


@given(seeds)
def test_abstract_then_instantiate_round_trips(seed):
    t = random_term(seed, with_redex=False)
    assume(t is not None)
    vs = sorted(free_vars(t), key=lambda v: v.name)
    assume(vs)
    v = vs[0]
    lam_t = abstract(t, v)
    assert isinstance(lam_t, Lam) and v not in free_vars(lam_t)
    assert instantiate(lam_t.body, v) == t
