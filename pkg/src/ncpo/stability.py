"""Substitution stability checks linking the normal-form order to its plain companion.

For a derived ``s >^X t`` and a normal substitution ``sigma`` away from
``X`` we look for a term ``t'`` between ``t sigma`` and its normal form with
``(s sigma)↓ ⊐^X t'``.  Two witness pools are supported: the reducts of
``t sigma`` alone, and that set closed under a bounded number of
eta-expansions, which also reach the normal form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .engine import Engine
from .sampling import random_substitution
from .simple_types import Arrow
from .terms import (
    App,
    FreeVar,
    Fun,
    Lam,
    ReductCapExceeded,
    Term,
    abstract,
    beta_eta_normalize,
    enumerate_beta_eta_reducts,
    fresh_var,
    free_vars,
    substitute,
)
from .trace import GE, GE_TAU, GT, GT_TAU, ProofTrace

OK, FAIL, SKIPPED = "ok", "fail", "skipped"


@dataclass(frozen=True)
class Judgment:
    s: Term
    t: Term
    X: frozenset
    via_eta: bool  # the derivation uses the eta-expanding abstraction rule


def harvest(traces: Iterable[ProofTrace]) -> list[Judgment]:
    """Every strict comparison occurring in the given derivations."""
    out, seen = [], set()

    def walk(node: ProofTrace) -> bool:
        uses = node.rule == "λ⊳η"
        for child in node.children:
            uses = walk(child) or uses
        if node.rel in (GT, GT_TAU, GE, GE_TAU) and node.lhs != node.rhs:
            key = (node.lhs, node.rhs, node.X)
            if key not in seen:
                seen.add(key)
                out.append(Judgment(node.lhs, node.rhs, node.X, uses))
        return uses

    for tr in traces:
        walk(tr)
    return out


def _eta_expand_once(t: Term) -> Iterator[Term]:
    """Terms obtained by eta-expanding one closed-under-binders subterm of arrow type."""

    def go(u: Term) -> Iterator[Term]:
        if isinstance(u.type, Arrow) and not isinstance(u, Lam) and u.loose == 0:
            z = fresh_var(u.type.dom, u)
            yield abstract(App(u, z), z)
        if isinstance(u, Fun):
            for i, a in enumerate(u.args):
                for a2 in go(a):
                    yield Fun(u.name, u.sym_type, u.args[:i] + (a2,) + u.args[i + 1:])
        elif isinstance(u, App):
            for f2 in go(u.fun):
                yield App(f2, u.arg)
            for a2 in go(u.arg):
                yield App(u.fun, a2)
        elif isinstance(u, Lam):
            for b2 in go(u.body):
                yield Lam(u.var_type, b2, u.hint)

    yield from go(t)


def witness_pool(t_sigma: Term, expansions: int = 0, cap: int = 2000) -> list[Term]:
    """Candidates ``t'`` with ``t_sigma ->* t' ->* t_sigma↓`` (up to eta-expansion)."""
    base = enumerate_beta_eta_reducts(t_sigma, cap)
    pool = set(base)
    frontier = set(base)
    for _ in range(expansions):
        nxt = set()
        for u in frontier:
            for v in _eta_expand_once(u):
                if v not in pool:
                    nxt.add(v)
        pool |= nxt
        frontier = nxt
    normal = beta_eta_normalize(t_sigma)
    return sorted(pool, key=lambda u: (u != normal, u != t_sigma, u.size, str(u)))


def check_instance(
    j: Judgment, sigma: dict, engine: Engine, expansions: int = 0, cap: int = 2000
) -> tuple[str, Term | None]:
    """``(status, witness)`` for one judgment under one substitution."""
    s_sigma = beta_eta_normalize(substitute(j.s, sigma))
    t_sigma = substitute(j.t, sigma)
    try:
        pool = witness_pool(t_sigma, expansions, cap)
    except ReductCapExceeded:
        return SKIPPED, None
    for cand in pool:
        if engine.gt(s_sigma, cand, j.X) is not None:
            return OK, cand
    return FAIL, None


def sample_substitution(rng: random.Random, problem, j: Judgment, max_size: int = 4) -> dict:
    """A normal substitution away from ``j.X`` over the free variables of the judgment."""
    domain = sorted((free_vars(j.s) | free_vars(j.t)) - j.X, key=lambda v: v.name)
    return random_substitution(rng, problem.signature, domain, max_size, avoid=j.X)
