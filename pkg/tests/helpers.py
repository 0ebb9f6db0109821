"""Shared builders for tests."""

from __future__ import annotations

import random

from ncpo.sampling import TermSampler, random_signature, random_type
from ncpo.simple_types import Arrow, Base
from ncpo.terms import App, lam

BASES = ("a", "b")


def sampler(seed: int, n_symbols: int = 3):
    rng = random.Random(seed)
    sig = random_signature(rng, n_symbols, BASES)
    return rng, TermSampler(rng, sig, "Y")


def random_term(seed: int, size: int = 8, with_redex: bool = True):
    """A well-typed term, optionally wrapped in a beta-redex, or ``None``."""
    rng, smp = sampler(seed)
    ty = random_type(rng, BASES)
    pool: list = []
    t = smp.term(ty, size, pool)
    if t is None or not with_redex:
        return t
    arg_ty = random_type(rng, BASES, 1)
    x = smp.new_var(arg_ty)
    body = smp.term(ty, size, pool + [x] * 3)
    arg = smp.term(arg_ty, 3, pool)
    if body is None or arg is None:
        return t
    return App(lam(x, body), arg)


def random_params(rng: random.Random, signature, bases):
    """Arbitrary parameter values; not necessarily admissible."""
    from ncpo.params import OrderParams
    from ncpo.simple_types import decompose
    from ncpo.type_order import BaseLevels

    names = list(signature)
    return OrderParams(
        BaseLevels({b: rng.randint(0, 2) for b in bases}),
        {f: rng.randint(0, 3) for f in names},
        {f: rng.choice(("mul", "lex")) for f in names},
        {f: rng.random() < 0.6 for f in names},
        {f: frozenset(i for i in range(1, len(decompose(signature[f].type)[0]) + 1) if rng.random() < 0.5)
         for f in names},
        {b: rng.random() < 0.3 for b in bases},
    )
