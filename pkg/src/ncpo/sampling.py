"""Random signatures, terms, rules and substitutions for property tests."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .simple_types import Arrow, Base, SimpleType, arrow, decompose, drop_args
from .terms import FreeVar, Fun, Term, app_spine, apply, beta_eta_normalize, free_vars, lam
from .thf import Problem, Rule, SymbolDecl


def random_type(rng: random.Random, bases: Sequence[str], max_args: int = 2, order: int = 2) -> SimpleType:
    """A type with at most ``max_args`` arguments, each of order below ``order``."""
    n = rng.randint(0, max_args)
    doms = []
    for _ in range(n):
        if order > 1 and rng.random() < 0.3:
            doms.append(random_type(rng, bases, 1, order - 1))
        else:
            doms.append(Base(rng.choice(bases)))
    return arrow(*doms, Base(rng.choice(bases)))


class TermSampler:
    """Draws well-typed terms over a signature and a pool of variables."""

    def __init__(self, rng: random.Random, signature: dict[str, SymbolDecl], var_prefix: str = "V"):
        self.rng = rng
        self.signature = signature
        self.var_prefix = var_prefix
        self.counter = 0

    def new_var(self, ty: SimpleType) -> FreeVar:
        self.counter += 1
        return FreeVar(f"{self.var_prefix}{self.counter}", ty)

    def _heads(self, ty: SimpleType, pool: Sequence[FreeVar]):
        """``(build, argument types)`` for every head able to reach ``ty``."""
        out = []
        for v in pool:
            doms, _ = decompose(v.type)
            for k in range(len(doms) + 1):
                if drop_args(v.type, k) == ty:
                    out.append((v, doms[:k]))
        for name, decl in self.signature.items():
            doms, _ = decompose(decl.type)
            for k in range(decl.arity, len(doms) + 1):
                if drop_args(decl.type, k) == ty:
                    out.append((name, doms[:k]))
        return out

    def term(
        self, ty: SimpleType, size: int, pool: list[FreeVar], allow_new: bool = True
    ) -> Optional[Term]:
        """A term of type ``ty`` with roughly ``size`` nodes, or ``None``."""
        rng = self.rng
        options = []
        if isinstance(ty, Arrow) and size > 1:
            options.append("lam")
        heads = [h for h in self._heads(ty, pool) if len(h[1]) < size or not h[1]]
        if heads:
            options += ["head"] * 3
        if allow_new:
            options.append("new")
        if not options:
            return None
        choice = rng.choice(options)
        if choice == "new":
            v = self.new_var(ty)
            pool.append(v)
            return v
        if choice == "lam":
            x = self.new_var(ty.dom)
            body = self.term(ty.cod, size - 1, pool + [x], allow_new)
            return None if body is None else lam(x, body)
        head, doms = rng.choice(heads)
        budget = max(size - 1, 0)
        args = []
        for d in doms:
            share = max(1, budget // max(len(doms), 1))
            a = self.term(d, share, pool, allow_new)
            if a is None:
                return None
            args.append(a)
        if isinstance(head, FreeVar):
            return apply(head, *args)
        decl = self.signature[head]
        return apply(Fun(head, decl.type, args[: decl.arity]), *args[decl.arity:])

    def normal_term(self, ty, size, pool, allow_new=True, tries: int = 20) -> Optional[Term]:
        for _ in range(tries):
            t = self.term(ty, size, pool, allow_new)
            if t is not None:
                return beta_eta_normalize(t)
        return None


def random_signature(
    rng: random.Random, n_symbols: int, bases: Sequence[str], max_args: int = 2
) -> dict[str, SymbolDecl]:
    sig = {}
    for k in range(n_symbols):
        ty = random_type(rng, bases, max_args)
        n = len(decompose(ty)[0])
        sig[f"f{k}"] = SymbolDecl(ty, rng.randint(0, n))
    return sig


def random_rule(rng: random.Random, sig: dict[str, SymbolDecl], max_size: int = 8, name: str = "r") -> Optional[Rule]:
    """A valid rule: symbol-headed normal sides, right variables among the left ones."""
    sampler = TermSampler(rng, sig, "X")
    f = rng.choice(list(sig))
    decl = sig[f]
    doms, _ = decompose(decl.type)
    k = rng.randint(decl.arity, len(doms))
    pool: list[FreeVar] = []
    args = []
    for d in doms[:k]:
        a = sampler.term(d, rng.randint(1, 3), pool, True)
        if a is None:
            return None
        args.append(a)
    lhs = beta_eta_normalize(apply(Fun(f, decl.type, args[: decl.arity]), *args[decl.arity:]))
    if not isinstance(app_spine(lhs)[0], Fun):
        return None
    lvars = sorted(free_vars(lhs), key=lambda v: v.name)
    rhs = sampler.normal_term(lhs.type, rng.randint(1, max_size), list(lvars), allow_new=False)
    if rhs is None or lhs.size > max_size or rhs.size > max_size:
        return None
    if not free_vars(rhs) <= free_vars(lhs):
        return None
    return Rule(lhs, rhs, name)


def random_problem(
    rng: random.Random,
    max_symbols: int = 4,
    max_bases: int = 2,
    max_rules: int = 3,
    max_size: int = 8,
) -> Problem:
    bases = tuple("abc"[: rng.randint(1, max_bases)])
    sig = random_signature(rng, rng.randint(1, max_symbols), bases)
    rules = []
    for k in range(rng.randint(0, max_rules)):
        for _ in range(30):
            r = random_rule(rng, sig, max_size, f"r{k}")
            if r is not None:
                rules.append(r)
                break
    return Problem(bases, sig, rules, "<random>", True)


def random_substitution(
    rng: random.Random, sig: dict[str, SymbolDecl], domain: Sequence[FreeVar], max_size: int = 4, avoid=()
) -> dict[FreeVar, Term]:
    """Normal images for a random subset of ``domain``.

    Images are built from the signature, the domain itself and fresh
    variables, so they never mention ``avoid``.
    """
    taken = {v.name for v in avoid} | {v.name for v in domain}
    prefix = "W"
    while any(name.startswith(prefix) for name in taken):
        prefix += "W"
    sampler = TermSampler(rng, sig, prefix)
    sigma: dict[FreeVar, Term] = {}
    pool: list[FreeVar] = [v for v in domain if v not in set(avoid)]
    for x in domain:
        if rng.random() < 0.25:
            continue
        image = sampler.normal_term(x.type, rng.randint(1, max_size), pool, True)
        if image is not None:
            sigma[x] = image
    return sigma
