"""Nonversatility, accessible and basic subterms, structural decrease, and
the global side conditions on order parameters."""

from __future__ import annotations

from typing import Iterator

from .params import OrderParams, levels_of
from .simple_types import Base, SimpleType, arrow, base_names, decompose
from .terms import App, Bound, FreeVar, Fun, Lam, Term, app_spine, apply, is_normal
from .type_order import (
    _geqdot,
    pos_sets,
    positions_of,
    spos,
)


class VersatileTerm(ValueError):
    pass


# ---------------------------------------------------------------------------
# Nonversatility (sufficient syntactic test)


def _nv(t: Term) -> bool:
    cached = t._nv
    if cached is not None:
        return cached
    if isinstance(t, (FreeVar, Bound)):
        result = False
    elif isinstance(t, Fun):
        result = True
    elif isinstance(t, App):
        result = _nv(t.fun)
    else:
        result = _nv_lam(t.body)
    t._nv = result
    return result


def _apps_nv(t: Term) -> bool:
    """Every application subterm of ``t`` passes the test."""
    if isinstance(t, App):
        return _nv(t) and _apps_nv(t.fun) and _apps_nv(t.arg)
    if isinstance(t, Fun):
        return all(_apps_nv(a) for a in t.args)
    if isinstance(t, Lam):
        return _apps_nv(t.body)
    return True


def _nv_lam(body: Term) -> bool:
    if isinstance(body, App) and body.arg == Bound(0, body.arg.type):
        return _apps_nv(body)
    if not (isinstance(body, (FreeVar, Bound)) or _nv(body)):
        return False
    if isinstance(body, App):
        w = body.arg
        if isinstance(w, (App, Lam)) and not _nv(w):
            return False
    return True


def is_nonversatile(t: Term) -> bool:
    if not is_normal(t):
        raise ValueError("nonversatility is only decided for βη-normal terms")
    return _nv(t)


# ---------------------------------------------------------------------------
# Candidate subterms.  Candidates are parameter independent; the parameters
# only enter through guards (basic flags, accessible argument indices).


def _children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Fun):
        return t.args
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Lam):
        return (t.body,)
    return ()


def bsubt_candidates(s: Term, plain: bool = False) -> list[Term]:
    """Proper subterms of ``s`` of base type reached through nonversatile nodes.

    Subterms mentioning a variable bound inside ``s`` are dropped.  The caller
    still has to check that the type of each candidate is basic.
    """
    if not plain and not _nv(s):
        return []
    out: list[Term] = []
    seen = set()
    stack = [s]
    while stack:
        node = stack.pop()
        for child in _children(node):
            if child.loose == 0 and isinstance(child.type, Base) and child not in seen:
                seen.add(child)
                out.append(child)
            if plain or _nv(child):
                stack.append(child)
    return out


def bsubt_targets(s: Term, params, plain: bool = False) -> set[Term]:
    """All ``t`` with ``s`` basic-subterm-greater than ``t``."""
    if not plain and not is_nonversatile(s):
        raise VersatileTerm("basic subterms are only taken of nonversatile terms")
    return {t for t in bsubt_candidates(s, plain) if params.is_basic(t.type.name)}


def acc_split(s: Term) -> tuple[str, list[Term]] | None:
    """``(f, [s1..sn])`` when ``s`` is ``f(s1..s_ar) s_ar+1 .. sn`` of base type."""
    head, extra = app_spine(s)
    if not isinstance(head, Fun) or not isinstance(s.type, Base):
        return None
    return head.name, list(head.args) + extra


def asubt_paths(s: Term) -> list[tuple[Term, tuple[tuple[str, int], ...]]]:
    """Every accessible-subterm candidate with the ``(symbol, index)`` guards on its chain."""
    out = []

    def walk(t: Term, guards: tuple):
        split = acc_split(t)
        if split is None:
            return
        name, args = split
        for j, arg in enumerate(args, 1):
            g = guards + ((name, j),)
            out.append((arg, g))
            walk(arg, g)

    walk(s, ())
    return out


def asubt_targets(s: Term, params) -> set[Term]:
    return {t for t, guards in asubt_paths(s) if all(params.is_acc(f, j) for f, j in guards)}


def structsm_spines(t: Term, X) -> Iterator[tuple[Term, tuple[FreeVar, ...]]]:
    """Ways to read ``t`` as ``u x1 .. xk`` with every ``xi`` in ``X``."""
    head, args = app_spine(t)
    k = 0
    yield t, ()
    while k < len(args):
        x = args[-1 - k]
        if not (isinstance(x, FreeVar) and x in X):
            return
        k += 1
        yield apply(head, *args[: len(args) - k]), tuple(args[len(args) - k:])


def structsm(s: Term, t: Term, X, params, min_k: int = 0) -> bool:
    """Is ``t`` structurally smaller than ``s`` with respect to ``X``?"""
    if not (isinstance(s.type, Base) and s.type == t.type):
        return False
    a = s.type.name
    targets = asubt_targets(s, params)
    for u, xs in structsm_spines(t, X):
        if len(xs) < min_k:
            continue
        if u in targets and all(not positions_of(a, x.type) for x in xs):
            return True
    return False


def structsm_witnesses(s: Term, X, paths=None) -> list[tuple[Term, tuple, int]]:
    """All ``(w, guards, k)`` with ``w = u x1..xk`` possibly structurally smaller than ``s``.

    ``u`` ranges over accessible candidates of ``s`` whose type ends in the base
    type of ``s``; the ``xi`` range over ``X`` with matching types.
    """
    if not isinstance(s.type, Base):
        return []
    a = s.type.name
    out = []
    pool = sorted(X, key=lambda v: v.name)
    for u, guards in asubt_paths(s) if paths is None else paths:
        doms, result = decompose(u.type)
        if result != s.type:
            continue
        if any(positions_of(a, d) for d in doms):
            continue
        choices: list[list[Term]] = [[]]
        for d in doms:
            choices = [c + [x] for c in choices for x in pool if x.type == d]
            if not choices:
                break
        for c in choices:
            out.append((apply(u, *c), guards, len(c)))
    return out


# ---------------------------------------------------------------------------
# Global parameter conditions


def symbol_shape(ty: SimpleType) -> tuple[tuple[SimpleType, ...], str]:
    doms, result = decompose(ty)
    return doms, result.name


def param_violations(problem, params) -> Iterator[str]:
    """Yield each violated side condition.  Reads parameters lazily."""
    levels = levels_of(params)
    symbols = list(problem.signature)
    bases = list(problem.base_types)

    for i, f in enumerate(symbols):
        for g in symbols[i + 1:]:
            if params.prec_eq(f, g) and params.is_mul(f) != params.is_mul(g):
                yield f"status: {f} and {g} share a precedence level but differ in status"
    for f in symbols:
        for g in symbols:
            if f == g:
                continue
            if params.is_big(g) and not params.is_big(f):
                if params.prec_gt(f, g) or params.prec_eq(f, g):
                    yield f"big: {f} is small but not below big symbol {g}"

    for f in symbols:
        decl = problem.signature[f]
        doms, a = symbol_shape(decl.type)
        n = len(doms)
        for i in range(1, n + 1):
            if not params.is_acc(f, i):
                continue
            ti = doms[i - 1]
            if not _dominates(levels, a, ti):
                yield f"acc: argument {i} of {f} has a base type above {a}"
            plus, _, occ = pos_sets(a, ti)
            if not occ <= plus:
                yield f"acc: {a} occurs negatively in argument {i} of {f}"

    for a in bases:
        if not params.is_basic(a):
            continue
        for b in bases:
            if b != a and levels.gt(a, b) and not params.is_basic(b):
                yield f"basic: {a} is basic but the smaller base {b} is not"
        for f in symbols:
            doms, res = symbol_shape(problem.signature[f].type)
            if res != a:
                continue
            for i in range(1, len(doms) + 1):
                if not params.is_acc(f, i):
                    continue
                ti = doms[i - 1]
                if ti == Base(a):
                    continue
                if not (isinstance(ti, Base) and params.is_basic(ti.name)):
                    yield f"basic: {a} is basic but argument {i} of {f} has type {ti}"

    for f in symbols:
        if params.is_big(f):
            continue
        decl = problem.signature[f]
        doms, a = symbol_shape(decl.type)
        n, ar = len(doms), decl.arity
        if ar == n:
            for i, ti in enumerate(doms, 1):
                if not _dominates(levels, a, ti):
                    yield f"small: argument {i} of {f} has a base type above {a}"
                if spos(a, ti):
                    yield f"small: argument {i} of {f} has a nonempty strict position set"
        else:
            for i in range(1, n + 1):
                if params.is_acc(f, i):
                    yield f"small: partially applied {f} has accessible argument {i}"
            rest = arrow(*doms[ar:], Base(a))
            for i in range(1, ar + 1):
                ti = doms[i - 1]
                if not _dominates(levels, a, ti):
                    yield f"small: argument {i} of {f} has a base type above {a}"
                if not _geqdot(levels.gt, rest, ti):
                    yield f"small: argument {i} of {f} is not below {rest}"


def _dominates(levels, a: str, ty: SimpleType) -> bool:
    return all(b == a or levels.gt(a, b) for b in base_names(ty))


def unknown_names(problem, params: OrderParams) -> list[str]:
    out = []
    symbols, bases = set(problem.signature), set(problem.base_types)
    for key, table, universe in (
        ("prec", params.prec, symbols),
        ("status", params.status, symbols),
        ("big", params.big, symbols),
        ("acc", params.acc, symbols),
        ("level", params.levels.levels, bases),
        ("basic", params.basic, bases),
    ):
        for name in table:
            if name not in universe:
                out.append(f"{key}: unknown name {name}")
    for f, idx in params.acc.items():
        if f in problem.signature:
            n = len(decompose(problem.signature[f].type)[0])
            for i in sorted(idx):
                if not 1 <= i <= n:
                    out.append(f"acc: {f} has no argument {i}")
    return out


def validate_params(problem, params: OrderParams) -> list[str]:
    """All violated parameter conditions; empty means the parameters are usable."""
    return unknown_names(problem, params) + list(param_violations(problem, params))
