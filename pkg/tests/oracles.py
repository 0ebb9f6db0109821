"""Brute-force closures of the type relations over a finite universe.

Every generating step of the type order keeps or shrinks type size, so the
closure restricted to all types up to some size is exact on that universe.
"""

from __future__ import annotations

from ncpo.simple_types import Arrow, Base


def closure(pairs: set) -> set:
    rel = set(pairs)
    succ: dict = {}
    for x, y in rel:
        succ.setdefault(x, set()).add(y)
    changed = True
    while changed:
        changed = False
        for x in list(succ):
            reach = set(succ[x])
            for y in list(succ[x]):
                reach |= succ.get(y, set())
            if reach != succ[x]:
                succ[x] = reach
                changed = True
    return {(x, y) for x, ys in succ.items() for y in ys}


def type_order_closure(universe: list, level: dict) -> set:
    """Smallest order with base levels, right-argument steps and codomain context."""
    base = {
        (t, u)
        for t in universe
        for u in universe
        if isinstance(t, Base) and isinstance(u, Base) and level[t.name] > level[u.name]
    }
    right = {(t, t.cod) for t in universe if isinstance(t, Arrow)}
    rel = closure(base | right)
    while True:
        ctx = {
            (t, u)
            for t in universe
            for u in universe
            if isinstance(t, Arrow) and isinstance(u, Arrow) and t.dom == u.dom and (t.cod, u.cod) in rel
        }
        bigger = closure(rel | ctx)
        if bigger == rel:
            return rel
        rel = bigger


def gtdot_closure(universe: list, order: set) -> set:
    left = {(t, t.dom) for t in universe if isinstance(t, Arrow)}
    return closure(order | left)


def total_preorders(names: list) -> list[dict]:
    """Every assignment of contiguous levels to ``names``."""
    import itertools

    out = []
    for ranks in itertools.product(range(len(names)), repeat=len(names)):
        used = sorted(set(ranks))
        if used == list(range(len(used))):
            out.append(dict(zip(names, ranks)))
    return out
