"""Exhaustive parameter enumeration, used as an oracle for the solver path.

Two strategies are available.  The default explores parameters lazily: the
engine and the side-condition checker run against a partial assignment and
every question they ask about an undecided parameter opens a branch over its
consistent answers.  Because both are deterministic, a completed run holds
for every completion of the decisions taken, and a failed run refutes all of
them, so this visits the same space as listing every assignment.  The naive
strategy lists complete assignments one by one; it serves to cross-check the
lazy one on tiny signatures.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .engine import Engine, orient_rule
from .params import LEX, MUL, BaseLevels, OrderParams
from .simple_types import decompose
from .structure import param_violations, validate_params

MAX_SYMBOLS = 6
MAX_BASES = 3


class BoundsExceeded(ValueError):
    pass


class NeedDecision(Exception):
    """Raised by :class:`PartialParams` when an undecided parameter is read."""

    def __init__(self, key):
        super().__init__(key)
        self.key = key


_FLIP = {">": "<", "<": ">", "=": "="}


class PartialParams:
    """Read-only parameter view over a dictionary of decisions.

    Keys are ``("prec", f, g)`` / ``("level", a, b)`` with ``f < g`` mapping to
    one of ``">" "=" "<"``, and ``("mul", f)``, ``("big", f)``,
    ``("acc", f, i)``, ``("basic", a)`` mapping to booleans.
    """

    def __init__(self, decisions: dict):
        self.decisions = decisions

    def _get(self, key):
        try:
            return self.decisions[key]
        except KeyError:
            raise NeedDecision(key) from None

    def _cmp(self, kind: str, x: str, y: str) -> str:
        if x == y:
            return "="
        if x < y:
            return self._get((kind, x, y))
        return _FLIP[self._get((kind, y, x))]

    def level_gt(self, a, b):
        return self._cmp("level", a, b) == ">"

    def prec_gt(self, f, g):
        return self._cmp("prec", f, g) == ">"

    def prec_eq(self, f, g):
        return self._cmp("prec", f, g) == "="

    def is_mul(self, f):
        return self._get(("mul", f))

    def is_big(self, f):
        return self._get(("big", f))

    def is_acc(self, f, i):
        return self._get(("acc", f, i))

    def is_basic(self, a):
        return self._get(("basic", a))


# ---------------------------------------------------------------------------
# preorder bookkeeping


def _classes(decisions: dict, kind: str):
    """Union-find over ``=`` decisions and the strict edges between classes."""
    parent: dict[str, str] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for key, rel in decisions.items():
        if key[0] != kind:
            continue
        _, x, y = key
        if rel == "=":
            parent[find(x)] = find(y)
        else:
            edges.append((x, y) if rel == ">" else (y, x))
    strict = [(find(x), find(y)) for x, y in edges]
    return find, strict


def _acyclic(strict: list[tuple[str, str]]) -> bool:
    graph: dict[str, set[str]] = {}
    for x, y in strict:
        if x == y:
            return False
        graph.setdefault(x, set()).add(y)
    state: dict[str, int] = {}

    def visit(n) -> bool:
        state[n] = 1
        for m in graph.get(n, ()):
            s = state.get(m, 0)
            if s == 1 or (s == 0 and not visit(m)):
                return False
        state[n] = 2
        return True

    return all(state.get(n, 0) == 2 or visit(n) for n in list(graph))


def preorder_consistent(decisions: dict, kind: str) -> bool:
    """Whether the comparisons of ``kind`` extend to a total preorder."""
    _, strict = _classes(decisions, kind)
    return _acyclic(strict)


def ranks(decisions: dict, kind: str, names) -> dict[str, int]:
    """Integer ranks realising every decided comparison of ``kind``."""
    find, strict = _classes(decisions, kind)
    below: dict[str, set[str]] = {}
    for x, y in strict:
        below.setdefault(x, set()).add(y)
    memo: dict[str, int] = {}

    def rank(c):
        if c not in memo:
            memo[c] = 1 + max((rank(d) for d in below.get(c, ())), default=-1)
        return memo[c]

    return {n: rank(find(n)) for n in names}


def options(key, decisions: dict) -> list:
    if key[0] in ("prec", "level"):
        out = []
        for rel in (">", "=", "<"):
            decisions[key] = rel
            if preorder_consistent(decisions, key[0]):
                out.append(rel)
            del decisions[key]
        return out
    if key[0] in ("acc", "basic"):
        return [False, True]
    return [True, False]


def materialize(decisions: dict, problem) -> OrderParams:
    """Concrete parameters agreeing with every decision; the rest take defaults."""
    symbols, bases = list(problem.signature), list(problem.base_types)
    prec = ranks(decisions, "prec", symbols)
    levels = ranks(decisions, "level", bases)
    status = {f: MUL if decisions.get(("mul", f), True) else LEX for f in symbols}
    big = {f: decisions.get(("big", f), True) for f in symbols}
    acc: dict[str, frozenset[int]] = {}
    for f in symbols:
        n = len(decompose(problem.signature[f].type)[0])
        chosen = frozenset(i for i in range(1, n + 1) if decisions.get(("acc", f, i), False))
        if chosen:
            acc[f] = chosen
    basic = {b: True for b in bases if decisions.get(("basic", b), False)}
    return OrderParams(BaseLevels(levels), prec, status, big, acc, basic)


# ---------------------------------------------------------------------------


@dataclass
class EnumOutcome:
    params: Optional[OrderParams]
    traces: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)


def check_bounds(problem, max_symbols: int = MAX_SYMBOLS, max_bases: int = MAX_BASES) -> None:
    if len(problem.signature) > max_symbols or len(problem.base_types) > max_bases:
        raise BoundsExceeded(
            f"enumeration is capped at {max_symbols} symbols and {max_bases} base types; "
            f"problem has {len(problem.signature)} and {len(problem.base_types)}"
        )


def _attempt(problem, decisions: dict, stats: Counter):
    """Run engine and side conditions on a partial assignment.

    Returns the traces on success, ``None`` on refutation, and lets
    :class:`NeedDecision` escape when more parameters are needed.
    """
    stats["runs"] += 1
    pp = PartialParams(decisions)
    engine = Engine(pp)
    traces = []
    for rule in problem.rules:
        found = orient_rule(rule, pp, engine)
        if found is None:
            return None
        traces.append(found)
    if next(param_violations(problem, pp), None) is not None:
        return None
    return traces


def lazy_search(problem, stats: Counter | None = None) -> EnumOutcome:
    stats = Counter() if stats is None else stats
    decisions: dict = {}

    def explore(depth: int):
        try:
            traces = _attempt(problem, decisions, stats)
        except NeedDecision as need:
            stats["branches"] += 1
            for value in options(need.key, decisions):
                decisions[need.key] = value
                found = explore(depth + 1)
                del decisions[need.key]
                if found is not None:
                    return found
            return None
        if traces is None:
            stats["refuted"] += 1
            return None
        return materialize(dict(decisions), problem), traces

    found = explore(0)
    if found is None:
        return EnumOutcome(None, [], stats)
    return EnumOutcome(found[0], found[1], stats)


# ---------------------------------------------------------------------------
# naive listing of complete assignments


def ordered_partitions(items: list) -> Iterator[dict]:
    """Every total preorder on ``items`` as a rank map (ranks are contiguous)."""
    n = len(items)
    if n == 0:
        yield {}
        return
    for ranks_ in itertools.product(range(n), repeat=n):
        used = sorted(set(ranks_))
        if used == list(range(len(used))):
            yield dict(zip(items, ranks_))


def all_params(problem) -> Iterator[OrderParams]:
    symbols, bases = list(problem.signature), list(problem.base_types)
    arg_slots = [
        (f, i) for f in symbols for i in range(1, len(decompose(problem.signature[f].type)[0]) + 1)
    ]
    for prec in ordered_partitions(symbols):
        for levels in ordered_partitions(bases):
            for status in itertools.product((MUL, LEX), repeat=len(symbols)):
                for big in itertools.product((True, False), repeat=len(symbols)):
                    for acc_bits in itertools.product((False, True), repeat=len(arg_slots)):
                        acc: dict[str, set[int]] = {}
                        for (f, i), on in zip(arg_slots, acc_bits):
                            if on:
                                acc.setdefault(f, set()).add(i)
                        for basic_bits in itertools.product((False, True), repeat=len(bases)):
                            yield OrderParams(
                                BaseLevels(dict(levels)),
                                dict(prec),
                                dict(zip(symbols, status)),
                                dict(zip(symbols, big)),
                                {f: frozenset(v) for f, v in acc.items()},
                                {b: True for b, on in zip(bases, basic_bits) if on},
                            )


def naive_search(problem, stats: Counter | None = None) -> EnumOutcome:
    stats = Counter() if stats is None else stats
    for params in all_params(problem):
        stats["candidates"] += 1
        if validate_params(problem, params):
            continue
        stats["valid"] += 1
        engine = Engine(params)
        traces = []
        for rule in problem.rules:
            found = orient_rule(rule, params, engine)
            if found is None:
                break
            traces.append(found)
        else:
            return EnumOutcome(params, traces, stats)
    return EnumOutcome(None, [], stats)


def enumerate_search(problem, naive: bool = False, max_symbols: int = MAX_SYMBOLS, max_bases: int = MAX_BASES):
    """First parameter assignment orienting every rule, or ``None`` params after exhaustion."""
    check_bounds(problem, max_symbols, max_bases)
    return naive_search(problem) if naive else lazy_search(problem)
