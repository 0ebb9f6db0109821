"""Admissible type order built from base-type levels, and base-type positions.

A level map ``{base: int}`` induces ``a > b`` on bases iff ``level(a) > level(b)``.
Distinct bases on equal levels are incomparable.  The order on types is the
least one containing the base order and ``T -> U > U`` that is monotone in
the codomain.  ``gtdot`` closes it under taking arrow domains.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping, Protocol, Union

from .simple_types import Arrow, Base, SimpleType, base_names


class UnknownBaseType(KeyError):
    pass


class LevelOrder(Protocol):
    def gt(self, a: str, b: str) -> bool: ...


class BaseLevels:
    """Integer levels for base types."""

    __slots__ = ("levels",)

    def __init__(self, levels: Mapping[str, int]):
        self.levels = dict(levels)

    def gt(self, a: str, b: str) -> bool:
        try:
            return self.levels[a] > self.levels[b]
        except KeyError as exc:
            raise UnknownBaseType(exc.args[0]) from None

    def __getitem__(self, name: str) -> int:
        return self.levels[name]

    def __eq__(self, other) -> bool:
        return isinstance(other, BaseLevels) and self.levels == other.levels

    def __repr__(self) -> str:
        return f"BaseLevels({self.levels!r})"


Levels = Union[LevelOrder, Mapping[str, int]]


def _gt_fn(levels: Levels) -> Callable[[str, str], bool]:
    if isinstance(levels, Mapping):
        levels = BaseLevels(levels)
    return levels.gt


def _type_gt(gt, t: SimpleType, u: SimpleType) -> bool:
    if isinstance(t, Base):
        return isinstance(u, Base) and gt(t.name, u.name)
    if _type_geq(gt, t.cod, u):
        return True
    return isinstance(u, Arrow) and u.dom == t.dom and _type_gt(gt, t.cod, u.cod)


def _type_geq(gt, t: SimpleType, u: SimpleType) -> bool:
    return t == u or _type_gt(gt, t, u)


def _gtdot(gt, t: SimpleType, u: SimpleType) -> bool:
    if isinstance(t, Base):
        return isinstance(u, Base) and gt(t.name, u.name)
    return (
        _geqdot(gt, t.dom, u)
        or _geqdot(gt, t.cod, u)
        or (isinstance(u, Arrow) and u.dom == t.dom and _type_gt(gt, t.cod, u.cod))
    )


def _geqdot(gt, t: SimpleType, u: SimpleType) -> bool:
    return t == u or _gtdot(gt, t, u)


def type_gt(levels: Levels, t: SimpleType, u: SimpleType) -> bool:
    """Strict admissible type order."""
    return _type_gt(_gt_fn(levels), t, u)


def type_geq(levels: Levels, t: SimpleType, u: SimpleType) -> bool:
    return _type_geq(_gt_fn(levels), t, u)


def type_gtdot(levels: Levels, t: SimpleType, u: SimpleType) -> bool:
    """Transitive closure of the type order together with the domain relation."""
    return _gtdot(_gt_fn(levels), t, u)


def type_geqdot(levels: Levels, t: SimpleType, u: SimpleType) -> bool:
    return _geqdot(_gt_fn(levels), t, u)


def base_dominates(levels: Levels, a: str, ty: SimpleType, strict: bool = False) -> bool:
    """Does base ``a`` lie above (or, non-strictly, at) every base in ``ty``?"""
    gt = _gt_fn(levels)
    for b in base_names(ty):
        if strict or b != a:
            if not gt(a, b):
                return False
        else:
            gt(a, a)  # still reject unknown names
    return True


# ---------------------------------------------------------------------------
# Positions.  A position is a string over "12"; "" addresses the whole type.

PositionSet = frozenset


def _prefix(digit: str, positions) -> frozenset:
    return frozenset(digit + p for p in positions)


@lru_cache(maxsize=None)
def _pos(a: str, ty: SimpleType) -> tuple[frozenset, frozenset, frozenset]:
    if isinstance(ty, Base):
        return frozenset({""}), frozenset(), frozenset({""}) if ty.name == a else frozenset()
    dp, dn, da = _pos(a, ty.dom)
    cp, cn, ca = _pos(a, ty.cod)
    pos = _prefix("1", dn) | _prefix("2", cp)
    neg = _prefix("1", dp) | _prefix("2", cn)
    return pos, neg, _prefix("1", da) | _prefix("2", ca)


def pos_sets(a: str, ty: SimpleType) -> tuple[frozenset, frozenset, frozenset]:
    """``(positive, negative, occurrences of a)`` base-type positions of ``ty``."""
    return _pos(a, ty)


def positions_of(a: str, ty: SimpleType) -> frozenset:
    return _pos(a, ty)[2]


def type_at(ty: SimpleType, position: str) -> SimpleType:
    for digit in position:
        if not isinstance(ty, Arrow):
            raise ValueError(f"position {position!r} runs past a base type")
        ty = ty.dom if digit == "1" else ty.cod
    return ty


@lru_cache(maxsize=None)
def spos_family(a: str, ty: SimpleType) -> dict[str, frozenset]:
    """The mutually recursive sets S, R, N, L and C for base ``a`` in ``ty``."""
    if isinstance(ty, Base):
        empty = frozenset()
        return {
            "S": empty,
            "R": empty,
            "N": empty,
            "L": empty,
            "C": frozenset({""}) if ty.name == a else empty,
        }
    dom = spos_family(a, ty.dom)
    cod = spos_family(a, ty.cod)
    s = _prefix("1", dom["N"]) | _prefix("2", cod["S"])
    n = _prefix("1", dom["S"]) | _prefix("2", cod["L"] | cod["C"])
    c = n
    lam = c | _prefix("1", dom["S"] | dom["N"]) | _prefix("2", cod["L"] | cod["C"])
    return {"S": s, "R": s, "N": n, "L": lam, "C": c}


def spos(a: str, ty: SimpleType) -> frozenset:
    return spos_family(a, ty)["S"]
