from __future__ import annotations

import pytest

from oracles import gtdot_closure, total_preorders, type_order_closure
from ncpo.simple_types import Arrow, Base, all_types, arrow
from ncpo.type_order import (
    BaseLevels,
    base_dominates,
    pos_sets,
    spos,
    spos_family,
    type_at,
    type_geq,
    type_gt,
    type_gtdot,
)

a, b, c = Base("a"), Base("b"), Base("c")
UNIVERSE = all_types(["a", "b", "c"], 5)
LEVELINGS = total_preorders(["a", "b", "c"])


def test_universe_size():
    assert len(UNIVERSE) == 3 + 9 + 54
    assert len(LEVELINGS) == 13


@pytest.mark.parametrize("level", LEVELINGS, ids=lambda lv: "".join(f"{k}{v}" for k, v in lv.items()))
def test_type_order_matches_closure(level):
    order = type_order_closure(UNIVERSE, level)
    for t in UNIVERSE:
        for u in UNIVERSE:
            assert type_gt(level, t, u) == ((t, u) in order), (t, u)


@pytest.mark.parametrize("level", LEVELINGS, ids=lambda lv: "".join(f"{k}{v}" for k, v in lv.items()))
def test_gtdot_matches_closure_and_is_acyclic(level):
    dot = gtdot_closure(UNIVERSE, type_order_closure(UNIVERSE, level))
    for t in UNIVERSE:
        assert (t, t) not in dot
        for u in UNIVERSE:
            assert type_gtdot(level, t, u) == ((t, u) in dot), (t, u)


@pytest.mark.parametrize("level", LEVELINGS, ids=lambda lv: "".join(f"{k}{v}" for k, v in lv.items()))
def test_admissibility_clauses(level):
    for t in UNIVERSE:
        assert not type_gt(level, t, t)
        if isinstance(t, Arrow):
            assert type_gt(level, t, t.cod)
    for t in UNIVERSE:
        if not isinstance(t, Arrow):
            continue
        for v in UNIVERSE:
            if type_gt(level, t, v):
                assert type_geq(level, t.cod, v) or (
                    isinstance(v, Arrow) and v.dom == t.dom and type_gt(level, t.cod, v.cod)
                )
    for t in UNIVERSE:
        for u in UNIVERSE:
            if type_gt(level, t, u):
                for w in UNIVERSE:
                    if type_gt(level, u, w):
                        assert type_gt(level, t, w)


def test_left_argument_cannot_climb_back():
    # codomain recursion must use the order itself, not its closure with left steps
    level = {"a": 0, "b": 1}
    assert not type_gtdot(level, arrow(a, b, a), Arrow(a, b))
    assert type_gtdot(level, arrow(a, b, a), b)


def test_worked_order_example():
    level = {"a": 2, "b": 1, "c": 0}
    assert type_gt(level, Arrow(a, b), Arrow(a, c))
    assert not type_gt(level, c, Arrow(b, b))


def test_base_dominance():
    lv = BaseLevels({"a": 1, "b": 0, "c": 1})
    assert base_dominates(lv, "a", Arrow(b, a))
    assert not base_dominates(lv, "a", Arrow(b, a), strict=True)
    assert not base_dominates(lv, "a", c)  # same level, distinct base


def test_worked_position_sets():
    t = Arrow(Arrow(a, b), Arrow(a, b))
    pos, neg, occ_a = pos_sets("a", t)
    assert pos == {"11", "22"}
    assert neg == {"12", "21"}
    assert occ_a == {"11", "21"}
    assert pos_sets("b", t)[2] == {"12", "22"}
    for p in pos | neg:
        assert isinstance(type_at(t, p), Base)


SPOS_ORACLES = [
    (a, set()),
    (b, set()),
    (Arrow(a, a), set()),
    (Arrow(a, b), set()),
    (arrow(Arrow(b, a), b), {"12"}),
    (arrow(Arrow(a, a), a), {"12"}),
    (arrow(arrow(Arrow(a, a), a), a), {"12"}),
    (arrow(b, Arrow(b, a), b), {"212"}),
    (arrow(Arrow(a, b), b), set()),
    (arrow(arrow(Arrow(b, a), b), b), set()),
    (arrow(arrow(b, b, a), b), {"122"}),
    (arrow(arrow(Arrow(a, b), a), b), {"12"}),
    (arrow(arrow(Arrow(a, a), b), b), set()),
    (arrow(a, Arrow(b, a), b), {"212"}),
]


@pytest.mark.parametrize("ty, expected", SPOS_ORACLES, ids=[str(t) for t, _ in SPOS_ORACLES])
def test_strict_positions(ty, expected):
    assert spos("a", ty) == expected


def test_spos_family_shape():
    fam = spos_family("a", arrow(b, b, a))
    assert fam["S"] == fam["R"] == set()
    assert fam["C"] == fam["N"] == {"22"}
    assert fam["C"] <= fam["L"]
