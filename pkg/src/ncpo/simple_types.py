"""Simple types: base types and right-associative arrows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True, slots=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left} > {self.cod}"


SimpleType = Union[Base, Arrow]


def arrow(*types: SimpleType) -> SimpleType:
    """Build ``T1 > T2 > ... > Tn`` (right-associative)."""
    if not types:
        raise ValueError("arrow() needs at least one type")
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def decompose(ty: SimpleType) -> tuple[tuple[SimpleType, ...], Base]:
    """Split ``T1 > ... > Tn > a`` into ``((T1, ..., Tn), a)``."""
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.dom)
        ty = ty.cod
    return tuple(args), ty


def arity_of(ty: SimpleType) -> int:
    return len(decompose(ty)[0])


def drop_args(ty: SimpleType, n: int) -> SimpleType:
    """Result type after applying a term of type ``ty`` to ``n`` arguments."""
    for _ in range(n):
        if not isinstance(ty, Arrow):
            raise TypeError(f"type {ty} takes fewer than {n} arguments")
        ty = ty.cod
    return ty


def base_names(ty: SimpleType) -> Iterator[str]:
    """Base type names occurring in ``ty``, left to right, with repeats."""
    if isinstance(ty, Base):
        yield ty.name
    else:
        yield from base_names(ty.dom)
        yield from base_names(ty.cod)


def type_size(ty: SimpleType) -> int:
    if isinstance(ty, Base):
        return 1
    return 1 + type_size(ty.dom) + type_size(ty.cod)


def all_types(bases: list[str], max_size: int) -> list[SimpleType]:
    """Every type over ``bases`` with at most ``max_size`` nodes."""
    by_size: dict[int, list[SimpleType]] = {1: [Base(b) for b in bases]}
    for size in range(2, max_size + 1):
        layer = []
        for left in range(1, size - 1):
            right = size - 1 - left
            for dom in by_size.get(left, ()):
                for cod in by_size.get(right, ()):
                    layer.append(Arrow(dom, cod))
        by_size[size] = layer
    return [ty for size in sorted(by_size) for ty in by_size[size]]
