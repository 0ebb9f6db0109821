"""Order parameters and their line-oriented text format.

::

    level f 1
    prec not 1
    status and lex
    big s false
    acc forall 1
    basic f true

Unlisted entries default to level 0, precedence 0, ``mul``, big, no
accessible arguments and non-basic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .type_order import BaseLevels

MUL, LEX = "mul", "lex"


class ParamsFormatError(ValueError):
    pass


@dataclass
class OrderParams:
    levels: BaseLevels = field(default_factory=lambda: BaseLevels({}))
    prec: dict[str, int] = field(default_factory=dict)
    status: dict[str, str] = field(default_factory=dict)
    big: dict[str, bool] = field(default_factory=dict)
    acc: dict[str, frozenset[int]] = field(default_factory=dict)
    basic: dict[str, bool] = field(default_factory=dict)

    # read interface shared with the lazily decided parameters of the enumerator
    def level_gt(self, a: str, b: str) -> bool:
        return self.levels.levels.get(a, 0) > self.levels.levels.get(b, 0)

    def prec_gt(self, f: str, g: str) -> bool:
        return self.prec.get(f, 0) > self.prec.get(g, 0)

    def prec_eq(self, f: str, g: str) -> bool:
        return self.prec.get(f, 0) == self.prec.get(g, 0)

    def is_mul(self, f: str) -> bool:
        return self.status.get(f, MUL) == MUL

    def is_big(self, f: str) -> bool:
        return self.big.get(f, True)

    def is_acc(self, f: str, i: int) -> bool:
        return i in self.acc.get(f, ())

    def is_basic(self, a: str) -> bool:
        return self.basic.get(a, False)

    @property
    def type_levels(self) -> "_LevelView":
        return _LevelView(self)

    def completed(self, symbols: Iterable[str], bases: Iterable[str]) -> "OrderParams":
        """Copy with every default made explicit."""
        symbols, bases = list(symbols), list(bases)
        return OrderParams(
            BaseLevels({b: self.levels.levels.get(b, 0) for b in bases}),
            {f: self.prec.get(f, 0) for f in symbols},
            {f: self.status.get(f, MUL) for f in symbols},
            {f: self.big.get(f, True) for f in symbols},
            {f: frozenset(self.acc.get(f, ())) for f in symbols},
            {b: self.basic.get(b, False) for b in bases},
        )


class _LevelView:
    """Adapter exposing ``gt`` over any object with ``level_gt``."""

    __slots__ = ("params",)

    def __init__(self, params):
        self.params = params

    def gt(self, a: str, b: str) -> bool:
        return self.params.level_gt(a, b)


def levels_of(params) -> _LevelView:
    return _LevelView(params)


def _bool(word: str, lineno: int) -> bool:
    if word == "true":
        return True
    if word == "false":
        return False
    raise ParamsFormatError(f"line {lineno}: expected true or false, found {word!r}")


def _int(word: str, lineno: int) -> int:
    try:
        return int(word)
    except ValueError:
        raise ParamsFormatError(f"line {lineno}: expected an integer, found {word!r}") from None


def parse_params(text: str) -> OrderParams:
    params = OrderParams()
    levels: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key = words[0]
        if key == "acc" and len(words) == 2:
            params.acc[words[1]] = frozenset()
            continue
        if len(words) != 3:
            raise ParamsFormatError(f"line {lineno}: expected '<key> <name> <value>'")
        _, name, value = words
        if key == "level":
            levels[name] = _int(value, lineno)
        elif key == "prec":
            params.prec[name] = _int(value, lineno)
        elif key == "status":
            if value not in (MUL, LEX):
                raise ParamsFormatError(f"line {lineno}: status must be mul or lex")
            params.status[name] = value
        elif key == "big":
            params.big[name] = _bool(value, lineno)
        elif key == "acc":
            idx = [_int(v, lineno) for v in value.split(",") if v]
            if any(i < 1 for i in idx):
                raise ParamsFormatError(f"line {lineno}: argument indices start at 1")
            params.acc[name] = frozenset(idx)
        elif key == "basic":
            params.basic[name] = _bool(value, lineno)
        else:
            raise ParamsFormatError(f"line {lineno}: unknown key {key!r}")
    params.levels = BaseLevels(levels)
    return params


def load_params(path) -> OrderParams:
    with open(path, encoding="utf-8") as fh:
        return parse_params(fh.read())


def format_params(params: OrderParams, symbols: Iterable[str], bases: Iterable[str]) -> str:
    """Params block listing every symbol and base explicitly, in the given order."""
    full = params.completed(symbols, bases)
    lines = [f"level {b} {n}" for b, n in full.levels.levels.items()]
    lines += [f"basic {b} {'true' if v else 'false'}" for b, v in full.basic.items()]
    for f in full.prec:
        lines.append(f"prec {f} {full.prec[f]}")
        lines.append(f"status {f} {full.status[f]}")
        lines.append(f"big {f} {'true' if full.big[f] else 'false'}")
        if full.acc[f]:
            lines.append(f"acc {f} {','.join(str(i) for i in sorted(full.acc[f]))}")
    return "\n".join(lines) + "\n"
