"""Proof trees produced by the order engine, and their text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .terms import Term, show

# Judgment kinds carried by trace nodes.
GT, GT_TAU, GE, GE_TAU = "gt", "gt_tau", "ge", "ge_tau"
HELPER = "helper"  # the auxiliary comparison used by rule @=
SMGE = "smge"  # structurally smaller followed by a weak typed step
REFL = "="

_SYMBOLS = {
    (GT, False): ">",
    (GT_TAU, False): ">_τ",
    (GE, False): "≥",
    (GE_TAU, False): "≥_τ",
    (HELPER, False): ">_@",
    (SMGE, False): "≫·≥_τ",
    (GT, True): "⊐",
    (GT_TAU, True): "⊐_τ",
    (GE, True): "⊒",
    (GE_TAU, True): "⊒_τ",
    (HELPER, True): "⊐_@",
    (SMGE, True): "≫·⊒_τ",
}


@dataclass(frozen=True, eq=False)
class ProofTrace:
    rule: str
    lhs: Term
    rhs: Term
    X: frozenset = frozenset()
    rel: str = GT
    children: tuple["ProofTrace", ...] = ()
    info: dict = field(default_factory=dict)
    plain: bool = False

    def as_rel(self, rel: str) -> "ProofTrace":
        return self if rel == self.rel else replace(self, rel=rel)

    def nodes(self):
        yield self
        for child in self.children:
            yield from child.nodes()

    def rules_used(self) -> set[str]:
        return {n.rule for n in self.nodes()}

    def __str__(self) -> str:
        return format_trace(self)


def _format_x(X) -> str:
    return "{" + ", ".join(sorted(v.name for v in X)) + "}"


def _format_info(node: ProofTrace) -> str:
    parts = []
    for key, value in node.info.items():
        if isinstance(value, Term):
            value = show(value)
        elif isinstance(value, tuple) and value and isinstance(value[0], Term):
            value = "(" + ", ".join(show(v) for v in value) + ")"
        elif key == "matching":
            value = " ".join(f"{j + 1}{'=' if kind == '=' else '<'}{i + 1}" for j, i, kind in value)
        parts.append(f"{key}: {value}")
    return f" ({'; '.join(parts)})" if parts else ""


def format_trace(trace: ProofTrace, indent: int = 0) -> str:
    lines: list[str] = []

    def walk(node: ProofTrace, depth: int):
        symbol = _SYMBOLS[(node.rel, node.plain)]
        lines.append(
            f"{'  ' * depth}{node.rule} {show(node.lhs)} {symbol} {show(node.rhs)} "
            f"[X = {_format_x(node.X)}]{_format_info(node)}"
        )
        for child in node.children:
            walk(child, depth + 1)

    walk(trace, indent)
    return "\n".join(lines)
