"""Reader and writer for the equational fragment of TPTP THF.

Accepted statements::

    thf(name, type, a: $tType).
    thf(name, type, f: (a > b) > a > b).
    thf(name, axiom, ![X: a, F: a > a]: ((f @ X) = (g @ X @ c))).

Equations are oriented left to right.  Quantified variables become free
variables of the rule, ``^[X: T]: t`` becomes an abstraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator

from .simple_types import Arrow, Base, SimpleType, arity_of
from .terms import (
    App,
    Bound,
    FreeVar,
    Fun,
    IllTyped,
    Lam,
    Term,
    abstract,
    app_spine,
    apply,
    beta_eta_normalize,
    is_normal,
    show,
)


class THFError(ValueError):
    """Problem with the input file: syntax, typing or an unsupported construct."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class InvalidRules(ValueError):
    def __init__(self, report: list[str]):
        self.report = report
        super().__init__("; ".join(report))


@dataclass(frozen=True)
class SymbolDecl:
    type: SimpleType
    arity: int = 0


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    name: str = ""

    def __str__(self) -> str:
        return f"{show(self.lhs)} -> {show(self.rhs)}"


@dataclass
class Problem:
    base_types: tuple[str, ...]
    signature: dict[str, SymbolDecl]
    rules: list[Rule] = field(default_factory=list)
    source: str = "<input>"
    arity_fixed: bool = False

    def symbol(self, name: str, *args: Term) -> Term:
        """Build ``f(args[:ar]) args[ar:]`` for a declared symbol."""
        decl = self.signature[name]
        head = Fun(name, decl.type, args[: decl.arity])
        return apply(head, *args[decl.arity:])

    def arity(self, name: str) -> int:
        return self.signature[name].arity


# ---------------------------------------------------------------------------
# Lexing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<name>\$?[A-Za-z][A-Za-z0-9_]*|'(?:[^'\\]|\\.)+')
  | (?P<op><=>|=>|!=|[()\[\],.:>@=!^&|~])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise THFError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, text: str, source: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.source = source
        self.base_types: list[str] = []
        self.signature: dict[str, SymbolDecl] = {}
        self.rules: list[Rule] = []

    # token helpers
    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> THFError:
        tok = tok or self.peek()
        return THFError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            shown = tok.text or "end of input"
            raise THFError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return tok

    def name(self) -> Token:
        tok = self.next()
        if tok.kind != "name":
            raise THFError(f"expected a name, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    # statements
    def problem(self) -> Problem:
        seen_names = set()
        while self.peek().kind != "eof":
            start = self.peek()
            if start.text != "thf":
                raise self.error(f"expected 'thf', found {start.text!r}")
            self.next()
            self.expect("(")
            label = self.name()
            self.expect(",")
            role = self.name()
            self.expect(",")
            if role.text == "type":
                self.type_decl()
            elif role.text == "axiom":
                if label.text in seen_names:
                    raise THFError(f"duplicate rule name {label.text!r}", label.line, label.col)
                seen_names.add(label.text)
                self.axiom(label.text)
            else:
                raise THFError(f"unsupported formula role {role.text!r}", role.line, role.col)
            self.expect(")")
            self.expect(".")
        return Problem(tuple(self.base_types), dict(self.signature), self.rules, self.source)

    def type_decl(self) -> None:
        depth = 0
        while self.peek().text == "(":
            self.next()
            depth += 1
        tok = self.name()
        self.expect(":")
        if self.peek().text == "$tType":
            self.next()
            if tok.text in self.base_types or tok.text in self.signature:
                raise THFError(f"{tok.text!r} declared twice", tok.line, tok.col)
            self.base_types.append(tok.text)
        else:
            if tok.text[0].isupper():
                raise THFError(f"symbol names must start lowercase: {tok.text!r}", tok.line, tok.col)
            if tok.text in self.signature or tok.text in self.base_types:
                raise THFError(f"{tok.text!r} declared twice", tok.line, tok.col)
            self.signature[tok.text] = SymbolDecl(self.type_expr())
        for _ in range(depth):
            self.expect(")")

    def type_expr(self) -> SimpleType:
        left = self.type_atom()
        if self.peek().text == ">":
            self.next()
            return Arrow(left, self.type_expr())
        return left

    def type_atom(self) -> SimpleType:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            ty = self.type_expr()
            self.expect(")")
            return ty
        tok = self.name()
        if tok.text not in self.base_types:
            raise THFError(f"undeclared type {tok.text!r}", tok.line, tok.col)
        return Base(tok.text)

    def axiom(self, label: str) -> None:
        lhs, rhs = self.formula({})
        if lhs.type != rhs.type:
            raise THFError(f"sides of {label!r} have different types {lhs.type} and {rhs.type}")
        self.rules.append(Rule(lhs, rhs, label))

    def formula(self, rule_vars: dict[str, FreeVar]) -> tuple[Term, Term]:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            bound = self.binders()
            self.expect(":")
            scope = dict(rule_vars)
            for name, ty, where in bound:
                if name in scope:
                    raise THFError(f"variable {name!r} quantified twice", where.line, where.col)
                scope[name] = FreeVar(name, ty)
            return self.formula(scope)
        if tok.text == "(" and self._parenthesized_formula():
            self.next()
            eq = self.formula(rule_vars)
            self.expect(")")
            return eq
        lhs = self.chain(rule_vars, [])
        op = self.peek()
        if op.text == "=":
            self.next()
            rhs = self.chain(rule_vars, [])
            return lhs, rhs
        if op.text in ("|", "&", "=>", "<=>", "~", "!="):
            raise THFError("only unit equations are supported", op.line, op.col)
        raise THFError("only equality is supported as a predicate", tok.line, tok.col)

    def _parenthesized_formula(self) -> bool:
        """Whether the '(' at the cursor wraps a whole formula."""
        depth = 0
        i = self.pos
        while True:
            tok = self.tokens[i]
            if tok.kind == "eof":
                return False
            if tok.text in ("(", "["):
                depth += 1
            elif tok.text in (")", "]"):
                depth -= 1
                if depth == 0:
                    return False
            elif depth == 1 and tok.text in ("=", "!", "|", "&", "=>", "<=>", "!="):
                if tok.text == "!" and self.tokens[i - 1].text != "(":
                    i += 1
                    continue
                return True
            i += 1

    def binders(self) -> list[tuple[str, SimpleType, Token]]:
        self.expect("[")
        out = []
        while True:
            tok = self.name()
            if not tok.text[0].isupper():
                raise THFError(f"variable names must start uppercase: {tok.text!r}", tok.line, tok.col)
            self.expect(":")
            out.append((tok.text, self.type_expr(), tok))
            if self.peek().text == ",":
                self.next()
                continue
            self.expect("]")
            return out

    # terms: bound is a stack of (name, FreeVar placeholder) for lambda binders
    def chain(self, rule_vars: dict[str, FreeVar], bound: list[tuple[str, FreeVar]]) -> Term:
        head = self.unitary(rule_vars, bound)
        while self.peek().text == "@":
            at = self.next()
            arg = self.unitary(rule_vars, bound)
            try:
                head = App(head, arg)
            except IllTyped as exc:
                raise THFError(f"type mismatch: {exc}", at.line, at.col) from None
        return head

    def unitary(self, rule_vars: dict[str, FreeVar], bound: list[tuple[str, FreeVar]]) -> Term:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            t = self.chain(rule_vars, bound)
            self.expect(")")
            return t
        if tok.text == "^":
            self.next()
            binders = self.binders()
            self.expect(":")
            placeholders = []
            inner = list(bound)
            for name, ty, _ in binders:
                z = FreeVar(f"%lam{len(inner)}:{name}", ty)
                placeholders.append((name, z))
                inner.append((name, z))
            body = self.unitary(rule_vars, inner)
            for name, z in reversed(placeholders):
                body = abstract(body, z, name)
            return body
        tok = self.name()
        for name, z in reversed(bound):
            if name == tok.text:
                return z
        if tok.text in rule_vars:
            return rule_vars[tok.text]
        if tok.text in self.signature:
            return Fun(tok.text, self.signature[tok.text].type, ())
        if tok.text[0].isupper():
            raise THFError(f"unbound variable {tok.text!r}", tok.line, tok.col)
        raise THFError(f"unknown symbol {tok.text!r}", tok.line, tok.col)


def parse_problem(text: str, source: str = "<input>") -> Problem:
    """Parse THF text into a problem where every symbol has arity 0."""
    return _Parser(text, source).problem()


def load_problem(path) -> Problem:
    """Parse, fix arities and validate the rules of a THF file."""
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    return validate_rules(infer_arities(parse_problem(text, str(path))))


def parse_type(text: str, base_types) -> SimpleType:
    parser = _Parser(text, "<type>")
    parser.base_types = list(base_types)
    ty = parser.type_expr()
    if parser.peek().kind != "eof":
        raise parser.error("trailing input after type")
    return ty


# ---------------------------------------------------------------------------
# Arities


def _occurrences(t: Term) -> Iterator[tuple[str, int]]:
    """``(symbol, number of arguments)`` for every symbol occurrence."""
    head, args = app_spine(t)
    if isinstance(head, Fun):
        yield head.name, len(head.args) + len(args)
        for a in head.args:
            yield from _occurrences(a)
    elif isinstance(head, Lam):
        yield from _occurrences(head.body)
    for a in args:
        yield from _occurrences(a)


def infer_arities(p: Problem) -> Problem:
    """Give every symbol the largest arity all of its occurrences allow."""
    counts: dict[str, int] = {}
    for rule in p.rules:
        for side in (rule.lhs, rule.rhs):
            for name, n in _occurrences(side):
                counts[name] = min(counts.get(name, n), n)
    signature = {
        name: SymbolDecl(decl.type, min(counts.get(name, 0), arity_of(decl.type)))
        for name, decl in p.signature.items()
    }

    def rebuild(t: Term) -> Term:
        head, args = app_spine(t)
        args = [rebuild(a) for a in args]
        if isinstance(head, Fun):
            inner = [rebuild(a) for a in head.args] + args
            ar = signature[head.name].arity
            return apply(Fun(head.name, head.sym_type, inner[:ar]), *inner[ar:])
        if isinstance(head, Lam):
            head = Lam(head.var_type, rebuild(head.body), head.hint)
        return apply(head, *args)

    rules = [Rule(rebuild(r.lhs), rebuild(r.rhs), r.name) for r in p.rules]
    return replace(p, signature=signature, rules=rules, arity_fixed=True)


def validate_rules(p: Problem) -> Problem:
    """Check every rule is a rewrite rule over normal forms; raise otherwise."""
    report = []
    for rule in p.rules:
        label = rule.name or str(rule)
        head, _ = app_spine(rule.lhs)
        if isinstance(head, (FreeVar, Bound)):
            report.append(f"{label}: left-hand side is headed by a variable")
        if rule.lhs.type != rule.rhs.type:
            report.append(f"{label}: sides have types {rule.lhs.type} and {rule.rhs.type}")
        extra = rule.rhs.fv - rule.lhs.fv
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            report.append(f"{label}: right-hand side variables {names} do not occur on the left")
        for side, t in (("left", rule.lhs), ("right", rule.rhs)):
            if not is_normal(t):
                report.append(
                    f"{label}: {side}-hand side {show(t)} is not βη-normal; normal form {show(beta_eta_normalize(t))}"
                )
    if report:
        raise InvalidRules(report)
    return p


# ---------------------------------------------------------------------------
# Printing


def format_type(ty: SimpleType) -> str:
    if isinstance(ty, Base):
        return ty.name
    dom = format_type(ty.dom)
    if isinstance(ty.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} > {format_type(ty.cod)}"


def format_term(t: Term, env: list[str] | None = None, taken: set[str] | None = None) -> str:
    """Application-only THF rendering of ``t``."""
    env = [] if env is None else env
    taken = {v.name for v in t.fv} if taken is None else taken
    if isinstance(t, FreeVar):
        return t.name
    if isinstance(t, Bound):
        return env[-1 - t.index]
    if isinstance(t, Fun):
        if not t.args:
            return t.name
        return "(" + " @ ".join([t.name] + [format_term(a, env, taken) for a in t.args]) + ")"
    if isinstance(t, App):
        head, args = app_spine(t)
        return "(" + " @ ".join(format_term(x, env, taken) for x in [head] + args) + ")"
    n = len(env)
    name = f"X{n}"
    while name in taken:
        n += 1
        name = f"X{n}"
    body = format_term(t.body, env + [name], taken)
    return f"(^[{name}: {format_type(t.var_type)}]: {body})"


def format_problem(p: Problem) -> str:
    lines = [f"% {p.source}"]
    for b in p.base_types:
        lines.append(f"thf({b}_type, type, {b}: $tType).")
    for name, decl in p.signature.items():
        lines.append(f"thf({name}_decl, type, {name}: {format_type(decl.type)}).")
    for i, rule in enumerate(p.rules):
        label = rule.name or f"rule{i}"
        variables = sorted(rule.lhs.fv | rule.rhs.fv, key=lambda v: v.name)
        eq = f"({format_term(rule.lhs)} = {format_term(rule.rhs)})"
        if variables:
            binders = ", ".join(f"{v.name}: {format_type(v.type)}" for v in variables)
            eq = f"![{binders}]: {eq}"
        lines.append(f"thf({label}, axiom, {eq}).")
    return "\n".join(lines) + "\n"
