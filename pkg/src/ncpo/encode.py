"""Symbolic encoding of orientability into quantifier-free linear integer
arithmetic with booleans.

Every parameter becomes a solver variable: one integer per symbol
(precedence) and base type (level), one boolean per symbol for status and
size, per argument for accessibility, per base type for being basic.  Each
comparison reachable from a rule gets a definitional boolean, implied by the
disjunction of the rule instances that could derive it.

The formula language is a small tuple AST; :func:`to_smtlib` prints it and
:func:`evaluate` computes its value under concrete parameters.
"""

from __future__ import annotations

from typing import Iterable

from .extensions import lex_candidates, mul_search
from .simple_types import Arrow, Base, SimpleType, arrow, base_names, decompose
from .structure import _nv, asubt_paths, bsubt_candidates, structsm_witnesses
from .terms import App, FreeVar, Fun, Lam, Term, fresh_var, instantiate, is_normal
from .type_order import pos_sets, spos

TRUE = ("true",)
FALSE = ("false",)
EMPTY: frozenset = frozenset()


class EncodingTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Formula constructors


def AND(*parts):
    out = []
    for p in parts:
        if p == FALSE:
            return FALSE
        if p == TRUE:
            continue
        if p[0] == "and":
            out.extend(p[1])
        else:
            out.append(p)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return ("and", tuple(out))


def OR(*parts):
    out = []
    for p in parts:
        if p == TRUE:
            return TRUE
        if p == FALSE:
            continue
        if p[0] == "or":
            out.extend(p[1])
        else:
            out.append(p)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return ("or", tuple(out))


def NOT(p):
    if p == TRUE:
        return FALSE
    if p == FALSE:
        return TRUE
    if p[0] == "not":
        return p[1]
    return ("not", p)


def IMPLIES(a, b):
    if a == FALSE or b == TRUE:
        return TRUE
    if a == TRUE:
        return b
    if b == FALSE:
        return NOT(a)
    return ("=>", a, b)


def IFF(a, b):
    if a == b:
        return TRUE
    return AND(IMPLIES(a, b), IMPLIES(b, a))


def INT_GT(x: str, y: str):
    return FALSE if x == y else ("gt", x, y)


def INT_GE(x: str, y: str):
    return TRUE if x == y else ("ge", x, y)


def INT_EQ(x: str, y: str):
    return TRUE if x == y else ("eq", x, y)


def MUL(eq, rel):
    """Multiset decrease over an equality matrix of constants and a relation matrix."""
    m = len(eq)
    n = len(eq[0]) if eq else len(rel[0]) if rel else 0
    if m == 0:
        return FALSE
    if n == 0:
        return TRUE
    return ("mul", tuple(tuple(row) for row in eq), tuple(tuple(row) for row in rel))


def formula_size(f) -> int:
    op = f[0]
    if op in ("and", "or"):
        return 1 + sum(formula_size(p) for p in f[1])
    if op == "not":
        return 1 + formula_size(f[1])
    if op == "=>":
        return 1 + formula_size(f[1]) + formula_size(f[2])
    if op == "mul":
        return 1 + sum(formula_size(p) for row in f[2] for p in row)
    return 1


# ---------------------------------------------------------------------------
# Encoder


class Encoding:
    """Encoded problem: variables, global constraints, definitions, roots."""

    def __init__(self, problem, optimized_eq: bool = True, min_k: int = 0, budget: int = 500_000):
        self.problem = problem
        self.optimized_eq = optimized_eq
        self.min_k = min_k
        self.budget = budget
        self.symbols = list(problem.signature)
        self.bases = list(problem.base_types)
        self._sym = {f: i for i, f in enumerate(self.symbols)}
        self._base = {b: i for i, b in enumerate(self.bases)}
        self.defs: list = []
        self.def_keys: list = []
        self._memo: dict = {}
        self._active: set = set()
        self._type_memo: dict = {}
        self.size = 0
        self.globals: list = []
        self.roots: list = []

    # variable names -------------------------------------------------------

    def prec(self, f: str) -> str:
        return f"p{self._sym[f]}"

    def level(self, b: str) -> str:
        return f"l{self._base[b]}"

    def mul(self, f: str):
        return ("b", f"mul{self._sym[f]}")

    def big(self, f: str):
        return ("b", f"big{self._sym[f]}")

    def acc(self, f: str, i: int):
        return ("b", f"acc{self._sym[f]}_{i}")

    def basic(self, b: str):
        return ("b", f"basic{self._base[b]}")

    def int_vars(self) -> list[str]:
        return [self.prec(f) for f in self.symbols] + [self.level(b) for b in self.bases]

    def bool_vars(self) -> list[str]:
        out = []
        for f in self.symbols:
            out += [self.mul(f)[1], self.big(f)[1]]
            n = len(decompose(self.problem.signature[f].type)[0])
            out += [self.acc(f, i)[1] for i in range(1, n + 1)]
        out += [self.basic(b)[1] for b in self.bases]
        return out

    # symbolic type order ----------------------------------------------------

    def level_gt(self, a: str, b: str):
        return INT_GT(self.level(a), self.level(b))

    def type_gt(self, t: SimpleType, u: SimpleType):
        key = ("gt", t, u)
        if key not in self._type_memo:
            if isinstance(t, Base):
                out = self.level_gt(t.name, u.name) if isinstance(u, Base) else FALSE
            else:
                same_dom = isinstance(u, Arrow) and u.dom == t.dom
                out = OR(self.type_geq(t.cod, u), self.type_gt(t.cod, u.cod) if same_dom else FALSE)
            self._type_memo[key] = out
        return self._type_memo[key]

    def type_geq(self, t: SimpleType, u: SimpleType):
        return TRUE if t == u else self.type_gt(t, u)

    def gtdot(self, t: SimpleType, u: SimpleType):
        key = ("dot", t, u)
        if key not in self._type_memo:
            if isinstance(t, Base):
                out = self.level_gt(t.name, u.name) if isinstance(u, Base) else FALSE
            else:
                same_dom = isinstance(u, Arrow) and u.dom == t.dom
                out = OR(
                    self.geqdot(t.dom, u),
                    self.geqdot(t.cod, u),
                    self.type_gt(t.cod, u.cod) if same_dom else FALSE,
                )
            self._type_memo[key] = out
        return self._type_memo[key]

    def geqdot(self, t: SimpleType, u: SimpleType):
        return TRUE if t == u else self.gtdot(t, u)

    def dominates(self, a: str, ty: SimpleType):
        return AND(*(self.level_gt(a, b) for b in dict.fromkeys(base_names(ty)) if b != a))

    # judgments ----------------------------------------------------------------

    def _define(self, key, build):
        if key in self._memo:
            return self._memo[key]
        if key in self._active:
            return FALSE
        self._active.add(key)
        try:
            body = build()
        finally:
            self._active.discard(key)
        if body in (TRUE, FALSE):
            self._memo[key] = body
            return body
        self.size += formula_size(body)
        if self.size > self.budget:
            raise EncodingTooLarge(f"encoding exceeds {self.budget} nodes")
        ref = ("d", len(self.defs))
        self.defs.append(body)
        self.def_keys.append(key)
        self._memo[key] = ref
        return ref

    def gt(self, s: Term, t: Term, X: frozenset = EMPTY):
        return self._define((s, t, X), lambda: self._gt_cases(s, t, X))

    def gt_tau(self, s, t, X=EMPTY):
        return AND(self.type_geq(s.type, t.type), self.gt(s, t, X))

    def ge(self, s, t, X=EMPTY):
        return TRUE if s == t else self.gt(s, t, X)

    def ge_tau(self, s, t, X=EMPTY):
        return TRUE if s == t else self.gt_tau(s, t, X)

    def _gt_cases(self, s: Term, t: Term, X: frozenset):
        if not _nv(s):
            return FALSE
        if isinstance(s, Fun):
            f = s.name
            return OR(
                AND(self.big(f), self._big_cases(s, t, X)),
                AND(NOT(self.big(f)), self._small_cases(s, t, X)),
            )
        if isinstance(s, App):
            return self._app_cases(s, t, X)
        if isinstance(s, Lam):
            return self._lam_cases(s, t, X)
        return FALSE

    def _in_x(self, t, X):
        return TRUE if isinstance(t, FreeVar) and t in X else FALSE

    def _big_cases(self, s: Fun, t: Term, X):
        f = s.name
        cases = [self._in_x(t, X), self._fb_subterm(s, t)]
        if isinstance(t, Fun):
            g = t.name
            cases.append(AND(INT_GT(self.prec(f), self.prec(g)), *(self.gt(s, u, X) for u in t.args)))
            cases.append(AND(INT_EQ(self.prec(f), self.prec(g)), self._fb_eq(s, t, X)))
        elif isinstance(t, App):
            cases.append(AND(self.gt(s, t.fun, X), self.gt(s, t.arg, X)))
        elif isinstance(t, Lam):
            z = fresh_var(t.var_type, s, t, X)
            cases.append(self.gt(s, instantiate(t.body, z), X | {z}))
        return OR(*cases)

    def _fb_subterm(self, s: Fun, t: Term):
        cases = []
        for ti in s.args:
            firsts = [(ti, TRUE)]
            if _nv(ti):
                firsts += [(w, self.basic(w.type.name)) for w in bsubt_candidates(ti)]
            for w1, guard1 in firsts:
                cases.append(AND(guard1, self.ge_tau(w1, t)))
                for w2, path in asubt_paths(w1):
                    guard2 = AND(*(self.acc(g, j) for g, j in path))
                    cases.append(AND(guard1, guard2, self.ge_tau(w2, t)))
        return OR(*cases)

    def _arg_rel(self, ti: Term, uj: Term, X: frozenset, structural: bool):
        cases = [self.gt_tau(ti, uj)]
        if structural:
            for w, path, k in structsm_witnesses(ti, X):
                if k < self.min_k:
                    continue
                if w != uj and not is_normal(w):
                    continue
                cases.append(AND(*(self.acc(g, j) for g, j in path), self.ge_tau(w, uj)))
        return OR(*cases)

    def _ext(self, s: Fun, t: Fun, X, structural: bool, lex_tail: bool):
        ts, us = s.args, t.args
        eq = [[ti == uj for uj in us] for ti in ts]
        rel = [[self._arg_rel(ti, uj, X, structural) for uj in us] for ti in ts]
        mul_case = MUL(eq, rel) if ts else FALSE
        lex_cases = []
        for i in lex_candidates(len(ts), len(us), lambda a, b: eq[a][b]):
            tail = AND(*(self.gt(s, u, X) for u in us[i + 1:])) if lex_tail else TRUE
            lex_cases.append(AND(rel[i][i], tail))
        f = s.name
        return OR(AND(self.mul(f), mul_case), AND(NOT(self.mul(f)), OR(*lex_cases)))

    def _fb_eq(self, s: Fun, t: Fun, X):
        if self.optimized_eq:
            return self._ext(s, t, X, True, True)
        return AND(*(self.gt(s, u, X) for u in t.args), self._ext(s, t, X, True, False))

    def _small_cases(self, s: Fun, t: Term, X):
        f = s.name
        cases = [self._in_x(t, X)]
        cases += [self.ge_tau(ti, t) for ti in s.args]
        if isinstance(t, Fun):
            g = t.name
            above = [self.gt_tau(s, u, X) for u in t.args]
            cases.append(AND(INT_GT(self.prec(f), self.prec(g)), *above))
            cases.append(AND(INT_EQ(self.prec(f), self.prec(g)), *above, self._ext(s, t, X, False, False)))
        elif isinstance(t, App):
            cases.append(AND(self.gt_tau(s, t.fun, X), self.gt_tau(s, t.arg, X)))
        return OR(*cases)

    def _helper(self, s: App, v: Term, X):
        return OR(self.gt_tau(s.fun, v, X), self.ge_tau(s.arg, v, X), self.gt_tau(s, v, X))

    def _app_cases(self, s: App, t: Term, X):
        cases = [self._in_x(t, X), self.ge(s.fun, t, X), self.ge_tau(s.arg, t, X)]
        if isinstance(t, App):
            same = self.gt(s.arg, t.arg, X) if s.fun == t.fun else FALSE
            cases.append(OR(same, AND(self._helper(s, t.fun, X), self._helper(s, t.arg, X))))
        elif isinstance(t, Lam):
            z = fresh_var(t.var_type, s, t, X)
            cases.append(self.gt(s, instantiate(t.body, z), X))
        elif isinstance(t, Fun):
            cases.append(AND(NOT(self.big(t.name)), *(self.gt_tau(s, v, X) for v in t.args)))
        return OR(*cases)

    def _lam_cases(self, s: Lam, t: Term, X):
        z = fresh_var(s.var_type, s, t, X)
        body = instantiate(s.body, z)
        cases = [self._in_x(t, X), self.ge_tau(body, t, X)]
        if isinstance(t.type, Arrow) and t.type.dom == s.var_type and not isinstance(t, Lam):
            cases.append(self.ge_tau(body, App(t, z), X))
        if isinstance(t, Lam):
            if t.var_type == s.var_type:
                cases.append(self.gt(body, instantiate(t.body, z), X))
            else:
                y = fresh_var(t.var_type, s, t, X)
                cases.append(self.gt(s, instantiate(t.body, y), X))
        elif isinstance(t, Fun):
            cases.append(AND(NOT(self.big(t.name)), *(self.gt_tau(s, v, X) for v in t.args)))
        return OR(*cases)

    # global conditions ----------------------------------------------------------

    def build_globals(self) -> None:
        sig = self.problem.signature
        syms, bases = self.symbols, self.bases
        out = []
        for i, f in enumerate(syms):
            for g in syms[i + 1:]:
                out.append(IMPLIES(INT_EQ(self.prec(f), self.prec(g)), IFF(self.mul(f), self.mul(g))))
        for f in syms:
            for g in syms:
                if f != g:
                    out.append(IMPLIES(AND(INT_GE(self.prec(f), self.prec(g)), self.big(g)), self.big(f)))
        shapes = {f: decompose(sig[f].type) for f in syms}
        for f in syms:
            doms, res = shapes[f]
            a = res.name
            for i, ti in enumerate(doms, 1):
                plus, _, occ = pos_sets(a, ti)
                ok = self.dominates(a, ti) if occ <= plus else FALSE
                out.append(IMPLIES(self.acc(f, i), ok))
        for a in bases:
            below = [IMPLIES(self.level_gt(a, b), self.basic(b)) for b in bases if b != a]
            args = []
            for f in syms:
                doms, res = shapes[f]
                if res.name != a:
                    continue
                for i, ti in enumerate(doms, 1):
                    if ti == Base(a):
                        continue
                    ok = self.basic(ti.name) if isinstance(ti, Base) else FALSE
                    args.append(IMPLIES(self.acc(f, i), ok))
            out.append(IMPLIES(self.basic(a), AND(*below, *args)))
        for f in syms:
            doms, res = shapes[f]
            a = res.name
            ar, n = sig[f].arity, len(doms)
            if ar == n:
                cond = AND(*(AND(self.dominates(a, ti), TRUE if not spos(a, ti) else FALSE) for ti in doms))
            else:
                rest = arrow(*doms[ar:], Base(a))
                cond = AND(
                    *(NOT(self.acc(f, i)) for i in range(1, n + 1)),
                    *(AND(self.dominates(a, ti), self.geqdot(rest, ti)) for ti in doms[:ar]),
                )
            out.append(IMPLIES(NOT(self.big(f)), cond))
        self.globals = [g for g in out if g != TRUE]

    def add_rule(self, rule) -> None:
        self.roots.append(self.gt(rule.lhs, rule.rhs, EMPTY))


def encode(problem, optimized_eq: bool = True, min_k: int = 0, budget: int = 500_000) -> Encoding:
    enc = Encoding(problem, optimized_eq, min_k, budget)
    enc.build_globals()
    for rule in problem.rules:
        enc.add_rule(rule)
    return enc


# ---------------------------------------------------------------------------
# SMT-LIB output


class _Printer:
    def __init__(self):
        self.aux: list[str] = []

    def fresh(self, prefix: str) -> str:
        name = f"{prefix}{len(self.aux)}"
        self.aux.append(name)
        return name

    def show(self, f) -> str:
        op = f[0]
        if op == "true":
            return "true"
        if op == "false":
            return "false"
        if op == "b":
            return f[1]
        if op == "d":
            return f"d{f[1]}"
        if op == "gt":
            return f"(> {f[1]} {f[2]})"
        if op == "ge":
            return f"(>= {f[1]} {f[2]})"
        if op == "eq":
            return f"(= {f[1]} {f[2]})"
        if op == "not":
            return f"(not {self.show(f[1])})"
        if op in ("and", "or"):
            return f"({op} {' '.join(self.show(p) for p in f[1])})"
        if op == "=>":
            return f"(=> {self.show(f[1])} {self.show(f[2])})"
        if op == "mul":
            return self.show_mul(f[1], f[2])
        raise ValueError(f"unknown formula node {op!r}")

    def show_mul(self, eq, rel) -> str:
        m, n = len(eq), len(eq[0])
        gamma = [[self.fresh("g") for _ in range(n)] for _ in range(m)]
        eps = [self.fresh("e") for _ in range(m)]
        parts = []
        for j in range(n):
            column = [gamma[i][j] for i in range(m)]
            parts.append(_exactly_one(column))
        for i in range(m):
            parts.append(f"(=> {eps[i]} {_exactly_one(gamma[i])})")
            for j in range(n):
                when_kept = "true" if eq[i][j] else "false"
                parts.append(f"(=> (and {gamma[i][j]} {eps[i]}) {when_kept})")
                parts.append(f"(=> (and {gamma[i][j]} (not {eps[i]})) {self.show(rel[i][j])})")
        parts.append(f"(or {' '.join(f'(not {e})' for e in eps)})")
        return f"(and {' '.join(parts)})"


def _exactly_one(names: list[str]) -> str:
    if len(names) == 1:
        return names[0]
    at_least = f"(or {' '.join(names)})"
    pairs = [f"(not (and {a} {b}))" for k, a in enumerate(names) for b in names[k + 1:]]
    return f"(and {at_least} {' '.join(pairs)})"


def to_smtlib(enc: Encoding) -> str:
    pr = _Printer()
    body: list[str] = []
    n_sym, n_base = len(enc.symbols), len(enc.bases)
    for f in enc.symbols:
        body.append(f"(assert (and (<= 0 {enc.prec(f)}) (< {enc.prec(f)} {max(n_sym, 1)})))")
    for b in enc.bases:
        body.append(f"(assert (and (<= 0 {enc.level(b)}) (< {enc.level(b)} {max(n_base, 1)})))")
    for g in enc.globals:
        body.append(f"(assert {pr.show(g)})")
    for k, d in enumerate(enc.defs):
        body.append(f"(assert (=> d{k} {pr.show(d)}))")
    for r in enc.roots:
        body.append(f"(assert {pr.show(r)})")

    head = ["(set-option :produce-models true)", "(set-logic QF_LIA)"]
    for i, f in enumerate(enc.symbols):
        head.append(f"; p{i} mul{i} big{i} acc{i}_* : {f}")
    for i, b in enumerate(enc.bases):
        head.append(f"; l{i} basic{i} : {b}")
    head += [f"(declare-const {v} Int)" for v in enc.int_vars()]
    head += [f"(declare-const {v} Bool)" for v in enc.bool_vars()]
    head += [f"(declare-const d{k} Bool)" for k in range(len(enc.defs))]
    head += [f"(declare-const {v} Bool)" for v in pr.aux]
    return "\n".join(head + body + ["(check-sat)", "(get-model)"]) + "\n"


def encode_problem(problem, **options) -> str:
    """Complete SMT-LIB 2 script deciding whether some parameters orient every rule."""
    return to_smtlib(encode(problem, **options))


# ---------------------------------------------------------------------------
# Evaluation under concrete parameters


def assignment_from_params(enc: Encoding, params) -> dict:
    """Concrete values for every parameter variable of ``enc``."""
    env = {}
    for f in enc.symbols:
        env[enc.prec(f)] = params.prec.get(f, 0)
        env[enc.mul(f)[1]] = params.is_mul(f)
        env[enc.big(f)[1]] = params.is_big(f)
        n = len(decompose(enc.problem.signature[f].type)[0])
        for i in range(1, n + 1):
            env[enc.acc(f, i)[1]] = params.is_acc(f, i)
    for b in enc.bases:
        env[enc.level(b)] = params.levels.levels.get(b, 0)
        env[enc.basic(b)[1]] = params.is_basic(b)
    return env


class Evaluator:
    def __init__(self, enc: Encoding, env: dict):
        self.enc = enc
        self.env = env
        self.defs: dict[int, bool] = {}

    def value(self, f) -> bool:
        op = f[0]
        if op == "true":
            return True
        if op == "false":
            return False
        if op == "b":
            return bool(self.env[f[1]])
        if op == "d":
            k = f[1]
            if k not in self.defs:
                self.defs[k] = self.value(self.enc.defs[k])
            return self.defs[k]
        if op == "gt":
            return self.env[f[1]] > self.env[f[2]]
        if op == "ge":
            return self.env[f[1]] >= self.env[f[2]]
        if op == "eq":
            return self.env[f[1]] == self.env[f[2]]
        if op == "not":
            return not self.value(f[1])
        if op == "and":
            return all(self.value(p) for p in f[1])
        if op == "or":
            return any(self.value(p) for p in f[1])
        if op == "=>":
            return (not self.value(f[1])) or self.value(f[2])
        if op == "mul":
            eq, rel = f[1], f[2]
            found = mul_search(
                len(eq), len(eq[0]), lambda i, j: eq[i][j], lambda i, j: True if self.value(rel[i][j]) else None
            )
            return found is not None
        raise ValueError(f"unknown formula node {op!r}")


def evaluate(enc: Encoding, params) -> tuple[bool, list[bool]]:
    """``(globals hold, [root value per rule])`` under concrete parameters."""
    ev = Evaluator(enc, assignment_from_params(enc, params))
    return all(ev.value(g) for g in enc.globals), [ev.value(r) for r in enc.roots]
