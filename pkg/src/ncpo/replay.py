"""Node-by-node re-validation of proof traces.

The checker never searches: every premise must be present as a child with
exactly the expected judgment, and every side condition is recomputed.
"""

from __future__ import annotations

from .extensions import check_mul_matching
from .params import levels_of
from .simple_types import Arrow
from .structure import _nv, asubt_targets, bsubt_targets, structsm
from .terms import App, FreeVar, Fun, Lam, Term, instantiate, is_eta_redex, is_normal, shift
from .trace import GE, GE_TAU, GT, GT_TAU, HELPER, REFL, SMGE, ProofTrace
from .type_order import _type_geq

EMPTY: frozenset = frozenset()


class ReplayError(AssertionError):
    pass


class Checker:
    def __init__(self, params, plain: bool = False, optimized_eq: bool = True, min_k: int = 0):
        self.params = params
        self.plain = plain
        self.optimized_eq = optimized_eq
        self.min_k = min_k
        self._gt = levels_of(params).gt
        self.checked = 0

    def fail(self, node: ProofTrace, message: str):
        raise ReplayError(f"{node.rule} {node.lhs} / {node.rhs}: {message}")

    def need(self, node, cond: bool, message: str):
        if not cond:
            self.fail(node, message)

    # ------------------------------------------------------------------

    def expect(self, parent, child: ProofTrace, rel: str, lhs: Term, rhs: Term, X) -> None:
        allowed = {GT: (GT,), GT_TAU: (GT_TAU,), GE: (GE,), GE_TAU: (GE_TAU,), HELPER: (HELPER,)}[rel]
        self.need(parent, child.rel in allowed, f"premise has kind {child.rel}, expected {rel}")
        self.need(parent, child.lhs == lhs and child.rhs == rhs, f"premise {child.lhs} / {child.rhs} does not match")
        self.need(parent, child.X == frozenset(X), "premise uses the wrong variable set")
        self.check(child)

    def expect_rel(self, parent, child: ProofTrace, ti: Term, uj: Term, X, structural: bool) -> None:
        if child.rel == SMGE:
            self.need(parent, structural, "structural decrease not allowed here")
            self.need(parent, child.lhs == ti and child.rhs == uj and child.X == X, "argument evidence mismatch")
            self.check(child)
        else:
            self.expect(parent, child, GT_TAU, ti, uj, EMPTY)

    def fresh_ok(self, node: ProofTrace, z, ty) -> None:
        self.need(node, isinstance(z, FreeVar) and z.type == ty, "fresh variable has the wrong type")
        clash = z in node.lhs.fv or z in node.rhs.fv or z in node.X
        self.need(node, not clash, f"variable {z.name} is not fresh")

    def check(self, node: ProofTrace) -> None:
        self.checked += 1
        self.need(node, node.plain == self.plain, "trace built for the other order")
        s, t, X = node.lhs, node.rhs, node.X
        if node.rule == REFL:
            self.need(node, node.rel in (GE, GE_TAU), "reflexivity only proves weak judgments")
            self.need(node, s == t, "sides differ")
            return
        if node.rel in (GT_TAU, GE_TAU):
            self.need(node, _type_geq(self._gt, s.type, t.type), "type does not decrease")
        if node.rel == HELPER:
            return self.check_helper(node)
        if node.rel == SMGE:
            return self.check_smge(node)
        if not self.plain:
            self.need(node, is_normal(s) and is_normal(t), "judgment on non-normal terms")
            self.need(node, _nv(s), "left-hand side is versatile")
        method = getattr(self, "rule_" + _RULE_METHODS.get(node.rule, "unknown"))
        method(node, s, t, X)

    # ------------------------------------------------------------------

    def check_helper(self, node):
        s, v, X = node.lhs, node.rhs, node.X
        self.need(node, isinstance(s, App) and len(node.children) == 1, "malformed helper")
        step = node.info.get("step")
        (child,) = node.children
        if step == "t":
            self.expect(node, child, GT_TAU, s.fun, v, X)
        elif step == "u":
            self.expect(node, child, GE_TAU, s.arg, v, X)
        elif step == "tu":
            self.expect(node, child, GT_TAU, s, v, X)
        else:
            self.fail(node, "unknown helper step")

    def check_smge(self, node):
        w = node.info.get("via")
        self.need(node, isinstance(w, Term), "missing witness")
        self.need(node, structsm(node.lhs, w, node.X, self.params, self.min_k), "witness is not structurally smaller")
        if not self.plain:
            self.need(node, w == node.rhs or is_normal(w), "non-normal witness")
        self.need(node, len(node.children) == 1, "malformed structural step")
        self.expect(node, node.children[0], GE_TAU, w, node.rhs, EMPTY)

    def _big(self, node, s):
        self.need(node, isinstance(s, Fun) and self.params.is_big(s.name), "needs a big head symbol")

    def _small(self, node, s):
        self.need(node, isinstance(s, Fun) and not self.params.is_big(s.name), "needs a small head symbol")

    def _var_in_x(self, node, t, X):
        self.need(node, isinstance(t, FreeVar) and t in X, "variable not in X")
        self.need(node, not node.children, "unexpected premises")

    def _children(self, node, n):
        self.need(node, len(node.children) == n, f"expected {n} premises, got {len(node.children)}")
        return node.children

    # ------------------------------------------------------------------ rules

    def rule_unknown(self, node, s, t, X):
        self.fail(node, "unknown rule")

    def rule_fbv(self, node, s, t, X):
        self._big(node, s)
        self._var_in_x(node, t, X)

    def rule_fb_sub(self, node, s, t, X):
        self._big(node, s)
        i = node.info.get("i", 0)
        self.need(node, 1 <= i <= len(s.args), "argument index out of range")
        w1, w2 = node.info["via"]
        ti = s.args[i - 1]
        if w1 != ti:
            basic_ok = (self.plain or _nv(ti)) and w1 in bsubt_targets(ti, self.params, self.plain)
            self.need(node, basic_ok, "first step is not a basic subterm")
        self.need(node, w2 == w1 or w2 in asubt_targets(w1, self.params), "second step is not accessible")
        (child,) = self._children(node, 1)
        self.expect(node, child, GE_TAU, w2, t, EMPTY)

    def rule_fb_prec(self, node, s, t, X):
        self._big(node, s)
        self.need(node, isinstance(t, Fun) and self.params.prec_gt(s.name, t.name), "precedence does not decrease")
        for child, u in zip(self._children(node, len(t.args)), t.args):
            self.expect(node, child, GT, s, u, X)

    def _ext(self, node, s, t, X, evidence, structural: bool):
        ts, us = s.args, t.args
        status = node.info.get("status")
        self.need(node, status == ("mul" if self.params.is_mul(s.name) else "lex"), "status mismatch")
        if status == "mul":
            matching = node.info["matching"]
            self.need(node, check_mul_matching(len(ts), len(us), matching), "not a multiset decrease")
            strict = [(j, i) for j, i, kind in matching if kind != "="]
            for j, i, kind in matching:
                if kind == "=":
                    self.need(node, ts[i] == us[j], "kept arguments differ")
            self.need(node, len(evidence) == len(strict), "wrong number of argument premises")
            for child, (j, i) in zip(evidence, strict):
                self.expect_rel(node, child, ts[i], us[j], X, structural)
            return []
        i = node.info["i"]
        self.need(node, 1 <= i <= min(len(ts), len(us)), "lexicographic index out of range")
        self.need(node, all(ts[j] == us[j] for j in range(i - 1)), "prefix differs")
        self.need(node, len(evidence) >= 1, "missing argument premise")
        self.expect_rel(node, evidence[0], ts[i - 1], us[i - 1], X, structural)
        return evidence[1:]

    def rule_fb_eq(self, node, s, t, X):
        self._big(node, s)
        self.need(node, isinstance(t, Fun) and self.params.prec_eq(s.name, t.name), "precedences differ")
        variant = node.info.get("variant")
        kids = list(node.children)
        if variant == "full":
            self.need(node, len(kids) >= len(t.args), "missing premises")
            for child, u in zip(kids, t.args):
                self.expect(node, child, GT, s, u, X)
            rest = self._ext(node, s, t, X, kids[len(t.args):], True)
            self.need(node, not rest, "extra premises")
        elif variant == "mul":
            self._ext(node, s, t, X, kids, True)
        elif variant == "lex":
            rest = self._ext(node, s, t, X, kids, True)
            i = node.info["i"]
            later = t.args[i:]
            self.need(node, len(rest) == len(later), "wrong number of trailing premises")
            for child, u in zip(rest, later):
                self.expect(node, child, GT, s, u, X)
        else:
            self.fail(node, "unknown variant")

    def rule_fb_app(self, node, s, t, X):
        self._big(node, s)
        self.need(node, isinstance(t, App), "right-hand side is not an application")
        a, b = self._children(node, 2)
        self.expect(node, a, GT, s, t.fun, X)
        self.expect(node, b, GT, s, t.arg, X)

    def rule_fb_lam(self, node, s, t, X):
        self._big(node, s)
        self.need(node, isinstance(t, Lam), "right-hand side is not an abstraction")
        z = node.info.get("z")
        self.fresh_ok(node, z, t.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GT, s, instantiate(t.body, z), X | {z})

    def rule_app_sub(self, node, s, t, X):
        self.need(node, isinstance(s, App), "left-hand side is not an application")
        (child,) = self._children(node, 1)
        side = node.info.get("side")
        if side == "t":
            self.expect(node, child, GE, s.fun, t, X)
        else:
            self.expect(node, child, GE_TAU, s.arg, t, X)

    def rule_app_eq(self, node, s, t, X):
        self.need(node, isinstance(s, App) and isinstance(t, App), "needs two applications")
        if node.info.get("case") == "arg":
            self.need(node, s.fun == t.fun, "function parts differ")
            (child,) = self._children(node, 1)
            self.expect(node, child, GT, s.arg, t.arg, X)
        else:
            a, b = self._children(node, 2)
            self.expect(node, a, HELPER, s, t.fun, X)
            self.expect(node, b, HELPER, s, t.arg, X)

    def rule_app_lam(self, node, s, t, X):
        self.need(node, isinstance(s, App) and isinstance(t, Lam), "shape mismatch")
        z = node.info.get("z")
        self.fresh_ok(node, z, t.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GT, s, instantiate(t.body, z), X)

    def _small_target(self, node, s, t, X):
        self.need(node, isinstance(t, Fun) and not self.params.is_big(t.name), "needs a small symbol on the right")
        for child, v in zip(self._children(node, len(t.args)), t.args):
            self.expect(node, child, GT_TAU, s, v, X)

    def rule_app_fs(self, node, s, t, X):
        self.need(node, isinstance(s, App), "left-hand side is not an application")
        self._small_target(node, s, t, X)

    def rule_app_var(self, node, s, t, X):
        self.need(node, isinstance(s, App), "left-hand side is not an application")
        self._var_in_x(node, t, X)

    def rule_lam_sub(self, node, s, t, X):
        self.need(node, isinstance(s, Lam), "left-hand side is not an abstraction")
        z = node.info.get("z")
        self.fresh_ok(node, z, s.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GE_TAU, instantiate(s.body, z), t, X)

    def rule_lam_eta(self, node, s, t, X):
        self.need(node, not self.plain, "eta-expanding rule is not part of the plain order")
        self.need(node, isinstance(s, Lam), "left-hand side is not an abstraction")
        self.need(node, isinstance(t.type, Arrow) and t.type.dom == s.var_type, "type mismatch")
        z = node.info.get("z")
        self.fresh_ok(node, z, s.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GE_TAU, instantiate(s.body, z), App(t, z), X)

    def rule_lam_eq(self, node, s, t, X):
        self.need(node, isinstance(s, Lam) and isinstance(t, Lam), "needs two abstractions")
        self.need(node, s.var_type == t.var_type, "binder types differ")
        z = node.info.get("z")
        self.fresh_ok(node, z, s.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GT, instantiate(s.body, z), instantiate(t.body, z), X)

    def rule_lam_neq(self, node, s, t, X):
        self.need(node, isinstance(s, Lam) and isinstance(t, Lam), "needs two abstractions")
        self.need(node, s.var_type != t.var_type, "binder types agree")
        z = node.info.get("z")
        self.fresh_ok(node, z, t.var_type)
        (child,) = self._children(node, 1)
        self.expect(node, child, GT, s, instantiate(t.body, z), X)

    def rule_lam_fs(self, node, s, t, X):
        self.need(node, isinstance(s, Lam), "left-hand side is not an abstraction")
        self._small_target(node, s, t, X)

    def rule_lam_var(self, node, s, t, X):
        self.need(node, isinstance(s, Lam), "left-hand side is not an abstraction")
        self._var_in_x(node, t, X)

    def rule_fs_sub(self, node, s, t, X):
        self._small(node, s)
        i = node.info.get("i", 0)
        self.need(node, 1 <= i <= len(s.args), "argument index out of range")
        (child,) = self._children(node, 1)
        self.expect(node, child, GE_TAU, s.args[i - 1], t, EMPTY)

    def rule_fs_eq(self, node, s, t, X):
        self._small(node, s)
        self.need(node, isinstance(t, Fun) and self.params.prec_eq(s.name, t.name), "precedences differ")
        kids = list(node.children)
        self.need(node, len(kids) >= len(t.args), "missing premises")
        for child, u in zip(kids, t.args):
            self.expect(node, child, GT_TAU, s, u, X)
        rest = self._ext(node, s, t, X, kids[len(t.args):], self.plain)
        self.need(node, not rest, "extra premises")

    def rule_fs_prec(self, node, s, t, X):
        self._small(node, s)
        self.need(node, isinstance(t, Fun) and self.params.prec_gt(s.name, t.name), "precedence does not decrease")
        for child, u in zip(self._children(node, len(t.args)), t.args):
            self.expect(node, child, GT_TAU, s, u, X)

    def rule_fs_app(self, node, s, t, X):
        self._small(node, s)
        self.need(node, isinstance(t, App), "right-hand side is not an application")
        a, b = self._children(node, 2)
        self.expect(node, a, GT_TAU, s, t.fun, X)
        self.expect(node, b, GT_TAU, s, t.arg, X)

    def rule_fsv(self, node, s, t, X):
        self._small(node, s)
        self._var_in_x(node, t, X)

    def rule_beta(self, node, s, t, X):
        self.need(node, self.plain, "beta rule only exists in the plain order")
        self.need(node, isinstance(s, App) and isinstance(s.fun, Lam), "not a beta redex")
        (child,) = self._children(node, 1)
        self.expect(node, child, GE, instantiate(s.fun.body, s.arg), t, X)

    def rule_eta(self, node, s, t, X):
        self.need(node, self.plain, "eta rule only exists in the plain order")
        self.need(node, is_eta_redex(s), "not an eta redex")
        (child,) = self._children(node, 1)
        self.expect(node, child, GE, shift(s.body.fun, -1, 0), t, X)


_RULE_METHODS = {
    "FbV": "fbv",
    "Fb⊳": "fb_sub",
    "Fb≻": "fb_prec",
    "Fb=": "fb_eq",
    "Fb@": "fb_app",
    "Fbλ": "fb_lam",
    "@⊳": "app_sub",
    "@=": "app_eq",
    "@λ": "app_lam",
    "@Fs": "app_fs",
    "@V": "app_var",
    "λ⊳": "lam_sub",
    "λ⊳η": "lam_eta",
    "λ=": "lam_eq",
    "λ≠": "lam_neq",
    "λFs": "lam_fs",
    "λV": "lam_var",
    "Fs⊳": "fs_sub",
    "Fs=": "fs_eq",
    "Fs≻": "fs_prec",
    "Fs@": "fs_app",
    "FsV": "fsv",
    "@β": "beta",
    "λη": "eta",
}


def replay(trace: ProofTrace, params, plain: bool = False, optimized_eq: bool = True, min_k: int = 0) -> int:
    """Re-validate ``trace``; return the number of nodes checked or raise :class:`ReplayError`."""
    checker = Checker(params, plain, optimized_eq, min_k)
    checker.check(trace)
    return checker.checked
