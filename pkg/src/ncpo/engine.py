"""Decision procedure for the normal-form order and its plain companion.

``Engine(params).gt(s, t, X)`` searches for a derivation of ``s >^X t`` and
returns a :class:`ProofTrace` or ``None``.  With ``plain=True`` the engine
decides the companion order on arbitrary terms instead: no nonversatility
requirements, no eta-expanding abstraction rule, a stronger small-symbol
equal-precedence rule, and two rules orienting beta and eta steps.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Optional

from .extensions import lex_candidates, mul_search
from .params import levels_of
from .simple_types import Arrow
from .structure import _nv, asubt_targets, bsubt_candidates, structsm_witnesses
from .terms import App, FreeVar, Fun, Lam, Term, fresh_var, instantiate, is_eta_redex, is_normal, shift
from .trace import GE, GE_TAU, GT, GT_TAU, HELPER, REFL, SMGE, ProofTrace
from .type_order import _type_geq

EMPTY: frozenset = frozenset()


class NotNormal(ValueError):
    pass


class Engine:
    """One proof session: fixed parameters, session-local memo table."""

    def __init__(self, params, plain: bool = False, optimized_eq: bool = True, min_k: int = 0):
        self.params = params
        self.plain = plain
        self.optimized_eq = optimized_eq
        self.min_k = min_k
        self._level_gt = levels_of(params).gt
        self.memo: dict = {}
        self.active: set = set()
        self.stats: Counter = Counter()

    # ------------------------------------------------------------------
    # judgment entry points

    def gt(self, s: Term, t: Term, X: Iterable = EMPTY) -> Optional[ProofTrace]:
        X = X if isinstance(X, frozenset) else frozenset(X)
        key = (s, t, X)
        memo = self.memo
        if key in memo:
            self.stats["memo_hits"] += 1
            return memo[key]
        if key in self.active:
            self.stats["cycles"] += 1
            return None
        self.stats["judgments"] += 1
        if not self.plain and not _nv(s):
            result = None
        else:
            self.active.add(key)
            try:
                result = self._search(s, t, X)
            finally:
                self.active.discard(key)
        memo[key] = result
        return result

    def type_geq(self, a, b) -> bool:
        return _type_geq(self._level_gt, a, b)

    def gt_tau(self, s: Term, t: Term, X=EMPTY) -> Optional[ProofTrace]:
        if not self.type_geq(s.type, t.type):
            return None
        found = self.gt(s, t, X)
        return None if found is None else found.as_rel(GT_TAU)

    def ge(self, s: Term, t: Term, X=EMPTY) -> Optional[ProofTrace]:
        if s == t:
            return self._node(REFL, s, t, X, rel=GE)
        found = self.gt(s, t, X)
        return None if found is None else found.as_rel(GE)

    def ge_tau(self, s: Term, t: Term, X=EMPTY) -> Optional[ProofTrace]:
        if s == t:
            return self._node(REFL, s, t, X, rel=GE_TAU)
        found = self.gt_tau(s, t, X)
        return None if found is None else found.as_rel(GE_TAU)

    # ------------------------------------------------------------------

    def _node(self, rule, s, t, X, children=(), rel=GT, **info) -> ProofTrace:
        return ProofTrace(rule, s, t, frozenset(X), rel, tuple(children), info, self.plain)

    def _search(self, s: Term, t: Term, X: frozenset) -> Optional[ProofTrace]:
        if isinstance(s, Fun):
            if self.params.is_big(s.name):
                return self._big(s, t, X)
            return self._small(s, t, X)
        if isinstance(s, App):
            return self._app(s, t, X)
        if isinstance(s, Lam):
            return self._lam(s, t, X)
        return None

    def _fresh(self, ty, s, t, X) -> FreeVar:
        return fresh_var(ty, s, t, X)

    # ------------------------------------------------------------------
    # big function symbols

    def _big(self, s: Fun, t: Term, X: frozenset):
        p = self.params
        if isinstance(t, FreeVar) and t in X:
            return self._node("FbV", s, t, X)
        found = self._fb_subterm(s, t, X, equal_only=True)
        if found:
            return found
        if isinstance(t, Fun):
            if p.prec_gt(s.name, t.name):
                kids = self._all_gt(s, t.args, X, self.gt)
                if kids is not None:
                    return self._node("Fb≻", s, t, X, kids)
            if p.prec_eq(s.name, t.name):
                found = self._fb_eq(s, t, X)
                if found:
                    return found
        elif isinstance(t, App):
            a = self.gt(s, t.fun, X)
            if a is not None:
                b = self.gt(s, t.arg, X)
                if b is not None:
                    return self._node("Fb@", s, t, X, (a, b))
        elif isinstance(t, Lam):
            z = self._fresh(t.var_type, s, t, X)
            body = self.gt(s, instantiate(t.body, z), X | {z})
            if body is not None:
                return self._node("Fbλ", s, t, X, (body,), z=z)
        return self._fb_subterm(s, t, X, equal_only=False)

    def _fb_chain(self, ti: Term):
        """Pairs ``(w1, w2)`` with ``ti`` basic-above-or-equal ``w1`` accessible-above-or-equal ``w2``."""
        p = self.params
        firsts = [ti]
        if self.plain or _nv(ti):
            firsts += [w for w in bsubt_candidates(ti, self.plain) if p.is_basic(w.type.name)]
        out = []
        for w1 in firsts:
            out.append((w1, w1))
            for w2 in sorted(asubt_targets(w1, p), key=lambda u: u.size):
                out.append((w1, w2))
        return out

    def _fb_subterm(self, s: Fun, t: Term, X, equal_only: bool):
        for i, ti in enumerate(s.args, 1):
            for w1, w2 in self._fb_chain(ti):
                if equal_only:
                    if w2 != t:
                        continue
                    ev = self._node(REFL, w2, t, EMPTY, rel=GE_TAU)
                else:
                    if w2 == t:
                        continue
                    ev = self.ge_tau(w2, t, EMPTY)
                    if ev is None:
                        continue
                return self._node("Fb⊳", s, t, X, (ev,), i=i, via=(w1, w2))
        return None

    def _all_gt(self, s, targets, X, judge):
        kids = []
        for u in targets:
            ev = judge(s, u, X)
            if ev is None:
                return None
            kids.append(ev)
        return kids

    def _arg_rel(self, ti: Term, uj: Term, X: frozenset, structural: bool):
        """Evidence for ``ti (>_τ ∪ ≫_X·≥_τ) uj``; without ``structural`` only ``>_τ``."""
        ev = self.gt_tau(ti, uj, EMPTY)
        if ev is not None:
            return ev
        if not structural:
            return None
        p = self.params
        for w, guards, k in structsm_witnesses(ti, X):
            if not all(p.is_acc(f, j) for f, j in guards):
                continue
            if k < self.min_k:
                continue
            if w == uj:
                tail = self._node(REFL, w, uj, EMPTY, rel=GE_TAU)
            else:
                if not self.plain and not is_normal(w):
                    continue
                tail = self.ge_tau(w, uj, EMPTY)
                if tail is None:
                    continue
            return self._node("≫", ti, uj, X, (tail,), rel=SMGE, via=w)
        return None

    def _fb_eq(self, s: Fun, t: Fun, X: frozenset):
        ts, us = s.args, t.args
        structural = True
        eq = lambda i, j: ts[i] == us[j]
        rel = lambda i, j: self._arg_rel(ts[i], us[j], X, structural)
        mul = self.params.is_mul(s.name)
        if not self.optimized_eq:
            pre = self._all_gt(s, us, X, self.gt)
            if pre is None:
                return None
            if mul:
                found = mul_search(len(ts), len(us), eq, rel)
                if found is None:
                    return None
                return self._mul_node("Fb=", s, t, X, found, pre, variant="full")
            for i in lex_candidates(len(ts), len(us), eq):
                ev = rel(i, i)
                if ev is not None:
                    return self._node("Fb=", s, t, X, list(pre) + [ev], status="lex", i=i + 1, variant="full")
            return None
        if mul:
            found = mul_search(len(ts), len(us), eq, rel)
            if found is None:
                return None
            return self._mul_node("Fb=", s, t, X, found, (), variant="mul")
        for i in lex_candidates(len(ts), len(us), eq):
            ev = rel(i, i)
            if ev is None:
                continue
            rest = self._all_gt(s, us[i + 1:], X, self.gt)
            if rest is not None:
                return self._node("Fb=", s, t, X, [ev] + rest, status="lex", i=i + 1, variant="lex")
        return None

    def _mul_node(self, rule, s, t, X, found, pre, **info):
        matching = tuple((j, i, kind) for j, i, kind, _ in found)
        evidence = [ev for _, _, kind, ev in found if kind == "R"]
        return self._node(rule, s, t, X, list(pre) + evidence, status="mul", matching=matching, **info)

    # ------------------------------------------------------------------
    # small function symbols

    def _small(self, s: Fun, t: Term, X: frozenset):
        p = self.params
        if isinstance(t, FreeVar) and t in X:
            return self._node("FsV", s, t, X)
        for i, ti in enumerate(s.args, 1):
            if ti == t:
                return self._node("Fs⊳", s, t, X, (self._node(REFL, ti, t, EMPTY, rel=GE_TAU),), i=i)
        if isinstance(t, Fun):
            if p.prec_gt(s.name, t.name):
                kids = self._all_gt(s, t.args, X, self.gt_tau)
                if kids is not None:
                    return self._node("Fs≻", s, t, X, kids)
            if p.prec_eq(s.name, t.name):
                found = self._fs_eq(s, t, X)
                if found:
                    return found
        elif isinstance(t, App):
            a = self.gt_tau(s, t.fun, X)
            if a is not None:
                b = self.gt_tau(s, t.arg, X)
                if b is not None:
                    return self._node("Fs@", s, t, X, (a, b))
        for i, ti in enumerate(s.args, 1):
            if ti == t:
                continue
            ev = self.ge_tau(ti, t, EMPTY)
            if ev is not None:
                return self._node("Fs⊳", s, t, X, (ev,), i=i)
        return None

    def _fs_eq(self, s: Fun, t: Fun, X: frozenset):
        pre = self._all_gt(s, t.args, X, self.gt_tau)
        if pre is None:
            return None
        ts, us = s.args, t.args
        eq = lambda i, j: ts[i] == us[j]
        rel = lambda i, j: self._arg_rel(ts[i], us[j], X, self.plain)
        if self.params.is_mul(s.name):
            found = mul_search(len(ts), len(us), eq, rel)
            if found is None:
                return None
            return self._mul_node("Fs=", s, t, X, found, pre)
        for i in lex_candidates(len(ts), len(us), eq):
            ev = rel(i, i)
            if ev is not None:
                return self._node("Fs=", s, t, X, list(pre) + [ev], status="lex", i=i + 1)
        return None

    # ------------------------------------------------------------------
    # applications

    def _app(self, s: App, t: Term, X: frozenset):
        p = self.params
        if isinstance(t, FreeVar) and t in X:
            return self._node("@V", s, t, X)
        if s.fun == t:
            return self._node("@⊳", s, t, X, (self._node(REFL, t, t, X, rel=GE),), side="t")
        if s.arg == t:
            return self._node("@⊳", s, t, X, (self._node(REFL, t, t, X, rel=GE_TAU),), side="u")
        if isinstance(t, App):
            found = self._app_eq(s, t, X)
            if found:
                return found
        elif isinstance(t, Lam):
            z = self._fresh(t.var_type, s, t, X)
            body = self.gt(s, instantiate(t.body, z), X)
            if body is not None:
                return self._node("@λ", s, t, X, (body,), z=z)
        elif isinstance(t, Fun) and not p.is_big(t.name):
            kids = self._all_gt(s, t.args, X, self.gt_tau)
            if kids is not None:
                return self._node("@Fs", s, t, X, kids)
        ev = self.gt(s.fun, t, X)
        if ev is not None:
            return self._node("@⊳", s, t, X, (ev.as_rel(GE),), side="t")
        ev = self.gt_tau(s.arg, t, X)
        if ev is not None:
            return self._node("@⊳", s, t, X, (ev.as_rel(GE_TAU),), side="u")
        if self.plain and isinstance(s.fun, Lam):
            reduct = instantiate(s.fun.body, s.arg)
            ev = self.ge(reduct, t, X)
            if ev is not None:
                return self._node("@β", s, t, X, (ev,))
        return None

    def _app_eq(self, s: App, t: App, X: frozenset):
        if s.fun == t.fun:
            ev = self.gt(s.arg, t.arg, X)
            if ev is not None:
                return self._node("@=", s, t, X, (ev,), case="arg")
        left = self._helper(s, t.fun, X)
        if left is None:
            return None
        right = self._helper(s, t.arg, X)
        if right is None:
            return None
        return self._node("@=", s, t, X, (left, right), case="helper")

    def _helper(self, s: App, v: Term, X: frozenset):
        ev = self.gt_tau(s.fun, v, X)
        if ev is not None:
            return self._node("@helper", s, v, X, (ev,), rel=HELPER, step="t")
        ev = self.ge_tau(s.arg, v, X)
        if ev is not None:
            return self._node("@helper", s, v, X, (ev,), rel=HELPER, step="u")
        ev = self.gt_tau(s, v, X)
        if ev is not None:
            return self._node("@helper", s, v, X, (ev,), rel=HELPER, step="tu")
        return None

    # ------------------------------------------------------------------
    # abstractions

    def _lam(self, s: Lam, t: Term, X: frozenset):
        p = self.params
        if isinstance(t, FreeVar) and t in X:
            return self._node("λV", s, t, X)
        z = self._fresh(s.var_type, s, t, X)
        body = instantiate(s.body, z)
        if body == t:
            return self._node("λ⊳", s, t, X, (self._node(REFL, body, t, X, rel=GE_TAU),), z=z)
        if isinstance(t, Lam):
            if t.var_type == s.var_type:
                ev = self.gt(body, instantiate(t.body, z), X)
                if ev is not None:
                    return self._node("λ=", s, t, X, (ev,), z=z)
            else:
                y = self._fresh(t.var_type, s, t, X)
                ev = self.gt(s, instantiate(t.body, y), X)
                if ev is not None:
                    return self._node("λ≠", s, t, X, (ev,), z=y)
        elif isinstance(t, Fun) and not p.is_big(t.name):
            kids = self._all_gt(s, t.args, X, self.gt_tau)
            if kids is not None:
                return self._node("λFs", s, t, X, kids)
        ev = self.gt_tau(body, t, X)
        if ev is not None:
            return self._node("λ⊳", s, t, X, (ev.as_rel(GE_TAU),), z=z)
        if not self.plain and isinstance(t.type, Arrow) and t.type.dom == s.var_type and not isinstance(t, Lam):
            expanded = App(t, z)
            ev = self.ge_tau(body, expanded, X)
            if ev is not None:
                return self._node("λ⊳η", s, t, X, (ev,), z=z)
        if self.plain and is_eta_redex(s):
            ev = self.ge(shift(s.body.fun, -1, 0), t, X)
            if ev is not None:
                return self._node("λη", s, t, X, (ev,))
        return None


# ----------------------------------------------------------------------
# functional interface


def _require_normal(*terms: Term) -> None:
    for t in terms:
        if not is_normal(t):
            raise NotNormal(f"term is not βη-normal: {t}")


def ncpo_gt(s: Term, t: Term, X=EMPTY, params=None, engine: Engine | None = None) -> Optional[ProofTrace]:
    _require_normal(s, t)
    engine = engine or Engine(params)
    return engine.gt(s, t, frozenset(X))


def ncpo_gt_tau(s: Term, t: Term, X=EMPTY, params=None, engine: Engine | None = None) -> Optional[ProofTrace]:
    _require_normal(s, t)
    engine = engine or Engine(params)
    return engine.gt_tau(s, t, frozenset(X))


def cpo_gt(s: Term, t: Term, X=EMPTY, params=None, engine: Engine | None = None) -> Optional[ProofTrace]:
    engine = engine or Engine(params, plain=True)
    if not engine.plain:
        raise ValueError("cpo_gt needs a plain-mode engine")
    return engine.gt(s, t, frozenset(X))


def orient_rule(rule, params, engine: Engine | None = None) -> Optional[ProofTrace]:
    """Derivation of ``lhs > rhs`` for one rewrite rule, if the engine finds one."""
    return ncpo_gt(rule.lhs, rule.rhs, EMPTY, params, engine)
