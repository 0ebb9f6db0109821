"""Simply-typed lambda terms with fixed-arity function symbols.

Bound variables are de Bruijn indices, so structural equality is
alpha-equivalence.  Free variables carry a name and a type; two free
variables are the same iff both agree.  Every node knows its type.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping

from .simple_types import Arrow, SimpleType, drop_args

FRESH_PREFIX = "_z"


class IllTyped(TypeError):
    pass


class ReductCapExceeded(RuntimeError):
    pass


class Term:
    __slots__ = ("type", "size", "loose", "_hash", "_fv", "_nv", "_normal")

    def __init__(self, ty: SimpleType, size: int, loose: int, h: int):
        self.type = ty
        self.size = size
        self.loose = loose
        self._hash = h
        self._fv = None
        self._nv = None
        self._normal = None

    def __hash__(self) -> int:
        return self._hash

    def __ne__(self, other) -> bool:
        return not self == other

    @property
    def fv(self) -> frozenset:
        if self._fv is None:
            self._fv = frozenset(_collect_fv(self))
        return self._fv

    def __str__(self) -> str:
        return show(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {show(self)} : {self.type}>"


class FreeVar(Term):
    __slots__ = ("name", "fresh")

    def __init__(self, name: str, ty: SimpleType):
        super().__init__(ty, 1, 0, hash(("v", name, ty)))
        self.name = name
        self.fresh = _fresh_index(name)

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, FreeVar)
            and self._hash == other._hash
            and self.name == other.name
            and self.type == other.type
        )

    __hash__ = Term.__hash__


class Bound(Term):
    __slots__ = ("index",)

    def __init__(self, index: int, ty: SimpleType):
        super().__init__(ty, 1, index + 1, hash(("b", index, ty)))
        self.index = index

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, Bound)
            and self.index == other.index
            and self.type == other.type
        )

    __hash__ = Term.__hash__


class Fun(Term):
    """Function symbol applied to exactly its arity many arguments."""

    __slots__ = ("name", "sym_type", "args")

    def __init__(self, name: str, sym_type: SimpleType, args: Iterable[Term] = ()):
        args = tuple(args)
        ty = sym_type
        for arg in args:
            if not isinstance(ty, Arrow) or ty.dom != arg.type:
                raise IllTyped(f"argument {show(arg)} : {arg.type} does not fit {name} : {sym_type}")
            ty = ty.cod
        super().__init__(
            ty,
            1 + sum(a.size for a in args),
            max((a.loose for a in args), default=0),
            hash(("f", name, sym_type, tuple(a._hash for a in args))),
        )
        self.name = name
        self.sym_type = sym_type
        self.args = args

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, Fun)
            and self._hash == other._hash
            and self.name == other.name
            and self.sym_type == other.sym_type
            and self.args == other.args
        )

    __hash__ = Term.__hash__


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        fty = fun.type
        if not isinstance(fty, Arrow) or fty.dom != arg.type:
            raise IllTyped(f"cannot apply {show(fun)} : {fty} to {show(arg)} : {arg.type}")
        super().__init__(
            fty.cod,
            1 + fun.size + arg.size,
            max(fun.loose, arg.loose),
            hash(("a", fun._hash, arg._hash)),
        )
        self.fun = fun
        self.arg = arg

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, App)
            and self._hash == other._hash
            and self.fun == other.fun
            and self.arg == other.arg
        )

    __hash__ = Term.__hash__


class Lam(Term):
    """Abstraction; ``hint`` is a display name and takes no part in equality."""

    __slots__ = ("var_type", "body", "hint")

    def __init__(self, var_type: SimpleType, body: Term, hint: str = "x"):
        super().__init__(
            Arrow(var_type, body.type),
            1 + body.size,
            max(body.loose - 1, 0),
            hash(("l", var_type, body._hash)),
        )
        self.var_type = var_type
        self.body = body
        self.hint = hint

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, Lam)
            and self._hash == other._hash
            and self.var_type == other.var_type
            and self.body == other.body
        )

    __hash__ = Term.__hash__


def _fresh_index(name: str) -> int:
    if name.startswith(FRESH_PREFIX) and name[len(FRESH_PREFIX):].isdigit():
        return int(name[len(FRESH_PREFIX):])
    return -1


def _collect_fv(t: Term) -> Iterator[FreeVar]:
    stack = [t]
    while stack:
        u = stack.pop()
        if u._fv is not None:
            yield from u._fv
        elif isinstance(u, FreeVar):
            yield u
        elif isinstance(u, Fun):
            stack.extend(u.args)
        elif isinstance(u, App):
            stack.append(u.fun)
            stack.append(u.arg)
        elif isinstance(u, Lam):
            stack.append(u.body)


# ---------------------------------------------------------------------------
# Basic queries


def type_of(t: Term) -> SimpleType:
    return t.type


def free_vars(t: Term) -> frozenset:
    return t.fv


def app_spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])`` along App nodes."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def apply(head: Term, *args: Term) -> Term:
    for arg in args:
        head = App(head, arg)
    return head


def fresh_var(ty: SimpleType, *avoid) -> FreeVar:
    """A fresh variable numbered one above every fresh variable in ``avoid``.

    ``avoid`` may mix terms and iterables of free variables.  Numbering is a
    function of the inputs only, which keeps memo keys canonical.
    """
    top = -1
    for item in avoid:
        pool = item.fv if isinstance(item, Term) else item
        for v in pool:
            if v.fresh > top:
                top = v.fresh
    return FreeVar(f"{FRESH_PREFIX}{top + 1}", ty)


# ---------------------------------------------------------------------------
# de Bruijn plumbing


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if t.loose <= cutoff or d == 0:
        return t
    if isinstance(t, Bound):
        return Bound(t.index + d, t.type) if t.index >= cutoff else t
    if isinstance(t, Fun):
        return Fun(t.name, t.sym_type, [shift(a, d, cutoff) for a in t.args])
    if isinstance(t, App):
        return App(shift(t.fun, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Lam):
        return Lam(t.var_type, shift(t.body, d, cutoff + 1), t.hint)
    return t


def instantiate(body: Term, value: Term, depth: int = 0) -> Term:
    """Replace index ``depth`` in ``body`` by ``value`` and close the gap."""
    if body.loose <= depth:
        return body
    if isinstance(body, Bound):
        if body.index == depth:
            if body.type != value.type:
                raise IllTyped(f"bound variable of type {body.type} replaced by {value.type}")
            return shift(value, depth)
        return Bound(body.index - 1, body.type) if body.index > depth else body
    if isinstance(body, Fun):
        return Fun(body.name, body.sym_type, [instantiate(a, value, depth) for a in body.args])
    if isinstance(body, App):
        return App(instantiate(body.fun, value, depth), instantiate(body.arg, value, depth))
    if isinstance(body, Lam):
        return Lam(body.var_type, instantiate(body.body, value, depth + 1), body.hint)
    return body


def open_lam(lam: Lam, var: Term) -> Term:
    """``t[x/z]`` for ``lam = λx.t``."""
    return instantiate(lam.body, var)


def abstract(t: Term, var: FreeVar, hint: str | None = None) -> Lam:
    """``λvar.t`` with occurrences of ``var`` turned into the binder."""

    def go(u: Term, depth: int) -> Term:
        if var not in u.fv:
            return u
        if isinstance(u, FreeVar):
            return Bound(depth, u.type)
        if isinstance(u, Fun):
            return Fun(u.name, u.sym_type, [go(a, depth) for a in u.args])
        if isinstance(u, App):
            return App(go(u.fun, depth), go(u.arg, depth))
        if isinstance(u, Lam):
            return Lam(u.var_type, go(u.body, depth + 1), u.hint)
        return u

    return Lam(var.type, go(shift(t, 1), 0), hint or var.name)


def lam(var: FreeVar, body: Term) -> Lam:
    return abstract(body, var)


# ---------------------------------------------------------------------------
# Substitution


def substitute(t: Term, sigma: Mapping[FreeVar, Term]) -> Term:
    """Simultaneous capture-avoiding substitution.

    Images never contain loose indices, so no binder can capture them.
    """
    for x, image in sigma.items():
        if x.type != image.type:
            raise IllTyped(f"substitution maps {x.name} : {x.type} to a term of type {image.type}")
        if image.loose:
            raise ValueError("substitution images must not contain loose bound indices")
    sigma = {x: u for x, u in sigma.items() if x != u}
    if not sigma:
        return t
    keys = frozenset(sigma)

    def go(u: Term) -> Term:
        if keys.isdisjoint(u.fv):
            return u
        if isinstance(u, FreeVar):
            return sigma[u]
        if isinstance(u, Fun):
            return Fun(u.name, u.sym_type, [go(a) for a in u.args])
        if isinstance(u, App):
            return App(go(u.fun), go(u.arg))
        if isinstance(u, Lam):
            return Lam(u.var_type, go(u.body), u.hint)
        return u

    return go(t)


# ---------------------------------------------------------------------------
# Normalization


def beta_normalize(t: Term) -> Term:
    """Normal-order beta normal form."""
    if isinstance(t, (FreeVar, Bound)):
        return t
    if isinstance(t, Fun):
        return Fun(t.name, t.sym_type, [beta_normalize(a) for a in t.args])
    if isinstance(t, Lam):
        return Lam(t.var_type, beta_normalize(t.body), t.hint)
    head = beta_normalize(t.fun)
    if isinstance(head, Lam):
        return beta_normalize(instantiate(head.body, t.arg))
    return App(head, beta_normalize(t.arg))


def is_eta_redex(t: Term) -> bool:
    return (
        isinstance(t, Lam)
        and isinstance(t.body, App)
        and isinstance(t.body.arg, Bound)
        and t.body.arg.index == 0
        and not _has_index(t.body.fun, 0)
    )


def _has_index(t: Term, i: int) -> bool:
    if t.loose <= i:
        return False
    if isinstance(t, Bound):
        return t.index == i
    if isinstance(t, Fun):
        return any(_has_index(a, i) for a in t.args)
    if isinstance(t, App):
        return _has_index(t.fun, i) or _has_index(t.arg, i)
    if isinstance(t, Lam):
        return _has_index(t.body, i + 1)
    return False


def eta_contract(t: Term) -> Term:
    """Bottom-up eta contraction; on beta-normal input the result is normal."""
    if isinstance(t, Fun):
        return Fun(t.name, t.sym_type, [eta_contract(a) for a in t.args])
    if isinstance(t, App):
        return App(eta_contract(t.fun), eta_contract(t.arg))
    if isinstance(t, Lam):
        out = Lam(t.var_type, eta_contract(t.body), t.hint)
        if is_eta_redex(out):
            return shift(out.body.fun, -1, 0)
        return out
    return t


def beta_eta_normalize(t: Term) -> Term:
    if t._normal:
        return t
    out = eta_contract(beta_normalize(t))
    out._normal = True
    return out


def is_normal(t: Term) -> bool:
    if t._normal is None:
        if isinstance(t, (FreeVar, Bound)):
            t._normal = True
        elif isinstance(t, Fun):
            t._normal = all(is_normal(a) for a in t.args)
        elif isinstance(t, App):
            t._normal = not isinstance(t.fun, Lam) and is_normal(t.fun) and is_normal(t.arg)
        else:
            t._normal = not is_eta_redex(t) and is_normal(t.body)
    return t._normal


def one_step_reducts(t: Term) -> set[Term]:
    """All terms reachable by exactly one beta or eta step anywhere in ``t``."""
    out: set[Term] = set()
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            out.add(instantiate(t.fun.body, t.arg))
        out.update(App(f, t.arg) for f in one_step_reducts(t.fun))
        out.update(App(t.fun, a) for a in one_step_reducts(t.arg))
    elif isinstance(t, Lam):
        if is_eta_redex(t):
            out.add(shift(t.body.fun, -1, 0))
        out.update(Lam(t.var_type, b, t.hint) for b in one_step_reducts(t.body))
    elif isinstance(t, Fun):
        for i, arg in enumerate(t.args):
            for red in one_step_reducts(arg):
                args = list(t.args)
                args[i] = red
                out.add(Fun(t.name, t.sym_type, args))
    return out


def enumerate_beta_eta_reducts(t: Term, size_cap: int = 2000) -> set[Term]:
    """``{t' | t ->*βη t'}`` by breadth-first search over the reduction graph."""
    seen = {t}
    queue = deque([t])
    while queue:
        for red in one_step_reducts(queue.popleft()):
            if red not in seen:
                seen.add(red)
                if len(seen) > size_cap:
                    raise ReductCapExceeded(f"more than {size_cap} reducts")
                queue.append(red)
    return seen


# ---------------------------------------------------------------------------
# Subterms


def subterm_positions(t: Term) -> list[tuple[tuple[int, ...], Term]]:
    """Every subterm with its path; binders are opened with fresh variables.

    Paths use 1..n for the arguments of a Fun node, 1/2 for the function and
    argument of an App node, and 1 for the body of a Lam node.
    """
    out = []

    def go(u: Term, path: tuple[int, ...]) -> None:
        out.append((path, u))
        if isinstance(u, Fun):
            for i, a in enumerate(u.args, 1):
                go(a, path + (i,))
        elif isinstance(u, App):
            go(u.fun, path + (1,))
            go(u.arg, path + (2,))
        elif isinstance(u, Lam):
            z = fresh_var(u.var_type, t, u)
            go(open_lam(u, z), path + (1,))

    go(t, ())
    return out


def at_position(t: Term, path: tuple[int, ...]) -> Term:
    for step in path:
        if isinstance(t, Fun):
            t = t.args[step - 1]
        elif isinstance(t, App):
            t = t.fun if step == 1 else t.arg
        elif isinstance(t, Lam) and step == 1:
            t = t.body
        else:
            raise IndexError(f"no position {path}")
    return t


# ---------------------------------------------------------------------------
# Printing


def show(t: Term, names: tuple[str, ...] = ()) -> str:
    taken = {v.name for v in t.fv} if t.loose == 0 else set()
    return _show(t, list(names), taken)


def _pick(hint: str, used: set[str]) -> str:
    if hint not in used:
        return hint
    n = 1
    while f"{hint}{n}" in used:
        n += 1
    return f"{hint}{n}"


def _show(t: Term, env: list[str], taken: set[str]) -> str:
    if isinstance(t, FreeVar):
        return t.name
    if isinstance(t, Bound):
        if t.index < len(env):
            return env[-1 - t.index]
        return f"#{t.index - len(env)}"
    if isinstance(t, Fun):
        if not t.args:
            return t.name
        return f"{t.name}(" + ", ".join(_show(a, env, taken) for a in t.args) + ")"
    if isinstance(t, Lam):
        name = _pick(t.hint, taken | set(env))
        return f"λ{name}." + _show(t.body, env + [name], taken)
    head, args = app_spine(t)
    parts = [_wrap(head, env, taken, isinstance(head, Lam))]
    parts += [_wrap(a, env, taken, isinstance(a, (App, Lam))) for a in args]
    return " ".join(parts)


def _wrap(t: Term, env: list[str], taken: set[str], paren: bool) -> str:
    text = _show(t, env, taken)
    return f"({text})" if paren else text
