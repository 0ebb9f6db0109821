"""External SMT solver bridge: process handling, model parsing, decoding."""

from __future__ import annotations

import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .params import BaseLevels, OrderParams
from .simple_types import decompose

DEFAULT_SOLVER = "z3 -in"


class SolverError(RuntimeError):
    pass


class ModelError(ValueError):
    pass


@dataclass
class SolverResult:
    status: str  # "sat", "unsat" or "unknown"
    model: dict = field(default_factory=dict)
    raw: str = ""
    seconds: float = 0.0


def default_solver() -> str:
    """``z3 -in`` from PATH, or next to the running interpreter."""
    if shutil.which("z3"):
        return DEFAULT_SOLVER
    local = Path(sys.executable).parent / "z3"
    if local.exists():
        return f"{local} -in"
    return DEFAULT_SOLVER


def run_solver(script: str, solver: str | None = None, timeout: float = 60.0) -> SolverResult:
    """Feed ``script`` to the solver on stdin and read its verdict and model."""
    import time

    argv = shlex.split(solver or default_solver())
    start = time.perf_counter()
    try:
        proc = subprocess.run(argv, input=script, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError as exc:
        raise SolverError(f"cannot start solver {argv[0]!r}: {exc}") from exc
    except subprocess.TimeoutExpired:
        return SolverResult("unknown", raw="timeout", seconds=time.perf_counter() - start)
    elapsed = time.perf_counter() - start
    out = proc.stdout
    tokens = out.split(None, 1)
    status = tokens[0] if tokens else ""
    if status not in ("sat", "unsat", "unknown"):
        raise SolverError(f"unexpected solver output: {(out or proc.stderr).strip()[:200]!r}")
    model = parse_model(tokens[1]) if status == "sat" and len(tokens) > 1 else {}
    return SolverResult(status, model, out, elapsed)


# ---------------------------------------------------------------------------
# s-expressions


def parse_sexprs(text: str) -> list:
    """Parse every s-expression in ``text``; atoms stay strings."""
    stack: list[list] = [[]]
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "(":
            stack.append([])
            i += 1
        elif c == ")":
            if len(stack) == 1:
                raise ModelError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
            i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ModelError("unterminated quoted symbol")
            stack[-1].append(text[i + 1:j])
            i = j + 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ModelError("unterminated string")
            stack[-1].append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            stack[-1].append(text[i:j])
            i = j
    if len(stack) != 1:
        raise ModelError("unbalanced '(' in solver output")
    return stack[0]


def _value(expr):
    if expr == "true":
        return True
    if expr == "false":
        return False
    if isinstance(expr, str):
        try:
            return int(expr)
        except ValueError:
            raise ModelError(f"unsupported model value {expr!r}") from None
    if len(expr) == 2 and expr[0] == "-":
        v = _value(expr[1])
        if isinstance(v, bool):
            raise ModelError("negated boolean in model")
        return -v
    raise ModelError(f"unsupported model value {expr!r}")


def parse_model(text: str) -> dict:
    """Bindings of nullary ``define-fun`` entries found in ``text``."""
    out = {}

    def walk(node):
        if not isinstance(node, list):
            return
        if len(node) == 5 and node[0] == "define-fun" and node[2] == []:
            out[node[1]] = _value(node[4])
            return
        for child in node:
            walk(child)

    for expr in parse_sexprs(text):
        walk(expr)
    return out


# ---------------------------------------------------------------------------


def decode_model(model: dict, problem) -> OrderParams:
    """Parameters read from solver bindings; unbound variables take defaults."""
    symbols = list(problem.signature)
    bases = list(problem.base_types)

    def get(name, kind, default):
        value = model.get(name, default)
        if kind is bool and not isinstance(value, bool):
            raise ModelError(f"{name} should be boolean, got {value!r}")
        if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise ModelError(f"{name} should be an integer, got {value!r}")
        return value

    prec, status, big, acc = {}, {}, {}, {}
    for k, f in enumerate(symbols):
        prec[f] = get(f"p{k}", int, 0)
        status[f] = "mul" if get(f"mul{k}", bool, True) else "lex"
        big[f] = get(f"big{k}", bool, True)
        n = len(decompose(problem.signature[f].type)[0])
        chosen = frozenset(i for i in range(1, n + 1) if get(f"acc{k}_{i}", bool, False))
        if chosen:
            acc[f] = chosen
    levels = {b: get(f"l{k}", int, 0) for k, b in enumerate(bases)}
    basic = {b: True for k, b in enumerate(bases) if get(f"basic{k}", bool, False)}
    return OrderParams(BaseLevels(levels), prec, status, big, acc, basic)
