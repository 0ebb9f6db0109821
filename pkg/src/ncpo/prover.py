"""Parameter search front end with a concrete re-check of every answer."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .encode import EncodingTooLarge, encode, to_smtlib
from .engine import Engine, orient_rule
from .enum_search import MAX_BASES, MAX_SYMBOLS, enumerate_search
from .params import OrderParams
from .replay import replay
from .smt import decode_model, run_solver
from .structure import validate_params

PROVED, NOT_PROVABLE, UNKNOWN = "proved", "not_provable", "unknown"


class SoundnessError(RuntimeError):
    """A backend answer that the order engine does not confirm."""


@dataclass
class SearchConfig:
    backend: str = "smt"
    solver: Optional[str] = None
    timeout: float = 60.0
    dump_smt: Optional[str] = None
    budget: int = 500_000
    max_symbols: int = MAX_SYMBOLS
    max_bases: int = MAX_BASES
    naive: bool = False


@dataclass
class SearchResult:
    verdict: str
    params: Optional[OrderParams] = None
    traces: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    stats: Counter = field(default_factory=Counter)


def confirm(problem, params: OrderParams) -> tuple[list, Counter]:
    """Traces for every rule under ``params``; raises if anything fails."""
    problems = validate_params(problem, params)
    if problems:
        raise SoundnessError("search returned invalid parameters: " + "; ".join(problems))
    engine = Engine(params)
    traces = []
    for rule in problem.rules:
        found = orient_rule(rule, params, engine)
        if found is None:
            raise SoundnessError(f"search returned parameters that do not orient rule {rule.name}")
        replay(found, params)
        traces.append(found)
    return traces, engine.stats


def _smt(problem, config: SearchConfig) -> SearchResult:
    start = time.perf_counter()
    try:
        enc = encode(problem, budget=config.budget)
    except EncodingTooLarge as exc:
        return SearchResult(UNKNOWN, diagnostics={"reason": str(exc)})
    script = to_smtlib(enc)
    if config.dump_smt:
        with open(config.dump_smt, "w", encoding="utf-8") as fh:
            fh.write(script)
    encoded = time.perf_counter() - start
    answer = run_solver(script, config.solver, config.timeout)
    diag = {
        "solver_status": answer.status,
        "solver_seconds": round(answer.seconds, 3),
        "encode_seconds": round(encoded, 3),
        "definitions": len(enc.defs),
    }
    if answer.status == "unsat":
        return SearchResult(NOT_PROVABLE, diagnostics=diag)
    if answer.status != "sat":
        return SearchResult(UNKNOWN, diagnostics=diag)
    params = decode_model(answer.model, problem)
    traces, stats = confirm(problem, params)
    return SearchResult(PROVED, params, traces, diag, stats)


def _enum(problem, config: SearchConfig) -> SearchResult:
    outcome = enumerate_search(problem, config.naive, config.max_symbols, config.max_bases)
    diag = dict(outcome.stats)
    if outcome.params is None:
        return SearchResult(NOT_PROVABLE, diagnostics=diag, stats=outcome.stats)
    traces, stats = confirm(problem, outcome.params)
    return SearchResult(PROVED, outcome.params, traces, diag, stats + outcome.stats)


def prove(problem, config: SearchConfig | None = None) -> SearchResult:
    """Search parameters orienting every rule of ``problem``."""
    config = config or SearchConfig()
    if config.backend == "smt":
        return _smt(problem, config)
    if config.backend == "enum":
        return _enum(problem, config)
    raise ValueError(f"unknown backend {config.backend!r}")


def check(problem, params: OrderParams) -> SearchResult:
    """Orient every rule with fixed parameters."""
    problems = validate_params(problem, params)
    if problems:
        return SearchResult(NOT_PROVABLE, params, diagnostics={"violations": problems})
    engine = Engine(params)
    traces, failed = [], []
    for rule in problem.rules:
        found = orient_rule(rule, params, engine)
        if found is None:
            failed.append(rule.name)
        else:
            traces.append(found)
    if failed:
        return SearchResult(NOT_PROVABLE, params, traces, {"unoriented": failed}, engine.stats)
    return SearchResult(PROVED, params, traces, {}, engine.stats)
