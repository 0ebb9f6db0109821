"""``ncpo prove|check FILE...``: termination reports with stable exit codes.

Exit status is 0 for ``YES``, 1 for ``MAYBE`` and 2 for ``ERROR``.  Every
report line after the verdict is either a parameter line or a ``%`` comment,
so ``tail -n +2`` of a ``--print-proof`` report is a valid parameter file.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .enum_search import BoundsExceeded
from .params import ParamsFormatError, format_params, load_params
from .prover import PROVED, SearchConfig, SoundnessError, check, prove
from .smt import SolverError
from .structure import unknown_names
from .terms import show
from .thf import InvalidRules, THFError, load_problem
from .trace import format_trace

EXIT = {"YES": 0, "MAYBE": 1, "ERROR": 2}


@dataclass
class RunConfig:
    path: str
    mode: str
    backend: str = "smt"
    solver: Optional[str] = None
    timeout: float = 60.0
    params: Optional[str] = None
    print_proof: bool = False
    dump_smt: Optional[str] = None
    timing: bool = True
    stats: bool = False


def _report(verdict: str, body: list[str], seconds: float | None) -> list[str]:
    lines = [verdict]
    if seconds is not None:
        lines.append(f"% time: {seconds:.3f}")
    return lines + body


def run_one(cfg: RunConfig) -> tuple[str, str, str]:
    """``(verdict, stdout text, stderr text)`` for one input file."""
    start = time.perf_counter()
    err: list[str] = []
    try:
        problem = load_problem(cfg.path)
        if cfg.mode == "check":
            params = load_params(cfg.params)
            unknown = unknown_names(problem, params)
            if unknown:
                raise ParamsFormatError("; ".join(unknown))
            result = check(problem, params)
        else:
            search = SearchConfig(cfg.backend, cfg.solver, cfg.timeout, cfg.dump_smt)
            result = prove(problem, search)
    except (OSError, UnicodeDecodeError, THFError, InvalidRules, ParamsFormatError,
            SolverError, BoundsExceeded, SoundnessError) as exc:
        err.append(f"{cfg.path}: {type(exc).__name__}: {exc}")
        seconds = time.perf_counter() - start if cfg.timing else None
        return "ERROR", "\n".join(_report("ERROR", [], seconds)) + "\n", "\n".join(err) + "\n"

    verdict = "YES" if result.verdict == PROVED else "MAYBE"
    body: list[str] = []
    if verdict == "MAYBE":
        for key, value in result.diagnostics.items():
            err.append(f"{cfg.path}: {key}: {value}")
    if cfg.print_proof and verdict == "YES":
        symbols, bases = list(problem.signature), list(problem.base_types)
        body += format_params(result.params, symbols, bases).splitlines()
        for rule, trace in zip(problem.rules, result.traces):
            body.append(f"% rule {rule.name}: {show(rule.lhs)} -> {show(rule.rhs)}")
            body += [f"%   {line}" for line in format_trace(trace).splitlines()]
    if cfg.stats:
        st = result.stats
        judged, hits = st.get("judgments", 0), st.get("memo_hits", 0)
        rate = hits / (judged + hits) if judged + hits else 0.0
        body.append(f"% stats: judgments {judged}, memo hits {hits} ({rate:.0%}), cycles {st.get('cycles', 0)}")
        for key in sorted(result.diagnostics):
            if key in ("violations", "unoriented"):
                continue
            if cfg.timing or not key.endswith("_seconds"):
                body.append(f"% stats: {key} {result.diagnostics[key]}")
    seconds = time.perf_counter() - start if cfg.timing else None
    out = "\n".join(_report(verdict, body, seconds)) + "\n"
    return verdict, out, ("\n".join(err) + "\n") if err else ""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncpo", description="Termination of higher-order rewrite systems.")
    ap.add_argument("mode", choices=("prove", "check"))
    ap.add_argument("files", nargs="+", metavar="FILE")
    ap.add_argument("--backend", choices=("smt", "enum"), default="smt")
    ap.add_argument("--solver", metavar="CMD", help="solver command reading SMT-LIB on stdin (default: z3 -in)")
    ap.add_argument("--timeout", type=float, default=60.0, metavar="SECS")
    ap.add_argument("--params", metavar="FILE", help="parameter file (check mode)")
    ap.add_argument("--print-proof", action="store_true")
    ap.add_argument("--dump-smt", metavar="FILE")
    ap.add_argument("--no-timing", action="store_true")
    ap.add_argument("--stats", action="store_true")
    ap.add_argument("--jobs", type=int, default=1, metavar="N")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.mode == "check" and not args.params:
        ap.error("check mode needs --params")
    if args.mode == "prove" and args.params:
        ap.error("--params is only valid in check mode")
    if args.dump_smt and len(args.files) > 1:
        ap.error("--dump-smt takes a single input file")
    if args.jobs < 1:
        ap.error("--jobs must be positive")

    configs = [
        RunConfig(path, args.mode, args.backend, args.solver, args.timeout, args.params,
                  args.print_proof, args.dump_smt, not args.no_timing, args.stats)
        for path in args.files
    ]
    if args.jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_one, configs))
    else:
        results = [run_one(c) for c in configs]

    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    many = len(configs) > 1
    for cfg, (_, out, err) in zip(configs, results):
        if many:
            sys.stdout.write(f"% file: {cfg.path}\n")
        sys.stdout.write(out)
        if err:
            sys.stderr.write(err)
    sys.stdout.flush()
    return max(EXIT[v] for v, _, _ in results)


if __name__ == "__main__":
    sys.exit(main())
