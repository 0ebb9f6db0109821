from __future__ import annotations

import random
import shutil
import sys

import pytest

from ncpo.encode import assignment_from_params, encode, evaluate, to_smtlib
from ncpo.sampling import random_problem
from ncpo.smt import ModelError, SolverError, decode_model, parse_model, parse_sexprs, run_solver
from ncpo.structure import validate_params

from helpers import random_params
from test_encode import _expected

needs_z3 = pytest.mark.skipif(shutil.which("z3") is None, reason="z3 not on PATH")


def test_parse_model_reads_ints_and_bools():
    text = """(
      (define-fun p0 () Int 3)
      (define-fun l1 () Int (- 2))
      (define-fun big0 () Bool false)
      (define-fun f ((x Int)) Int x)
    )"""
    assert parse_model(text) == {"p0": 3, "l1": -2, "big0": False}


def test_parse_sexprs_nesting():
    assert parse_sexprs("(a (b c)) d") == [["a", ["b", "c"]], "d"]


def test_decode_defaults_and_type_errors(problems):
    problem = problems["ex1_etalong"]
    params = decode_model({}, problem)
    assert all(params.is_big(f) and params.is_mul(f) for f in problem.signature)
    with pytest.raises(ModelError):
        decode_model({"p0": True}, problem)
    with pytest.raises(ModelError):
        decode_model({"big0": 1}, problem)


def test_decode_round_trip(problems, paper_params):
    for name, params in paper_params.items():
        problem = problems[name]
        enc = encode(problem)
        back = decode_model(assignment_from_params(enc, params), problem)
        assert evaluate(enc, back) == evaluate(enc, params)
        assert not validate_params(problem, back)


@needs_z3
def test_examples_sat_and_self_embedding_unsat(problems):
    for name in ("ex1_etalong", "ex2_diff", "ex3_nnf", "ex4_mapinc"):
        assert run_solver(to_smtlib(encode(problems[name]))).status == "sat"
    assert run_solver(to_smtlib(encode(problems["selfembed"]))).status == "unsat"


def _pin(enc, params) -> str:
    """The script with every parameter variable fixed to its value in ``params``."""
    lines = []
    for name, value in assignment_from_params(enc, params).items():
        v = ("true" if value else "false") if isinstance(value, bool) else str(value)
        lines.append(f"(assert (= {name} {v}))")
    script = to_smtlib(enc)
    return script.replace("(check-sat)", "\n".join(lines) + "\n(check-sat)")


@needs_z3
def test_printed_script_agrees_with_engine():
    # the printed multiset gadget and range bounds are checked by the solver itself
    rng = random.Random(11)
    checked = 0
    while checked < 40:
        problem = random_problem(rng)
        if not problem.rules:
            continue
        params = random_params(rng, problem.signature, problem.base_types)
        enc = encode(problem)
        n_sym, n_base = len(enc.symbols), len(enc.bases)
        if any(v >= n_sym for v in params.prec.values()) or any(v >= n_base for v in params.levels.levels.values()):
            continue
        ok, roots = _expected(problem, params)
        status = run_solver(_pin(enc, params)).status
        assert status == ("sat" if ok and all(roots) else "unsat")
        checked += 1


def test_timeout_maps_to_unknown(tmp_path):
    slow = tmp_path / "slow.py"
    slow.write_text("import time\ntime.sleep(5)\n")
    result = run_solver("(check-sat)\n", f"{sys.executable} {slow}", timeout=0.5)
    assert result.status == "unknown"


def test_missing_solver_raises():
    with pytest.raises(SolverError):
        run_solver("(check-sat)\n", "/nonexistent/solver -in")


def test_garbage_output_raises(tmp_path):
    noisy = tmp_path / "noisy.py"
    noisy.write_text("print('hello')\n")
    with pytest.raises(SolverError):
        run_solver("(check-sat)\n", f"{sys.executable} {noisy}")
