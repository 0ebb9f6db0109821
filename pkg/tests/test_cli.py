from __future__ import annotations

import shutil
import subprocess
import sys

import pytest

from ncpo.cli import main

from conftest import EXAMPLES, params_path, problem_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", EXAMPLES)
def test_prove_examples(capsys, name):
    code, out, _ = run(capsys, "prove", problem_path(name))
    assert code == 0 and out.splitlines()[0] == "YES"
    assert out.splitlines()[1].startswith("% time: ")


def test_self_embedding_is_maybe(capsys):
    for backend in ("smt", "enum"):
        code, out, err = run(capsys, "prove", "--backend", backend, problem_path("selfembed"))
        assert code == 1 and out.startswith("MAYBE\n")
        assert err


def test_proof_round_trips_through_check(capsys, tmp_path):
    for name in EXAMPLES:
        code, out, _ = run(capsys, "prove", "--print-proof", "--no-timing", problem_path(name))
        assert code == 0
        params = tmp_path / f"{name}.params"
        params.write_text("\n".join(out.splitlines()[1:]) + "\n")
        code, out, _ = run(capsys, "check", "--params", params, problem_path(name))
        assert code == 0 and out.startswith("YES\n")


def test_print_proof_lines(capsys):
    _, out, _ = run(capsys, "prove", "--print-proof", "--no-timing", problem_path("ex2_diff"))
    lines = out.splitlines()
    assert any(line.startswith("% rule diff_sin: ") for line in lines)
    assert any("λ⊳η" in line for line in lines)


def test_no_timing_is_deterministic(capsys):
    argv = ["prove", "--print-proof", "--stats", "--no-timing", problem_path("ex3_nnf")]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    assert "seconds" not in first and "% stats: judgments" in first


def test_check_with_shipped_params(capsys):
    for name in ("ex2_diff", "ex3_nnf", "ex4_mapinc"):
        code, out, _ = run(capsys, "check", "--params", params_path(name), problem_path(name))
        assert code == 0 and out.startswith("YES")


def test_error_cases(capsys, tmp_path):
    broken = tmp_path / "broken.p"
    broken.write_text("thf(x, type, f: \n")
    code, out, err = run(capsys, "prove", broken)
    assert code == 2 and out.startswith("ERROR") and "broken.p" in err
    code, out, _ = run(capsys, "prove", tmp_path / "missing.p")
    assert code == 2
    bad_params = tmp_path / "bad.params"
    bad_params.write_text("prec nosuchsymbol 1\n")
    code, _, err = run(capsys, "check", "--params", bad_params, problem_path("ex1_etalong"))
    assert code == 2 and "nosuchsymbol" in err
    code, _, _ = run(capsys, "prove", "--backend", "enum", problem_path("ex4_mapinc"))
    assert code == 2
    code, _, _ = run(capsys, "prove", "--solver", "/nonexistent/z3", problem_path("ex1_etalong"))
    assert code == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", str(problem_path("ex1_etalong"))])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["prove", "--params", "x", str(problem_path("ex1_etalong"))])
    capsys.readouterr()


def test_several_files_and_jobs(capsys):
    files = [problem_path(n) for n in EXAMPLES + ["selfembed"]]
    code, out, _ = run(capsys, "prove", "--no-timing", "--jobs", "2", *files)
    assert code == 1
    assert out.count("% file: ") == 5
    serial = run(capsys, "prove", "--no-timing", *files)[1]
    assert serial == out


@pytest.mark.skipif(shutil.which("ncpo") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ncpo", "prove", str(problem_path("ex1_etalong"))], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("YES")
    proc = subprocess.run([sys.executable, "-m", "ncpo.cli", "prove", str(problem_path("selfembed"))],
                          capture_output=True, text=True)
    assert proc.returncode == 1
