from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ncpo.params import load_params
from ncpo.thf import load_problem

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"
EXAMPLES = ["ex1_etalong", "ex2_diff", "ex3_nnf", "ex4_mapinc"]
WITH_PARAMS = ["ex2_diff", "ex3_nnf", "ex4_mapinc"]


def problem_path(name: str) -> Path:
    return PROBLEMS / f"{name}.p"


def params_path(name: str) -> Path:
    return PROBLEMS / f"{name}.params"


@pytest.fixture(scope="session")
def problems():
    return {name: load_problem(problem_path(name)) for name in EXAMPLES + ["selfembed"]}


@pytest.fixture(scope="session")
def paper_params():
    return {name: load_params(params_path(name)) for name in WITH_PARAMS}


@pytest.fixture
def rng():
    return random.Random(20240601)
