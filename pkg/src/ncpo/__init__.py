"""Higher-order termination via a path order on beta-eta-normal terms."""

from .engine import Engine, cpo_gt, ncpo_gt, ncpo_gt_tau, orient_rule
from .params import OrderParams, format_params, load_params, parse_params
from .prover import SearchConfig, SearchResult, SoundnessError, check, prove
from .replay import replay
from .thf import Problem, Rule, load_problem, parse_problem

__all__ = [
    "Engine", "cpo_gt", "ncpo_gt", "ncpo_gt_tau", "orient_rule",
    "OrderParams", "format_params", "load_params", "parse_params",
    "SearchConfig", "SearchResult", "SoundnessError", "check", "prove",
    "replay", "Problem", "Rule", "load_problem", "parse_problem",
]
