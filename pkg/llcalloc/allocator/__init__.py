"""Allocation decisions: the feasible space, exhaustive search and policies."""

from .decisions import DecisionRecord, cumulative_energy, decision_loop, load_decisions, save_decisions
from .evaluators import ComputeEvaluator, FunctionEvaluator, OracleEvaluator, TwinEvaluator
from .policies import (
    AllocationPolicy,
    ClassifierPolicy,
    EqualPolicy,
    RandomPolicy,
    SearchPolicy,
    WeightedPolicy,
    baseline_equal,
    baseline_random,
    baseline_weighted,
    classifier_decide,
    optimal_policy,
    twin_search_policy,
)
from .search import SearchResult, compute_tables, exhaustive_best, naive_best
from .space import AllocationSpace, compositions, enumerate_allocations, space_size

__all__ = [
    "AllocationPolicy",
    "AllocationSpace",
    "ClassifierPolicy",
    "ComputeEvaluator",
    "DecisionRecord",
    "EqualPolicy",
    "FunctionEvaluator",
    "OracleEvaluator",
    "RandomPolicy",
    "SearchPolicy",
    "SearchResult",
    "TwinEvaluator",
    "WeightedPolicy",
    "baseline_equal",
    "baseline_random",
    "baseline_weighted",
    "classifier_decide",
    "compositions",
    "compute_tables",
    "cumulative_energy",
    "decision_loop",
    "enumerate_allocations",
    "exhaustive_best",
    "load_decisions",
    "naive_best",
    "optimal_policy",
    "save_decisions",
    "space_size",
    "twin_search_policy",
]
