"""Exhaustive search for the allocation with the least total compute.

Per-vBS usages do not interact, so each vBS is evaluated once per ways
value (N_vBS x N_LLC calls) and the totals of every allocation in the
space are assembled from those tables. Totals are accumulated in vBS index
order, matching a straight per-allocation sum bit for bit.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.types import GlobalContext, LlcAllocation, PlatformSpec
from ..errors import ValidationError
from .evaluators import as_evaluator
from .space import AllocationSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchResult:
    allocation: LlcAllocation
    total_cpu: float
    class_index: int


def _check_space(spec: PlatformSpec, space: AllocationSpace) -> None:
    if space.signature != (spec.n_llc, spec.n_vbs):
        raise ValidationError(
            f"space {space.signature} does not match platform ({spec.n_llc}, {spec.n_vbs})"
        )


def compute_tables(gc: GlobalContext, spec: PlatformSpec, evaluator) -> np.ndarray:
    """``tables[i, n - 1]`` is the usage of vBS ``i`` holding ``n`` ways."""
    gc.validate_for(spec)
    evaluator = as_evaluator(evaluator)
    return np.stack([
        evaluator.sweep(ctx, cores, spec.n_llc, vbs_index=index)
        for index, (ctx, cores) in enumerate(zip(gc.contexts, spec.core_sets))
    ])


def allocation_totals(tables: np.ndarray, space: AllocationSpace) -> np.ndarray:
    totals = np.zeros(len(space), dtype=np.float64)
    for index in range(space.n_vbs):
        totals += tables[index, space.ways_table[:, index] - 1]
    return totals


def exhaustive_best(gc: GlobalContext, spec: PlatformSpec, space: AllocationSpace, evaluator) -> SearchResult:
    """Least-compute allocation; the lexicographically smallest one on ties."""
    _check_space(spec, space)
    totals = allocation_totals(compute_tables(gc, spec, evaluator), space)
    best = int(np.argmin(totals))
    return SearchResult(space[best], float(totals[best]), best)


def naive_best(gc: GlobalContext, spec: PlatformSpec, space: AllocationSpace, evaluator) -> SearchResult:
    """Reference search re-evaluating every vBS for every allocation."""
    _check_space(spec, space)
    gc.validate_for(spec)
    evaluator = as_evaluator(evaluator)
    best_index, best_total = -1, float("inf")
    for position, allocation in enumerate(space.allocations):
        total = 0.0
        for index, (ctx, cores, ways) in enumerate(zip(gc.contexts, spec.core_sets, allocation.ways)):
            total += evaluator.compute(ctx, cores, ways, index)
        if total < best_total:
            best_index, best_total = position, total
    return SearchResult(space[best_index], best_total, best_index)
