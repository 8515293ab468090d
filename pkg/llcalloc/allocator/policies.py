"""Allocation policies: the learned classifier, exhaustive search and baselines.

Every policy is a deterministic function of (global context, seed). Only
the equal-partition baseline may leave ways unallocated.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np

from ..core.encoding import encode_classifier_features
from ..core.types import GlobalContext, LlcAllocation, PlatformSpec
from ..errors import InfeasibleError, ModelSpaceMismatchError
from ..nn.model import MlpModel, predict_class
from ..utils.seeds import rng_for
from .evaluators import ComputeEvaluator, OracleEvaluator, TwinEvaluator, as_evaluator
from .search import exhaustive_best
from .space import AllocationSpace

logger = logging.getLogger(__name__)

EQUAL_FALLBACK = "equal"


def baseline_random(space: AllocationSpace, seed: int) -> LlcAllocation:
    """Uniform draw over the feasible allocations."""
    index = int(np.random.default_rng(seed).integers(len(space)))
    return space[index]


def baseline_equal(spec: PlatformSpec) -> LlcAllocation:
    """floor(N_LLC / N_vBS) ways each; the remainder stays unallocated."""
    share = spec.n_llc // spec.n_vbs
    if share < 1:
        raise InfeasibleError(f"{spec.n_llc} ways cannot give {spec.n_vbs} vBS one way each")
    return LlcAllocation((share,) * spec.n_vbs, spec.n_llc, partial=True)


def _largest_remainder(raw: List[float], total: int) -> List[int]:
    ways = [int(math.floor(r)) for r in raw]
    leftover = total - sum(ways)
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - ways[i]), i))
    for i in order[:leftover]:
        ways[i] += 1
    return ways


def _repair_minimum(ways: List[int]) -> List[int]:
    for i in range(len(ways)):
        while ways[i] < 1:
            donor = max(range(len(ways)), key=lambda j: (ways[j], -j))
            ways[donor] -= 1
            ways[i] += 1
    return ways


def baseline_weighted(gc: GlobalContext, spec: PlatformSpec) -> LlcAllocation:
    """Ways proportional to each vBS's total demand d_ul + d_dl.

    Shares are floored, leftover ways go one at a time to the largest
    fractional remainders (lower index first on ties), then any vBS left
    with zero ways takes one from the largest holder. All-zero demand
    falls back to the equal partition, flagged in ``fallback``.
    """
    gc.validate_for(spec)
    demands = [ctx.total_demand for ctx in gc]
    total = sum(demands)
    if total <= 0.0:
        logger.info("All demands are zero, weighted baseline falls back to equal partition")
        equal = baseline_equal(spec)
        return LlcAllocation(equal.ways, equal.n_llc, partial=True, fallback=EQUAL_FALLBACK)

    raw = [d * spec.n_llc / total for d in demands]
    ways = _repair_minimum(_largest_remainder(raw, spec.n_llc))
    return LlcAllocation(tuple(ways), spec.n_llc)


def check_classifier(clf: MlpModel, spec: PlatformSpec, space: AllocationSpace) -> None:
    if not clf.head.is_classifier:
        raise ModelSpaceMismatchError("model has a regression head, expected a classifier")
    if clf.head.k_classes != len(space):
        raise ModelSpaceMismatchError(
            f"classifier predicts {clf.head.k_classes} classes, space {space.signature} has {len(space)}"
        )
    expected = 6 * spec.n_vbs
    if clf.input_dim != expected:
        raise ModelSpaceMismatchError(
            f"classifier takes {clf.input_dim} features, platform needs {expected}"
        )


def classifier_decide(gc: GlobalContext, spec: PlatformSpec, clf: MlpModel, space: AllocationSpace) -> LlcAllocation:
    """Predict the optimal allocation class and decode it from the space."""
    check_classifier(clf, spec, space)
    index, _ = predict_class(clf, encode_classifier_features(gc, spec))
    if not 0 <= index < len(space):
        raise ModelSpaceMismatchError(f"class {index} outside space of {len(space)}")
    return space[index]


class AllocationPolicy(ABC):
    """A named decision rule. ``evaluator``, when given, supplies predicted cpu."""

    def __init__(self, spec: PlatformSpec, evaluator: Optional[ComputeEvaluator] = None):
        self.spec = spec
        self.evaluator = as_evaluator(evaluator) if evaluator is not None else None

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def decide(self, gc: GlobalContext, seed: Optional[int] = None) -> LlcAllocation:
        pass

    def decide_with_prediction(self, gc: GlobalContext, seed: Optional[int] = None):
        """The allocation and the cpu this policy expects it to use (or None)."""
        allocation = self.decide(gc, seed)
        return allocation, self.predicted_cpu(gc, allocation)

    def predicted_cpu(self, gc: GlobalContext, allocation: LlcAllocation) -> Optional[float]:
        if self.evaluator is None:
            return None
        total = 0.0
        for index, (ctx, cores, ways) in enumerate(zip(gc.contexts, self.spec.core_sets, allocation.ways)):
            total += self.evaluator.compute(ctx, cores, ways, index)
        return total


class RandomPolicy(AllocationPolicy):
    name = "random"

    def __init__(self, spec: PlatformSpec, space: AllocationSpace, evaluator=None):
        super().__init__(spec, evaluator)
        self.space = space

    def decide(self, gc, seed=None):
        return baseline_random(self.space, 0 if seed is None else seed)


class EqualPolicy(AllocationPolicy):
    name = "equal"

    def decide(self, gc, seed=None):
        gc.validate_for(self.spec)
        return baseline_equal(self.spec)


class WeightedPolicy(AllocationPolicy):
    name = "weighted"

    def decide(self, gc, seed=None):
        return baseline_weighted(gc, self.spec)


class ClassifierPolicy(AllocationPolicy):
    name = "classifier"

    def __init__(self, spec: PlatformSpec, space: AllocationSpace, model: MlpModel, evaluator=None):
        super().__init__(spec, evaluator)
        check_classifier(model, spec, space)
        self.space = space
        self.model = model

    def decide(self, gc, seed=None):
        return classifier_decide(gc, self.spec, self.model, self.space)


class SearchPolicy(AllocationPolicy):
    """Exhaustive search at decision time; its predicted cpu is the search minimum."""

    def __init__(self, spec: PlatformSpec, space: AllocationSpace, evaluator, name: str):
        super().__init__(spec, evaluator)
        self.space = space
        self._name = name

    @property
    def name(self) -> str:
        return self._name

    def decide(self, gc, seed=None):
        return exhaustive_best(gc, self.spec, self.space, self.evaluator).allocation

    def decide_with_prediction(self, gc, seed=None):
        result = exhaustive_best(gc, self.spec, self.space, self.evaluator)
        return result.allocation, result.total_cpu


def optimal_policy(spec: PlatformSpec, space: AllocationSpace, params) -> SearchPolicy:
    """Exhaustive search under the noiseless oracle: the upper bound."""
    return SearchPolicy(spec, space, OracleEvaluator(params), "optimal")


def twin_search_policy(spec: PlatformSpec, space: AllocationSpace, twins) -> SearchPolicy:
    return SearchPolicy(spec, space, TwinEvaluator(twins), "twin_search")
