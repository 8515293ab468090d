"""Per-vBS compute evaluators used by the exhaustive search."""

from abc import ABC, abstractmethod
from typing import Callable, Sequence, Union

import numpy as np

from ..core.types import VbsContext
from ..errors import ValidationError
from ..oracle.compute import OracleParams, true_compute
from ..twin.model import DigitalTwin, twin_predict, twin_sweep


class ComputeEvaluator(ABC):
    """Maps (context, cores, ways) of one vBS to its cpu usage."""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def compute(self, ctx: VbsContext, cores: int, ways: int, vbs_index: int = 0) -> float:
        pass

    def sweep(self, ctx: VbsContext, cores: int, n_llc: int, vbs_index: int = 0) -> np.ndarray:
        """Usage for ways = 1..n_llc."""
        return np.array(
            [self.compute(ctx, cores, ways, vbs_index) for ways in range(1, n_llc + 1)],
            dtype=np.float64,
        )


class OracleEvaluator(ComputeEvaluator):
    """The noiseless synthetic oracle (ground truth)."""

    def __init__(self, params: OracleParams):
        self.params = params

    @property
    def name(self) -> str:
        return "oracle"

    def compute(self, ctx, cores, ways, vbs_index=0):
        return true_compute(ctx, cores, ways, self.params)


class TwinEvaluator(ComputeEvaluator):
    """Digital-twin predictions; one twin shared, or one twin per vBS."""

    def __init__(self, twins: Union[DigitalTwin, Sequence[DigitalTwin]]):
        self.twins = [twins] if isinstance(twins, DigitalTwin) else list(twins)
        if not self.twins:
            raise ValidationError("TwinEvaluator needs at least one twin")

    @property
    def name(self) -> str:
        return "twin"

    def twin_for(self, vbs_index: int) -> DigitalTwin:
        if len(self.twins) == 1:
            return self.twins[0]
        if not 0 <= vbs_index < len(self.twins):
            raise ValidationError(f"no twin for vBS {vbs_index}; have {len(self.twins)}")
        return self.twins[vbs_index]

    def compute(self, ctx, cores, ways, vbs_index=0):
        return twin_predict(self.twin_for(vbs_index), ctx, cores, ways)

    def sweep(self, ctx, cores, n_llc, vbs_index=0):
        twin = self.twin_for(vbs_index)
        if n_llc != twin.spec.n_llc:
            raise ValidationError(f"twin covers {twin.spec.n_llc} ways, asked for {n_llc}")
        return twin_sweep(twin, ctx, cores)


class FunctionEvaluator(ComputeEvaluator):
    """Wrap a plain ``fn(ctx, cores, ways) -> cpu`` callable."""

    def __init__(self, fn: Callable[[VbsContext, int, int], float], name: str = "function"):
        self.fn = fn
        self._name = name

    @property
    def name(self) -> str:
        return self._name

    def compute(self, ctx, cores, ways, vbs_index=0):
        return float(self.fn(ctx, cores, ways))


def as_evaluator(evaluator) -> ComputeEvaluator:
    if isinstance(evaluator, ComputeEvaluator):
        return evaluator
    if callable(evaluator):
        return FunctionEvaluator(evaluator)
    raise ValidationError(f"not a compute evaluator: {evaluator!r}")
