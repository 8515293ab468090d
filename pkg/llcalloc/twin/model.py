"""Per-vBS digital twin: a regression network predicting cpu usage.

Inputs are the seven normalized twin features; the target stays in cores.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..core.encoding import TWIN_FEATURES, encode_twin_inputs, encode_twin_sweep
from ..core.types import PlatformSpec, VbsContext
from ..errors import ArtifactIOError, ConstraintViolationError, ValidationError
from ..nn.model import Head, MlpModel, forward, init_model, mlp_layers
from ..nn.training import EpochRecord, TrainConfig, train
from ..oracle.compute import OracleParams, true_compute
from ..utils.seeds import derive_seed
from .dataset import TwinDataset

logger = logging.getLogger(__name__)

TWIN_HIDDEN = (256, 128, 64)
MIN_PREDICTION = 1e-6


def twin_layers():
    return mlp_layers(TWIN_FEATURES, TWIN_HIDDEN, 1)


@dataclass
class DigitalTwin:
    model: MlpModel
    spec: PlatformSpec
    test_mse: Optional[float] = None
    history: List[EpochRecord] = field(default_factory=list)
    stopped_at: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.model.layers != twin_layers() or self.model.head != Head.regression():
            raise ValidationError(
                "twin network must be 7 -> 256 -> 128 -> 64 -> 1 with ReLU hidden layers"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.to_dict(),
            "spec": self.spec.to_dict(),
            "test_mse": self.test_mse,
            "history": [record.to_dict() for record in self.history],
            "stopped_at": self.stopped_at,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DigitalTwin":
        return cls(
            model=MlpModel.from_dict(data["model"]),
            spec=PlatformSpec.from_dict(data["spec"]),
            test_mse=data.get("test_mse"),
            history=[EpochRecord(**record) for record in data.get("history", [])],
            stopped_at=data.get("stopped_at", 0),
            metadata=data.get("metadata", {}),
        )

    def save(self, filepath: Path) -> None:
        try:
            Path(filepath).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write twin {filepath}: {e}") from e

    @classmethod
    def load(cls, filepath: Path) -> "DigitalTwin":
        try:
            data = json.loads(Path(filepath).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactIOError(f"Cannot read twin {filepath}: {e}") from e
        return cls.from_dict(data)


def _check_inputs(dt: DigitalTwin, cores: int, ways: int) -> None:
    if not 1 <= ways <= dt.spec.n_llc:
        raise ConstraintViolationError(f"ways must be in [1, {dt.spec.n_llc}], got {ways}")
    if not 1 <= cores <= dt.spec.m_cores:
        raise ValidationError(f"cores must be in [1, {dt.spec.m_cores}], got {cores}")


def _clamp(values, cores: int):
    return np.clip(values, MIN_PREDICTION, float(cores))


def twin_predict(dt: DigitalTwin, ctx: VbsContext, cores: int, ways: int) -> float:
    """Predicted cpu usage, clamped to (0, cores]."""
    _check_inputs(dt, cores, ways)
    out = forward(dt.model, encode_twin_inputs(ctx, cores, ways, dt.spec))
    return float(_clamp(out[0], cores))


def twin_sweep(dt: DigitalTwin, ctx: VbsContext, cores: int) -> np.ndarray:
    """Predictions for ways = 1..N_LLC from a single batched forward pass."""
    _check_inputs(dt, cores, 1)
    out = forward(dt.model, encode_twin_sweep(ctx, cores, dt.spec))
    return _clamp(out[:, 0], cores)


def train_twin(ds: TwinDataset, config: TrainConfig) -> DigitalTwin:
    """Fit the twin network on the dataset's train split, stop on its val split."""
    if config.loss != "mse":
        raise ValidationError(f"the twin trains with mse, got '{config.loss}'")
    seed = 0 if config.seed is None else config.seed
    model = init_model(twin_layers(), Head.regression(), seed=derive_seed(seed, "init"))
    result = train(model, ds.arrays(ds.split.train), ds.arrays(ds.split.val), config)

    dt = DigitalTwin(
        model=result.model,
        spec=ds.spec,
        history=result.history,
        stopped_at=result.stopped_at,
        metadata={"best_iteration": result.best_iteration, "early_stopped": result.early_stopped},
    )
    dt.test_mse = twin_test_mse(dt, ds)
    logger.info(
        "Twin trained: stopped at %d (best %d), test MSE %s",
        result.stopped_at, result.best_iteration, dt.test_mse,
    )
    return dt


def twin_test_mse(dt: DigitalTwin, ds: TwinDataset, context_ids: Optional[Iterable[int]] = None) -> Optional[float]:
    """MSE of clamped predictions against the recorded cpu values."""
    context_ids = ds.split.test if context_ids is None else list(context_ids)
    if not context_ids:
        return None
    errors = []
    for k, (ctx, cores) in zip(context_ids, ds.contexts(context_ids)):
        measured = np.array([ds.samples[i].cpu_usage for i in ds.sample_indices([k])])
        errors.append(twin_sweep(dt, ctx, cores) - measured)
    return float(np.mean(np.square(np.concatenate(errors))))


@dataclass(frozen=True)
class TwinFidelity:
    """Agreement between twin and noiseless oracle over a set of contexts."""

    n_contexts: int
    mean_relative_error: float
    within_10pct: float
    ranking_fidelity: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_contexts": self.n_contexts,
            "mean_relative_error": self.mean_relative_error,
            "within_10pct": self.within_10pct,
            "ranking_fidelity": self.ranking_fidelity,
        }


def twin_fidelity(
    dt: DigitalTwin,
    params: OracleParams,
    contexts: Iterable[Tuple[VbsContext, int]],
    tolerance: float = 0.01,
) -> TwinFidelity:
    """Compare the twin with the noiseless oracle at every ways value.

    A context ranks correctly when the twin's best ways value is the
    oracle's, or costs at most ``tolerance`` more than the true minimum.
    """
    relative, ranked, n = [], 0, 0
    for ctx, cores in contexts:
        truth = np.array(
            [true_compute(ctx, cores, ways, params) for ways in range(1, dt.spec.n_llc + 1)]
        )
        predicted = twin_sweep(dt, ctx, cores)
        relative.extend(np.abs(predicted - truth) / truth)
        pick = int(np.argmin(predicted))
        if pick == int(np.argmin(truth)) or truth[pick] <= (1.0 + tolerance) * truth.min():
            ranked += 1
        n += 1
    if n == 0:
        raise ValidationError("twin fidelity needs at least one context")
    relative = np.asarray(relative)
    return TwinFidelity(
        n_contexts=n,
        mean_relative_error=float(relative.mean()),
        within_10pct=float(np.mean(relative <= 0.10)),
        ranking_fidelity=ranked / n,
    )
