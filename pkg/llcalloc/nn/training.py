"""Mini-batch Adam training with early stopping on validation loss.

One iteration is one epoch over the shuffled training set. Validation loss
is computed dropout-free after every iteration; training stops once it has
not improved for ``patience`` iterations and the best snapshot is returned.
"""

import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import NumericError, TrainingDivergedError, ValidationError
from .model import LOSSES, MlpModel, forward, loss_and_gradients, output_loss

logger = logging.getLogger(__name__)

Dataset = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    batch_size: int = 64
    max_iterations: int = 200
    patience: int = 10
    seed: Optional[int] = None
    loss: str = "mse"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValidationError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.patience < 1:
            raise ValidationError(f"patience must be >= 1, got {self.patience}")
        if self.loss not in LOSSES:
            raise ValidationError(f"loss must be one of {LOSSES}, got '{self.loss}'")

    def with_seed(self, seed: int) -> "TrainConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown training options: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class EpochRecord:
    iteration: int
    train_loss: float
    val_loss: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class TrainingResult:
    model: MlpModel
    history: List[EpochRecord]
    stopped_at: int
    best_iteration: int
    early_stopped: bool = False

    @property
    def best_val_loss(self) -> float:
        return min(record.val_loss for record in self.history)


class EarlyStopping:
    """Track the best validation loss and count iterations without progress."""

    def __init__(self, patience: int):
        if patience < 1:
            raise ValidationError(f"patience must be >= 1, got {patience}")
        self.patience = patience
        self.best_loss = math.inf
        self.best_iteration = 0
        self.wait = 0

    def update(self, iteration: int, val_loss: float) -> bool:
        """Record one iteration; returns True when it set a new best."""
        if val_loss < self.best_loss:
            self.best_loss = val_loss
            self.best_iteration = iteration
            self.wait = 0
            return True
        self.wait += 1
        return False

    @property
    def should_stop(self) -> bool:
        return self.wait >= self.patience


class AdamOptimizer:
    """Adam with bias correction, updating model parameters in place."""

    def __init__(self, model: MlpModel, learning_rate: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        params = model.weights + model.biases
        self._m = [np.zeros_like(p) for p in params]
        self._v = [np.zeros_like(p) for p in params]

    def step(self, model: MlpModel, grads) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        params = model.weights + model.biases
        for p, g, m, v in zip(params, grads.weights + grads.biases, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def evaluate_loss(model: MlpModel, dataset: Dataset, loss: str) -> float:
    """Dropout-free loss over a whole dataset."""
    x, y = dataset
    out = forward(model, x)
    value, _ = output_loss(model, np.atleast_2d(out), y, loss)
    return value


def _check_dataset(name: str, dataset: Dataset) -> None:
    x, y = dataset
    if len(x) == 0:
        raise ValidationError(f"{name} set is empty")
    if len(x) != len(y):
        raise ValidationError(f"{name} set has {len(x)} inputs and {len(y)} targets")


def train(model: MlpModel, train_set: Dataset, val_set: Dataset, config: TrainConfig) -> TrainingResult:
    """Train a copy of ``model``; the argument itself is left untouched."""
    _check_dataset("training", train_set)
    _check_dataset("validation", val_set)
    if config.loss != model.head.loss:
        raise ValidationError(f"loss '{config.loss}' does not fit a {model.head.kind} head")

    x_train = np.asarray(train_set[0], dtype=np.float64)
    y_train = np.asarray(train_set[1])
    n = len(x_train)
    rng = np.random.default_rng(0 if config.seed is None else config.seed)
    working = model.copy()
    optimizer = AdamOptimizer(working, config.learning_rate)
    stopper = EarlyStopping(config.patience)
    best = working.copy()
    history: List[EpochRecord] = []

    logger.info(
        "Training %s model (%d params) on %d samples, %d validation",
        working.head.kind, working.n_params, n, len(val_set[0]),
    )
    iteration = 0
    for iteration in range(1, config.max_iterations + 1):
        order = rng.permutation(n)
        total = 0.0
        try:
            for start in range(0, n, config.batch_size):
                idx = order[start:start + config.batch_size]
                value, grads = loss_and_gradients(
                    working, x_train[idx], y_train[idx], config.loss, training=True, rng=rng
                )
                optimizer.step(working, grads)
                total += value * len(idx)
            val_loss = evaluate_loss(working, val_set, config.loss)
        except NumericError as e:
            raise TrainingDivergedError(f"training diverged at iteration {iteration}: {e}", history) from e

        record = EpochRecord(iteration, total / n, val_loss)
        history.append(record)
        if not math.isfinite(val_loss) or not working.is_finite():
            raise TrainingDivergedError(
                f"validation loss became {val_loss} at iteration {iteration}", history
            )
        logger.debug("iteration %d: train %.6g, val %.6g", iteration, record.train_loss, val_loss)

        if stopper.update(iteration, val_loss):
            best = working.copy()
        if stopper.should_stop:
            logger.info(
                "Early stop at iteration %d; best validation loss %.6g at iteration %d",
                iteration, stopper.best_loss, stopper.best_iteration,
            )
            return TrainingResult(best, history, iteration, stopper.best_iteration, True)

    return TrainingResult(best, history, iteration, stopper.best_iteration, False)
