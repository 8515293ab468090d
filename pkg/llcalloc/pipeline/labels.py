"""Classifier training data and the classifier itself.

Labels are positions in the lexicographic allocation space of the optimum
found by exhaustive search under the digital twin(s).
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..allocator.evaluators import ComputeEvaluator, OracleEvaluator, TwinEvaluator
from ..allocator.search import exhaustive_best
from ..allocator.space import AllocationSpace, space_size
from ..core.encoding import encode_classifier_batch
from ..core.types import GlobalContext, PlatformSpec, VbsContext
from ..errors import ArtifactIOError, ValidationError
from ..nn.model import Head, MlpModel, init_model, mlp_layers, predict_classes
from ..nn.training import EpochRecord, TrainConfig, train
from ..oracle.compute import OracleParams, aggregate_compute
from ..oracle.sampling import sample_global_contexts
from ..utils.parallel import ordered_map
from ..utils.seeds import derive_seed
from ..utils.splits import DatasetSplit, split_indices

logger = logging.getLogger(__name__)

CLASSIFIER_HIDDEN = (512, 384, 384, 512)
CLASSIFIER_DROPOUT = 0.2
CONTEXT_FIELDS = ("d_ul", "d_dl", "snr", "mcs_ul", "mcs_dl")


def label_header(n_vbs: int) -> List[str]:
    columns = ["context_id"]
    for i in range(1, n_vbs + 1):
        columns.extend(f"{name}_{i}" for name in CONTEXT_FIELDS)
    columns.append("label")
    return columns


@dataclass
class ClassifierDataset:
    contexts: List[GlobalContext]
    labels: List[int]
    spec: PlatformSpec
    split: DatasetSplit
    seed: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.contexts) != len(self.labels):
            raise ValidationError(f"{len(self.contexts)} contexts but {len(self.labels)} labels")
        if self.split.size != len(self.labels):
            raise ValidationError(f"split covers {self.split.size} rows, dataset has {len(self.labels)}")
        n_classes = space_size(*self.space_signature)
        for label in self.labels:
            if not 0 <= label < n_classes:
                raise ValidationError(f"label {label} outside space of {n_classes} allocations")
        for gc in self.contexts:
            gc.validate_for(self.spec)

    @property
    def space_signature(self) -> Tuple[int, int]:
        return (self.spec.n_llc, self.spec.n_vbs)

    @property
    def rows(self) -> List[Tuple[GlobalContext, int]]:
        return list(zip(self.contexts, self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def arrays(self, ids: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        x = encode_classifier_batch([self.contexts[i] for i in ids], self.spec)
        y = np.array([self.labels[i] for i in ids], dtype=np.int64)
        return x, y

    def save(self, csv_path: Path, sidecar_path: Path) -> None:
        try:
            with open(csv_path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(label_header(self.spec.n_vbs))
                for context_id, (gc, label) in enumerate(self.rows):
                    row = [context_id]
                    for c in gc:
                        row.extend([repr(c.d_ul), repr(c.d_dl), repr(c.snr), c.mcs_ul, c.mcs_dl])
                    row.append(label)
                    writer.writerow(row)
            sidecar = {
                "spec": self.spec.to_dict(),
                "space_signature": list(self.space_signature),
                "seed": self.seed,
                "split": self.split.to_dict(),
                **self.metadata,
            }
            Path(sidecar_path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write labels: {e}") from e
        logger.info("Wrote %d labelled contexts to %s", len(self), csv_path)

    @classmethod
    def load(cls, csv_path: Path, sidecar_path: Path) -> "ClassifierDataset":
        try:
            sidecar = json.loads(Path(sidecar_path).read_text())
            spec = PlatformSpec.from_dict(sidecar["spec"])
            if tuple(sidecar["space_signature"]) != (spec.n_llc, spec.n_vbs):
                raise ArtifactIOError(f"{sidecar_path}: space signature does not match its platform")
            contexts, labels = [], []
            with open(csv_path, newline="") as f:
                reader = csv.reader(f)
                header = next(reader)
                if header != label_header(spec.n_vbs):
                    raise ArtifactIOError(f"{csv_path}: unexpected header")
                for line_number, row in enumerate(reader, start=2):
                    try:
                        if int(row[0]) != len(labels):
                            raise ValueError(f"context_id {row[0]} out of sequence")
                        blocks = row[1:-1]
                        if len(blocks) != 5 * spec.n_vbs:
                            raise ValueError(f"expected {5 * spec.n_vbs} context fields, got {len(blocks)}")
                        contexts.append(GlobalContext(tuple(
                            VbsContext(
                                float(blocks[j]), float(blocks[j + 1]), float(blocks[j + 2]),
                                int(blocks[j + 3]), int(blocks[j + 4]),
                            )
                            for j in range(0, len(blocks), 5)
                        )))
                        labels.append(int(row[-1]))
                    except (ValueError, IndexError) as e:
                        raise ArtifactIOError(f"{csv_path}: line {line_number}: {e}") from e
        except (OSError, json.JSONDecodeError, KeyError, StopIteration) as e:
            raise ArtifactIOError(f"Cannot read labels: {e}") from e

        known = {"spec", "space_signature", "seed", "split"}
        return cls(
            contexts=contexts,
            labels=labels,
            spec=spec,
            split=DatasetSplit.from_dict(sidecar["split"]),
            seed=sidecar.get("seed"),
            metadata={k: v for k, v in sidecar.items() if k not in known},
        )


def build_classifier_dataset(
    twins,
    spec: PlatformSpec,
    space: AllocationSpace,
    n_contexts: int,
    seed: int,
    profile: str = "uniform",
    workers: int = 1,
) -> ClassifierDataset:
    """Label ``n_contexts`` random global contexts with their searched optimum.

    ``twins`` is one twin, one twin per vBS, or any ComputeEvaluator (the
    noiseless oracle gives ground-truth labels).
    """
    if n_contexts < 1:
        raise ValidationError(f"n_contexts must be >= 1, got {n_contexts}")
    evaluator = twins if isinstance(twins, ComputeEvaluator) else TwinEvaluator(twins)
    contexts = sample_global_contexts(n_contexts, seed, spec.n_vbs, profile)
    logger.info(
        "Labelling %d contexts over %d allocations with the %s evaluator (seed %d)",
        n_contexts, len(space), evaluator.name, seed,
    )
    labels = ordered_map(
        lambda gc: exhaustive_best(gc, spec, space, evaluator).class_index, contexts, workers
    )
    distinct = len(set(labels))
    logger.info("Labels use %d distinct allocation classes", distinct)
    return ClassifierDataset(
        contexts=contexts,
        labels=labels,
        spec=spec,
        split=split_indices(n_contexts, derive_seed(seed, "split")),
        seed=seed,
        metadata={"profile": profile, "evaluator": evaluator.name, "distinct_labels": distinct},
    )


def label_agreement(
    ds: ClassifierDataset,
    space: AllocationSpace,
    params: OracleParams,
    tolerance: float = 0.01,
    workers: int = 1,
) -> float:
    """Share of contexts whose label is within ``tolerance`` of the true optimum."""
    oracle = OracleEvaluator(params)

    def agrees(row) -> bool:
        gc, label = row
        best = exhaustive_best(gc, ds.spec, space, oracle)
        return aggregate_compute(gc, space[label], ds.spec, params) <= (1.0 + tolerance) * best.total_cpu

    return float(np.mean(ordered_map(agrees, ds.rows, workers)))


@dataclass
class TrainedClassifier:
    model: MlpModel
    space_signature: Tuple[int, int]
    history: List[EpochRecord] = field(default_factory=list)
    stopped_at: int = 0
    best_iteration: int = 0
    early_stopped: bool = False
    test_accuracy: Optional[float] = None
    test_regret: Optional[float] = None

    def __post_init__(self):
        self.space_signature = tuple(self.space_signature)
        if self.model.head.k_classes != space_size(*self.space_signature):
            raise ValidationError(
                f"model has {self.model.head.k_classes} classes, space "
                f"{self.space_signature} has {space_size(*self.space_signature)}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.to_dict(),
            "space_signature": list(self.space_signature),
            "history": [record.to_dict() for record in self.history],
            "stopped_at": self.stopped_at,
            "best_iteration": self.best_iteration,
            "early_stopped": self.early_stopped,
            "test_accuracy": self.test_accuracy,
            "test_regret": self.test_regret,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainedClassifier":
        return cls(
            model=MlpModel.from_dict(data["model"]),
            space_signature=tuple(data["space_signature"]),
            history=[EpochRecord(**record) for record in data.get("history", [])],
            stopped_at=data.get("stopped_at", 0),
            best_iteration=data.get("best_iteration", 0),
            early_stopped=data.get("early_stopped", False),
            test_accuracy=data.get("test_accuracy"),
            test_regret=data.get("test_regret"),
        )

    def save(self, filepath: Path) -> None:
        try:
            Path(filepath).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write classifier {filepath}: {e}") from e

    @classmethod
    def load(cls, filepath: Path) -> "TrainedClassifier":
        try:
            data = json.loads(Path(filepath).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactIOError(f"Cannot read classifier {filepath}: {e}") from e
        return cls.from_dict(data)


def classifier_layers(spec: PlatformSpec, n_classes: int):
    return mlp_layers(6 * spec.n_vbs, CLASSIFIER_HIDDEN, n_classes, CLASSIFIER_DROPOUT)


def classifier_accuracy(model: MlpModel, ds: ClassifierDataset, ids: Sequence[int]) -> Optional[float]:
    if not ids:
        return None
    x, y = ds.arrays(ids)
    return float(np.mean(predict_classes(model, x) == y))


def classifier_regret(
    model: MlpModel,
    ds: ClassifierDataset,
    ids: Sequence[int],
    space: AllocationSpace,
    params: OracleParams,
) -> Optional[float]:
    """Mean relative excess true compute of predicted allocations over the true optimum."""
    if not ids:
        return None
    x, _ = ds.arrays(ids)
    oracle = OracleEvaluator(params)
    regrets = []
    for i, predicted in zip(ids, predict_classes(model, x)):
        gc = ds.contexts[i]
        best = exhaustive_best(gc, ds.spec, space, oracle).total_cpu
        chosen = aggregate_compute(gc, space[int(predicted)], ds.spec, params)
        regrets.append((chosen - best) / best)
    return float(np.mean(regrets))


def train_classifier(
    ds: ClassifierDataset,
    space: AllocationSpace,
    config: TrainConfig,
    params: Optional[OracleParams] = None,
) -> TrainedClassifier:
    """Fit the allocation classifier; regret is measured when ``params`` is given."""
    if config.loss != "cross_entropy":
        raise ValidationError(f"the classifier trains with cross_entropy, got '{config.loss}'")
    if space.signature != ds.space_signature:
        raise ValidationError(f"labels refer to space {ds.space_signature}, got {space.signature}")
    seed = 0 if config.seed is None else config.seed
    model = init_model(
        classifier_layers(ds.spec, len(space)),
        Head.classification(len(space)),
        seed=derive_seed(seed, "init"),
    )
    result = train(model, ds.arrays(ds.split.train), ds.arrays(ds.split.val), config)
    test_ids = list(ds.split.test)
    trained = TrainedClassifier(
        model=result.model,
        space_signature=space.signature,
        history=result.history,
        stopped_at=result.stopped_at,
        best_iteration=result.best_iteration,
        early_stopped=result.early_stopped,
        test_accuracy=classifier_accuracy(result.model, ds, test_ids),
        test_regret=None if params is None else classifier_regret(result.model, ds, test_ids, space, params),
    )
    logger.info(
        "Classifier trained: stopped at %d, test accuracy %s, regret %s",
        trained.stopped_at, trained.test_accuracy, trained.test_regret,
    )
    return trained
