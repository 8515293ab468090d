"""Dense feed-forward networks on numpy.

Weights are stored ``(output_dim, input_dim)``; a layer maps a row batch
``A`` to ``act(A @ W.T + b)``. Dropout is inverted: surviving units are
scaled by ``1 / (1 - p)`` during training so inference needs no rescaling.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ArtifactIOError, NumericError, ValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ACTIVATIONS = ("relu", "identity")
LOSSES = ("mse", "cross_entropy")


@dataclass(frozen=True)
class LayerSpec:
    input_dim: int
    output_dim: int
    activation: str = "relu"
    dropout_p: float = 0.0

    def __post_init__(self):
        if self.input_dim < 1 or self.output_dim < 1:
            raise ValidationError(f"layer dims must be >= 1, got {self.input_dim}->{self.output_dim}")
        if self.activation not in ACTIVATIONS:
            raise ValidationError(f"activation must be one of {ACTIVATIONS}, got '{self.activation}'")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValidationError(f"dropout_p must be in [0, 1), got {self.dropout_p}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_dim": self.input_dim,
            "output_dim": self.output_dim,
            "activation": self.activation,
            "dropout_p": self.dropout_p,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LayerSpec":
        return cls(
            input_dim=int(data["input_dim"]),
            output_dim=int(data["output_dim"]),
            activation=data["activation"],
            dropout_p=float(data["dropout_p"]),
        )


@dataclass(frozen=True)
class Head:
    """Output interpretation: a regression value or class logits."""

    kind: str
    k_classes: Optional[int] = None

    def __post_init__(self):
        if self.kind == "regression":
            if self.k_classes is not None:
                raise ValidationError("regression head takes no k_classes")
        elif self.kind == "classification":
            if self.k_classes is None or self.k_classes < 1:
                raise ValidationError(f"classification head needs k_classes >= 1, got {self.k_classes}")
        else:
            raise ValidationError(f"unknown head '{self.kind}'")

    @classmethod
    def regression(cls) -> "Head":
        return cls("regression")

    @classmethod
    def classification(cls, k_classes: int) -> "Head":
        return cls("classification", k_classes)

    @property
    def is_classifier(self) -> bool:
        return self.kind == "classification"

    @property
    def loss(self) -> str:
        return "cross_entropy" if self.is_classifier else "mse"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "k_classes": self.k_classes}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Head":
        return cls(data["kind"], data.get("k_classes"))


@dataclass
class MlpModel:
    layers: List[LayerSpec]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    head: Head

    def __post_init__(self):
        if not self.layers:
            raise ValidationError("a model needs at least one layer")
        if not (len(self.layers) == len(self.weights) == len(self.biases)):
            raise ValidationError("layers, weights and biases differ in length")
        for index, (spec, w, b) in enumerate(zip(self.layers, self.weights, self.biases)):
            if index > 0 and self.layers[index - 1].output_dim != spec.input_dim:
                raise ValidationError(
                    f"layer {index} expects {spec.input_dim} inputs, "
                    f"previous layer emits {self.layers[index - 1].output_dim}"
                )
            if w.shape != (spec.output_dim, spec.input_dim) or b.shape != (spec.output_dim,):
                raise ValidationError(f"layer {index} parameter shapes do not match its spec")
        if self.head.is_classifier and self.output_dim != self.head.k_classes:
            raise ValidationError(
                f"classification head has {self.head.k_classes} classes, "
                f"network emits {self.output_dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.layers[0].input_dim

    @property
    def output_dim(self) -> int:
        return self.layers[-1].output_dim

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "MlpModel":
        return MlpModel(
            layers=list(self.layers),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            head=self.head,
        )

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.weights + self.biases)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "head": self.head.to_dict(),
            "layer_specs": [spec.to_dict() for spec in self.layers],
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MlpModel":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValidationError(f"unsupported model schema_version {version!r}")
        layers = [LayerSpec.from_dict(spec) for spec in data["layer_specs"]]
        weights = [
            np.array(w, dtype=np.float64).reshape(spec.output_dim, spec.input_dim)
            for w, spec in zip(data["weights"], layers)
        ]
        biases = [np.array(b, dtype=np.float64) for b in data["biases"]]
        return cls(layers=layers, weights=weights, biases=biases, head=Head.from_dict(data["head"]))

    def save(self, filepath: Path) -> None:
        """Write the model as one JSON document; floats round-trip exactly."""
        try:
            Path(filepath).write_text(json.dumps(self.to_dict()) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write model {filepath}: {e}") from e

    @classmethod
    def load(cls, filepath: Path) -> "MlpModel":
        try:
            data = json.loads(Path(filepath).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactIOError(f"Cannot read model {filepath}: {e}") from e
        return cls.from_dict(data)


@dataclass
class Gradients:
    weights: List[np.ndarray] = field(default_factory=list)
    biases: List[np.ndarray] = field(default_factory=list)


def mlp_layers(
    input_dim: int,
    hidden: Sequence[int],
    output_dim: int,
    dropout_p: float = 0.0,
) -> List[LayerSpec]:
    """ReLU hidden layers (with optional dropout) and an identity output layer."""
    dims = [input_dim] + list(hidden)
    specs = [
        LayerSpec(dims[i], dims[i + 1], "relu", dropout_p) for i in range(len(dims) - 1)
    ]
    specs.append(LayerSpec(dims[-1], output_dim, "identity", 0.0))
    return specs


def init_model(specs: Sequence[LayerSpec], head: Head, seed: int) -> MlpModel:
    """Scaled-uniform weights, zero biases; deterministic per seed."""
    rng = np.random.default_rng(seed)
    specs = list(specs)
    for index in range(1, len(specs)):
        if specs[index - 1].output_dim != specs[index].input_dim:
            raise ValidationError(
                f"layer {index} expects {specs[index].input_dim} inputs, "
                f"previous layer emits {specs[index - 1].output_dim}"
            )
    weights, biases = [], []
    for spec in specs:
        bound = np.sqrt(6.0 / (spec.input_dim + spec.output_dim))
        weights.append(rng.uniform(-bound, bound, size=(spec.output_dim, spec.input_dim)))
        biases.append(np.zeros(spec.output_dim))
    return MlpModel(layers=specs, weights=weights, biases=biases, head=head)


def _as_batch(model: MlpModel, x) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x.reshape(1, -1) if single else x
    if batch.ndim != 2 or batch.shape[1] != model.input_dim:
        raise ValidationError(f"model expects {model.input_dim} features, got shape {x.shape}")
    return batch, single


def _forward_pass(model: MlpModel, batch: np.ndarray, training: bool, rng: Optional[np.random.Generator]):
    inputs, pre_activations, masks = [], [], []
    a = batch
    for index, (spec, w, b) in enumerate(zip(model.layers, model.weights, model.biases)):
        inputs.append(a)
        z = a @ w.T + b
        a = np.maximum(z, 0.0) if spec.activation == "relu" else z
        mask = None
        if training and spec.dropout_p > 0.0:
            keep = 1.0 - spec.dropout_p
            mask = (rng.random(a.shape) < keep) / keep
            a = a * mask
        if not np.all(np.isfinite(a)):
            raise NumericError(f"non-finite activations in layer {index}", layer_index=index)
        pre_activations.append(z)
        masks.append(mask)
    return a, inputs, pre_activations, masks


def forward(
    model: MlpModel,
    x,
    training: bool = False,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Run the network on one feature vector or a row batch.

    Dropout is active only when ``training`` is set; its masks come from
    ``rng``, else from ``seed`` (0 when neither is given).
    """
    batch, single = _as_batch(model, x)
    if training and rng is None:
        rng = np.random.default_rng(0 if seed is None else seed)
    out, _, _, _ = _forward_pass(model, batch, training, rng)
    return out[0] if single else out


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


def output_loss(model: MlpModel, out: np.ndarray, targets, loss: str):
    """Loss value and its gradient with respect to the network outputs."""
    n = out.shape[0]
    if loss == "mse":
        y = np.asarray(targets, dtype=np.float64).reshape(n, -1)
        if y.shape != out.shape:
            raise ValidationError(f"targets shape {y.shape} does not match outputs {out.shape}")
        diff = out - y
        return float(np.mean(diff ** 2)), 2.0 * diff / diff.size
    if loss == "cross_entropy":
        if not model.head.is_classifier:
            raise ValidationError("cross_entropy needs a classification head")
        labels = np.asarray(targets)
        if labels.shape != (n,) or not np.issubdtype(labels.dtype, np.integer):
            raise ValidationError("cross_entropy targets must be one integer label per row")
        if labels.min() < 0 or labels.max() >= model.head.k_classes:
            raise ValidationError(
                f"labels must be in [0, {model.head.k_classes}), got range "
                f"[{labels.min()}, {labels.max()}]"
            )
        logp = log_softmax(out)
        rows = np.arange(n)
        value = float(-np.mean(logp[rows, labels]))
        grad = np.exp(logp)
        grad[rows, labels] -= 1.0
        return value, grad / n
    raise ValidationError(f"loss must be one of {LOSSES}, got '{loss}'")


def loss_and_gradients(
    model: MlpModel,
    x,
    targets,
    loss: str,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, Gradients]:
    """Batch-mean loss and its gradient for every weight and bias."""
    batch, _ = _as_batch(model, x)
    if batch.shape[0] == 0:
        raise ValidationError("cannot compute a loss on an empty batch")
    if training and rng is None:
        rng = np.random.default_rng(0)
    out, inputs, pre_activations, masks = _forward_pass(model, batch, training, rng)
    value, delta = output_loss(model, out, targets, loss)

    n_layers = len(model.layers)
    grads = Gradients(weights=[None] * n_layers, biases=[None] * n_layers)
    for index in reversed(range(n_layers)):
        if masks[index] is not None:
            delta = delta * masks[index]
        if model.layers[index].activation == "relu":
            delta = delta * (pre_activations[index] > 0.0)
        grads.weights[index] = delta.T @ inputs[index]
        grads.biases[index] = delta.sum(axis=0)
        if index > 0:
            delta = delta @ model.weights[index]
    return value, grads


def predict_proba(model: MlpModel, x) -> np.ndarray:
    if not model.head.is_classifier:
        raise ValidationError("predict_proba needs a classification head")
    return softmax(forward(model, x))


def predict_class(model: MlpModel, x) -> Tuple[int, np.ndarray]:
    """Most likely class (lowest index on ties) and the class probabilities."""
    probs = predict_proba(model, x)
    if probs.ndim != 1:
        raise ValidationError("predict_class takes a single feature vector")
    return int(np.argmax(probs)), probs


def predict_classes(model: MlpModel, x) -> np.ndarray:
    return np.argmax(predict_proba(model, x), axis=-1)
