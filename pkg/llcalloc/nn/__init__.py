"""Feed-forward networks: model, gradients and training."""

from .model import (
    Head,
    LayerSpec,
    MlpModel,
    forward,
    init_model,
    loss_and_gradients,
    mlp_layers,
    predict_class,
    predict_classes,
)
from .training import EarlyStopping, EpochRecord, TrainConfig, TrainingResult, train

__all__ = [
    "EarlyStopping",
    "EpochRecord",
    "Head",
    "LayerSpec",
    "MlpModel",
    "TrainConfig",
    "TrainingResult",
    "forward",
    "init_model",
    "loss_and_gradients",
    "mlp_layers",
    "predict_class",
    "predict_classes",
    "train",
]
