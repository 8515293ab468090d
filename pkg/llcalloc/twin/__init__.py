"""Digital twin of a vBS: dataset generation, training and inference."""

from .dataset import TwinDataset, generate_twin_dataset
from .model import DigitalTwin, TwinFidelity, train_twin, twin_fidelity, twin_predict, twin_sweep

__all__ = [
    "DigitalTwin",
    "TwinDataset",
    "TwinFidelity",
    "generate_twin_dataset",
    "train_twin",
    "twin_fidelity",
    "twin_predict",
    "twin_sweep",
]
