"""Seeded train/validation/test partitions."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..errors import ValidationError

SPLIT_FRACTIONS = (0.70, 0.15, 0.15)
# Smallest size giving every partition at least one item.
MIN_SPLIT_CONTEXTS = 3


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint, exhaustive index partitions of ``range(size)``."""

    train: Tuple[int, ...]
    val: Tuple[int, ...]
    test: Tuple[int, ...]

    def __post_init__(self):
        for name in ("train", "val", "test"):
            object.__setattr__(self, name, tuple(int(i) for i in getattr(self, name)))
        merged = self.train + self.val + self.test
        if len(set(merged)) != len(merged):
            raise ValidationError("split partitions overlap")
        if sorted(merged) != list(range(len(merged))):
            raise ValidationError("split partitions do not cover every index")

    @property
    def size(self) -> int:
        return len(self.train) + len(self.val) + len(self.test)

    def to_dict(self) -> Dict[str, Any]:
        return {"train": list(self.train), "val": list(self.val), "test": list(self.test)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DatasetSplit":
        return cls(tuple(data["train"]), tuple(data["val"]), tuple(data["test"]))


def _share(fraction: float, size: int) -> int:
    return int(math.floor(fraction * size + 0.5))


def split_indices(size: int, seed: int) -> DatasetSplit:
    """Shuffle ``range(size)`` and cut it 70/15/15.

    Each partition keeps ascending order so downstream files are stable.
    """
    if size < 1:
        raise ValidationError(f"cannot split {size} items")
    order = np.random.default_rng(seed).permutation(size)
    n_val = _share(SPLIT_FRACTIONS[1], size)
    n_test = _share(SPLIT_FRACTIONS[2], size)
    if size >= MIN_SPLIT_CONTEXTS:
        n_val, n_test = max(n_val, 1), max(n_test, 1)
    n_train = size - n_val - n_test
    return DatasetSplit(
        train=tuple(sorted(order[:n_train].tolist())),
        val=tuple(sorted(order[n_train:n_train + n_val].tolist())),
        test=tuple(sorted(order[n_train + n_val:].tolist())),
    )
