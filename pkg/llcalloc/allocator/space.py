"""The feasible allocation space: compositions of N_LLC into N_vBS parts.

Allocations are kept in ascending lexicographic order; a position in that
order is the class label the classifier predicts, so the order is part of
the model format and must not change.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterator, Tuple

import numpy as np

from ..core.types import LlcAllocation
from ..errors import InfeasibleError


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Positive integer tuples of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def space_size(n_llc: int, n_vbs: int) -> int:
    return comb(n_llc - 1, n_vbs - 1)


@dataclass(frozen=True)
class AllocationSpace:
    n_llc: int
    n_vbs: int
    allocations: Tuple[LlcAllocation, ...]
    index_of: Dict[Tuple[int, ...], int] = field(compare=False, repr=False)
    ways_table: np.ndarray = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.allocations)

    def __getitem__(self, index: int) -> LlcAllocation:
        return self.allocations[index]

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.n_llc, self.n_vbs)

    def index(self, allocation: LlcAllocation) -> int:
        return self.index_of[allocation.ways]


def enumerate_allocations(n_llc: int, n_vbs: int) -> AllocationSpace:
    """Every way to give each of ``n_vbs`` vBS at least one of ``n_llc`` ways."""
    if n_vbs < 1 or n_llc < n_vbs:
        raise InfeasibleError(
            f"cannot give {n_vbs} vBS at least one way each out of {n_llc}"
        )
    ways = list(compositions(n_llc, n_vbs))
    return AllocationSpace(
        n_llc=n_llc,
        n_vbs=n_vbs,
        allocations=tuple(LlcAllocation(w, n_llc) for w in ways),
        index_of={w: i for i, w in enumerate(ways)},
        ways_table=np.array(ways, dtype=np.int64).reshape(len(ways), n_vbs),
    )
