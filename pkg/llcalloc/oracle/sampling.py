"""Random vBS context generation.

Profiles:
    uniform       demands ~ U[0, 1], SNR ~ U[0, 30] dB
    high_traffic  demands ~ U[0.5, 1]
    imbalanced    one direction ~ U[0.7, 1], the other ~ U[0, 0.3]

MCS always follows the scheduler map of the sampled SNR.
"""

from typing import Callable, Dict, List, Tuple

import numpy as np

from ..core.encoding import context_from_snr
from ..core.types import SNR_MAX_DB, GlobalContext, VbsContext
from ..errors import ValidationError
from ..utils.seeds import rng_for


def _uniform(rng: np.random.Generator) -> Tuple[float, float]:
    return float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0))


def _high_traffic(rng: np.random.Generator) -> Tuple[float, float]:
    return float(rng.uniform(0.5, 1.0)), float(rng.uniform(0.5, 1.0))


def _imbalanced(rng: np.random.Generator) -> Tuple[float, float]:
    high = float(rng.uniform(0.7, 1.0))
    low = float(rng.uniform(0.0, 0.3))
    return (high, low) if rng.random() < 0.5 else (low, high)


PROFILES: Dict[str, Callable[[np.random.Generator], Tuple[float, float]]] = {
    "uniform": _uniform,
    "high_traffic": _high_traffic,
    "imbalanced": _imbalanced,
}


def sample_context(rng: np.random.Generator, profile: str = "uniform") -> VbsContext:
    try:
        demands = PROFILES[profile]
    except KeyError:
        raise ValidationError(
            f"unknown context profile '{profile}', choose from {sorted(PROFILES)}"
        ) from None
    d_ul, d_dl = demands(rng)
    snr = float(rng.uniform(0.0, SNR_MAX_DB))
    return context_from_snr(d_ul, d_dl, snr)


def sample_global_context(
    rng: np.random.Generator, n_vbs: int, profile: str = "uniform"
) -> GlobalContext:
    return GlobalContext(tuple(sample_context(rng, profile) for _ in range(n_vbs)))


def sample_global_contexts(count: int, seed: int, n_vbs: int, profile: str = "uniform") -> List[GlobalContext]:
    """``count`` global contexts, the k-th drawn from its own derived stream."""
    return [
        sample_global_context(rng_for(seed, "global_context", k), n_vbs, profile)
        for k in range(count)
    ]
