"""Synthetic ground-truth compute model of a vBS.

Stands in for measurements on a physical testbed. The closed form keeps the
qualitative shape observed on real hardware:

* compute falls as a vBS receives more cache ways, with diminishing returns;
* busier vBS gain more from cache;
* low SNR inflates uplink decoding work;
* higher MCS costs more per unit of demand.

The parameter values are synthetic and never presented as measured.
"""

import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

import numpy as np

from ..core.types import MCS_MAX, GlobalContext, LlcAllocation, PlatformSpec, VbsContext
from ..errors import ConstraintViolationError, ParameterizationError, ValidationError
from ..utils.seeds import derive_seed

logger = logging.getLogger(__name__)

KAPPA_MU_BOUND = 1.5


@dataclass(frozen=True)
class OracleParams:
    """Coefficients of the synthetic compute model."""

    c0: float = 0.3
    a_ul: float = 1.2
    a_dl: float = 0.8
    phi: float = 0.6
    s0: float = 12.0
    sigma_s: float = 3.0
    eta: float = 0.5
    kappa: float = 0.35
    mu: float = 2.0
    noise_std: float = 0.02

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValidationError(f"oracle.{f.name} must be finite, got {value}")
            if f.name == "noise_std":
                if value < 0:
                    raise ValidationError(f"oracle.noise_std must be >= 0, got {value}")
            elif value <= 0:
                raise ValidationError(f"oracle.{f.name} must be > 0, got {value}")
        if self.kappa * self.mu >= KAPPA_MU_BOUND:
            raise ValidationError(
                f"oracle.kappa * oracle.mu must be < {KAPPA_MU_BOUND}, "
                f"got {self.kappa * self.mu}"
            )

    def noiseless(self) -> "OracleParams":
        return OracleParams(**{**asdict(self), "noise_std": 0.0})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OracleParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown oracle parameters: {sorted(unknown)}")
        return cls(**{key: float(value) for key, value in data.items()})


def fec_factor(snr: float, params: OracleParams) -> float:
    """Uplink decoding inflation; approaches 1 + phi at low SNR."""
    return 1.0 + params.phi / (1.0 + math.exp((snr - params.s0) / params.sigma_s))


def mcs_factor(mcs: int, params: OracleParams) -> float:
    return 1.0 + params.eta * mcs / MCS_MAX


def base_compute(ctx: VbsContext, params: OracleParams) -> float:
    """Compute usage with unlimited cache."""
    return (
        params.c0
        + params.a_ul * ctx.d_ul * fec_factor(ctx.snr, params) * mcs_factor(ctx.mcs_ul, params)
        + params.a_dl * ctx.d_dl * mcs_factor(ctx.mcs_dl, params)
    )


def cache_utility(ctx: VbsContext) -> float:
    return (ctx.d_ul + ctx.d_dl) / 2.0


def noise_factor(noise_std: float, noise_seed: Optional[int]) -> float:
    """Multiplicative measurement jitter; exactly 1 when no seed is given.

    Draws at or below -1 are resampled so the factor stays positive.
    """
    if noise_seed is None:
        return 1.0
    rng = np.random.default_rng(noise_seed)
    eps = float(rng.normal(0.0, noise_std))
    while eps <= -1.0:
        logger.debug("Resampling noise draw %.4f", eps)
        eps = float(rng.normal(0.0, noise_std))
    return 1.0 + eps


def true_compute(
    ctx: VbsContext,
    cores: int,
    ways: int,
    params: OracleParams,
    noise_seed: Optional[int] = None,
) -> float:
    """Cores used by one vBS holding ``cores`` cores and ``ways`` cache ways.

    Without ``noise_seed`` the result is a pure function of its inputs.
    """
    if ways < 1:
        raise ConstraintViolationError(f"a vBS needs at least one cache way, got {ways}")
    if cores < 1:
        raise ValidationError(f"a vBS needs at least one core, got {cores}")

    penalty = 1.0 + params.kappa * cache_utility(ctx) * params.mu / ways
    usage = base_compute(ctx, params) * penalty * noise_factor(params.noise_std, noise_seed)
    usage = min(float(cores), usage)
    if not usage > 0.0:
        raise ParameterizationError(f"oracle produced non-positive compute {usage}")
    return usage


def aggregate_compute(
    gc: GlobalContext,
    alloc: LlcAllocation,
    spec: PlatformSpec,
    params: OracleParams,
    noise_seed: Optional[int] = None,
) -> float:
    """Total platform compute: the sum of independent per-vBS usages.

    Accepts partial allocations (ways left unassigned are simply unused).
    """
    gc.validate_for(spec)
    if len(alloc.ways) != spec.n_vbs:
        raise ConstraintViolationError(
            f"allocation covers {len(alloc.ways)} vBS, platform has {spec.n_vbs}"
        )
    if alloc.n_llc != spec.n_llc:
        raise ConstraintViolationError(
            f"allocation is for {alloc.n_llc} ways, platform has {spec.n_llc}"
        )

    total = 0.0
    for index, (ctx, cores, ways) in enumerate(zip(gc.contexts, spec.core_sets, alloc.ways)):
        seed = None if noise_seed is None else derive_seed(noise_seed, index)
        total += true_compute(ctx, cores, ways, params, noise_seed=seed)
    return total
