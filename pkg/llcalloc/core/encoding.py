"""Deterministic feature encodings for the twin and the classifier.

Normalization uses the physical maxima (30 dB, MCS 27), never dataset
statistics, so encodings do not depend on which data a model saw.
"""

import math
from typing import Sequence

import numpy as np

from ..errors import ValidationError
from .types import MCS_MAX, SNR_MAX_DB, GlobalContext, PlatformSpec, TwinSample, VbsContext

TWIN_FEATURES = 7
CLASSIFIER_FEATURES_PER_VBS = 6


def mcs_from_snr(snr: float, mcs_max: int = MCS_MAX) -> int:
    """Map an SNR in dB to the MCS index the scheduler would pick.

    Linear in SNR with round-half-up, clamped to [0, mcs_max].
    """
    if not (math.isfinite(snr) and 0.0 <= snr <= SNR_MAX_DB):
        raise ValidationError(f"snr must be in [0, {SNR_MAX_DB:g}] dB, got {snr}")
    index = math.floor(mcs_max * snr / SNR_MAX_DB + 0.5)
    return min(max(index, 0), mcs_max)


def context_from_snr(d_ul: float, d_dl: float, snr: float) -> VbsContext:
    """Build a context whose UL and DL MCS follow the scheduler map."""
    mcs = mcs_from_snr(snr)
    return VbsContext(d_ul=d_ul, d_dl=d_dl, snr=snr, mcs_ul=mcs, mcs_dl=mcs)


def _context_block(ctx: VbsContext) -> list:
    return [
        ctx.d_ul,
        ctx.d_dl,
        ctx.snr / SNR_MAX_DB,
        ctx.mcs_ul / MCS_MAX,
        ctx.mcs_dl / MCS_MAX,
    ]


def encode_twin_features(sample: TwinSample, spec: PlatformSpec) -> np.ndarray:
    """Seven normalized features: context, core share, way share."""
    sample.validate_for(spec)
    return encode_twin_inputs(sample.context, sample.cores, sample.ways, spec)


def encode_twin_inputs(ctx: VbsContext, cores: int, ways: int, spec: PlatformSpec) -> np.ndarray:
    """Like :func:`encode_twin_features` without a measured cpu value."""
    return np.array(
        _context_block(ctx) + [cores / spec.m_cores, ways / spec.n_llc],
        dtype=np.float64,
    )


def encode_twin_sweep(ctx: VbsContext, cores: int, spec: PlatformSpec) -> np.ndarray:
    """Feature rows for ways = 1..n_llc, one row per ways value."""
    return np.stack(
        [encode_twin_inputs(ctx, cores, ways, spec) for ways in range(1, spec.n_llc + 1)]
    )


def encode_classifier_features(gc: GlobalContext, spec: PlatformSpec) -> np.ndarray:
    """Positional concatenation of (context, core share) per vBS."""
    gc.validate_for(spec)
    features = []
    for ctx, cores in zip(gc.contexts, spec.core_sets):
        features.extend(_context_block(ctx))
        features.append(cores / spec.m_cores)
    return np.array(features, dtype=np.float64)


def encode_classifier_batch(contexts: Sequence[GlobalContext], spec: PlatformSpec) -> np.ndarray:
    if not contexts:
        return np.zeros((0, CLASSIFIER_FEATURES_PER_VBS * spec.n_vbs))
    return np.stack([encode_classifier_features(gc, spec) for gc in contexts])
