"""Domain types and feature encodings."""

from .encoding import (
    context_from_snr,
    encode_classifier_features,
    encode_twin_features,
    encode_twin_inputs,
    mcs_from_snr,
)
from .types import (
    MCS_MAX,
    SNR_MAX_DB,
    GlobalContext,
    LlcAllocation,
    PlatformSpec,
    TwinSample,
    VbsContext,
)

__all__ = [
    "MCS_MAX",
    "SNR_MAX_DB",
    "GlobalContext",
    "LlcAllocation",
    "PlatformSpec",
    "TwinSample",
    "VbsContext",
    "context_from_snr",
    "encode_classifier_features",
    "encode_twin_features",
    "encode_twin_inputs",
    "mcs_from_snr",
]
