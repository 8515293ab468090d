"""Synthetic platform: ground-truth compute and energy models."""

from .compute import OracleParams, aggregate_compute, true_compute
from .energy import DECISION_INTERVAL_S, EnergyReport, energy
from .sampling import PROFILES, sample_context, sample_global_context, sample_global_contexts

__all__ = [
    "DECISION_INTERVAL_S",
    "EnergyReport",
    "OracleParams",
    "PROFILES",
    "aggregate_compute",
    "energy",
    "sample_context",
    "sample_global_context",
    "sample_global_contexts",
    "true_compute",
]
