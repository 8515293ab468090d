"""Utility functions."""

from .logging import setup_logging
from .parallel import ordered_map
from .seeds import derive_seed, rng_for

__all__ = ["derive_seed", "ordered_map", "rng_for", "setup_logging"]
