"""Seed derivation: every random stream descends from one master seed."""

import hashlib

import numpy as np

_SEED_MASK = (1 << 63) - 1


def derive_seed(base_seed: int, *keys) -> int:
    """Derive a child seed from ``base_seed`` and any number of keys.

    Stable across processes and platforms (sha256, not ``hash()``).
    """
    material = "|".join([str(int(base_seed))] + [str(key) for key in keys])
    digest = hashlib.sha256(material.encode()).digest()
    return int.from_bytes(digest[:8], "big") & _SEED_MASK


def rng_for(base_seed: int, *keys) -> np.random.Generator:
    return np.random.default_rng(derive_seed(base_seed, *keys))
