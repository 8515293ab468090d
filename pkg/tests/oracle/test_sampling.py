"""Tests for context sampling profiles."""

import numpy as np
import pytest

from llcalloc.core.encoding import mcs_from_snr
from llcalloc.errors import ValidationError
from llcalloc.oracle.sampling import sample_context, sample_global_contexts


class TestSampleContext:
    """Single-context draws."""

    def test_seeded(self):
        a = sample_context(np.random.default_rng(3))
        b = sample_context(np.random.default_rng(3))
        assert a == b

    def test_mcs_follows_snr(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            ctx = sample_context(rng)
            assert ctx.mcs_ul == ctx.mcs_dl == mcs_from_snr(ctx.snr)

    def test_high_traffic(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            ctx = sample_context(rng, "high_traffic")
            assert ctx.d_ul >= 0.5 and ctx.d_dl >= 0.5

    def test_imbalanced(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            ctx = sample_context(rng, "imbalanced")
            high, low = max(ctx.d_ul, ctx.d_dl), min(ctx.d_ul, ctx.d_dl)
            assert high >= 0.7 and low <= 0.3

    def test_unknown_profile(self):
        with pytest.raises(ValidationError):
            sample_context(np.random.default_rng(0), "bursty")


class TestSampleGlobalContexts:
    """Independent per-index streams."""

    def test_prefix_stable(self):
        short = sample_global_contexts(3, seed=5, n_vbs=4)
        long = sample_global_contexts(6, seed=5, n_vbs=4)
        assert long[:3] == short

    def test_seed_changes_draws(self):
        assert sample_global_contexts(2, 1, 3) != sample_global_contexts(2, 2, 3)
