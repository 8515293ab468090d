"""Tests for seed derivation, dataset splits and the ordered map."""

import pytest

from llcalloc.errors import ValidationError
from llcalloc.utils.parallel import ordered_map
from llcalloc.utils.seeds import derive_seed, rng_for
from llcalloc.utils.splits import MIN_SPLIT_CONTEXTS, DatasetSplit, split_indices


class TestDeriveSeed:
    """Stable child seeds."""

    def test_stable(self):
        assert derive_seed(0, "gen-data") == derive_seed(0, "gen-data")

    def test_keys_matter(self):
        seeds = {derive_seed(0, "gen-data"), derive_seed(0, "train-twin"), derive_seed(1, "gen-data")}
        assert len(seeds) == 3

    def test_non_negative_63_bit(self):
        for k in range(50):
            assert 0 <= derive_seed(k, "x", k) < 2 ** 63

    def test_rng_for_matches_seed(self):
        assert rng_for(3, "a").integers(1000) == rng_for(3, "a").integers(1000)


class TestSplitIndices:
    """70/15/15 partitions."""

    def test_sizes(self):
        split = split_indices(2000, seed=1)
        assert (len(split.train), len(split.val), len(split.test)) == (1400, 300, 300)

    def test_disjoint_and_exhaustive(self):
        split = split_indices(37, seed=2)
        assert sorted(split.train + split.val + split.test) == list(range(37))

    def test_seeded(self):
        assert split_indices(50, seed=9) == split_indices(50, seed=9)
        assert split_indices(50, seed=9) != split_indices(50, seed=10)

    def test_small_sets_keep_val_and_test(self):
        split = split_indices(3, seed=0)
        assert len(split.val) == 1 and len(split.test) == 1

    @pytest.mark.parametrize("size", range(MIN_SPLIT_CONTEXTS, 25))
    def test_every_partition_filled_from_minimum(self, size):
        split = split_indices(size, seed=size)
        assert split.train and split.val and split.test

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            DatasetSplit((0, 1), (1,), (2,))

    def test_gap_rejected(self):
        with pytest.raises(ValidationError):
            DatasetSplit((0,), (2,), (3,))

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            split_indices(0, seed=0)


class TestOrderedMap:
    """Results in input order whatever the worker count."""

    def test_serial_and_threaded_agree(self):
        items = list(range(40))
        assert ordered_map(lambda x: x * x, items) == ordered_map(lambda x: x * x, items, workers=8)
