"""Tests for feature encodings."""

import numpy as np
import pytest

from llcalloc.core.encoding import (
    context_from_snr,
    encode_classifier_batch,
    encode_classifier_features,
    encode_twin_features,
    encode_twin_sweep,
    mcs_from_snr,
)
from llcalloc.core.types import GlobalContext, PlatformSpec, TwinSample, VbsContext
from llcalloc.errors import ValidationError


class TestMcsFromSnr:
    """The scheduler's SNR to MCS map."""

    def test_endpoints(self):
        assert mcs_from_snr(0.0) == 0
        assert mcs_from_snr(30.0) == 27

    def test_round_half_up(self):
        assert mcs_from_snr(15.0) == 14

    def test_non_decreasing(self):
        values = [mcs_from_snr(s) for s in np.linspace(0.0, 30.0, 301)]
        assert values == sorted(values)

    @pytest.mark.parametrize("snr", [-0.1, 30.1, float("inf")])
    def test_out_of_range(self, snr):
        with pytest.raises(ValidationError):
            mcs_from_snr(snr)

    def test_context_from_snr_uses_map(self):
        ctx = context_from_snr(0.2, 0.3, 30.0)
        assert ctx.mcs_ul == ctx.mcs_dl == 27


class TestTwinFeatures:
    """Seven normalized twin inputs."""

    def test_known_sample(self):
        spec = PlatformSpec.equal_split()
        sample = TwinSample(VbsContext(0.5, 0.25, 15.0, 14, 14), cores=2, ways=3, cpu_usage=1.0)
        features = encode_twin_features(sample, spec)
        expected = [0.5, 0.25, 0.5, 14 / 27, 14 / 27, 2 / 12, 3 / 12]
        assert features == pytest.approx(expected)

    def test_components_in_unit_interval(self):
        spec = PlatformSpec.equal_split()
        sample = TwinSample(VbsContext(1.0, 1.0, 30.0, 27, 27), cores=12, ways=12, cpu_usage=5.0)
        features = encode_twin_features(sample, spec)
        assert np.all((features >= 0.0) & (features <= 1.0))

    def test_sweep_rows_follow_ways(self):
        spec = PlatformSpec.equal_split()
        rows = encode_twin_sweep(VbsContext(0.5, 0.5, 10.0, 9, 9), 2, spec)
        assert rows.shape == (12, 7)
        assert rows[:, 6] == pytest.approx([n / 12 for n in range(1, 13)])


class TestClassifierFeatures:
    """Positional global-context encoding."""

    def test_length_and_layout(self, small_spec):
        gc = GlobalContext(tuple(VbsContext(0.1 * i, 0.2, 6.0, 5, 5) for i in range(3)))
        features = encode_classifier_features(gc, small_spec)
        assert features.shape == (18,)
        assert features[6] == pytest.approx(0.1)
        assert features[5] == pytest.approx(2 / 6)

    def test_wrong_vbs_count(self, small_spec):
        gc = GlobalContext((VbsContext(0.1, 0.2, 6.0, 5, 5),))
        with pytest.raises(ValidationError):
            encode_classifier_features(gc, small_spec)

    def test_empty_batch(self, small_spec):
        assert encode_classifier_batch([], small_spec).shape == (0, 18)
