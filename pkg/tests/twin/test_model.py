"""Tests for the digital twin network."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from llcalloc.core.types import VbsContext
from llcalloc.errors import ConstraintViolationError, ValidationError
from llcalloc.nn.model import Head, init_model, mlp_layers
from llcalloc.nn.training import TrainConfig
from llcalloc.twin.model import (
    DigitalTwin,
    train_twin,
    twin_fidelity,
    twin_predict,
    twin_sweep,
    twin_test_mse,
)

CTX = VbsContext(0.6, 0.4, 12.0, 11, 11)


class TestTrainTwin:
    """Twin training."""

    def test_records_history_and_test_mse(self, tiny_twin):
        assert 1 <= tiny_twin.stopped_at <= 3
        assert len(tiny_twin.history) == tiny_twin.stopped_at
        assert tiny_twin.test_mse is not None and tiny_twin.test_mse >= 0.0

    def test_requires_mse(self, tiny_twin_dataset):
        with pytest.raises(ValidationError):
            train_twin(tiny_twin_dataset, TrainConfig(loss="cross_entropy"))

    def test_architecture_is_fixed(self, small_spec):
        model = init_model(mlp_layers(7, (8,), 1), Head.regression(), seed=0)
        with pytest.raises(ValidationError):
            DigitalTwin(model=model, spec=small_spec)


class TestTwinPredict:
    """Inference."""

    def test_prediction_is_clamped_to_cores(self, tiny_twin):
        for ways in range(1, 7):
            value = twin_predict(tiny_twin, CTX, 2, ways)
            assert 0.0 < value <= 2.0

    def test_sweep_matches_single_predictions(self, tiny_twin):
        sweep = twin_sweep(tiny_twin, CTX, 2)
        assert sweep.shape == (6,)
        for ways in range(1, 7):
            assert sweep[ways - 1] == pytest.approx(twin_predict(tiny_twin, CTX, 2, ways))

    def test_pure(self, tiny_twin):
        assert twin_predict(tiny_twin, CTX, 2, 3) == twin_predict(tiny_twin, CTX, 2, 3)

    @pytest.mark.parametrize("ways", [0, 7])
    def test_ways_outside_platform(self, tiny_twin, ways):
        with pytest.raises(ConstraintViolationError):
            twin_predict(tiny_twin, CTX, 2, ways)

    def test_save_load(self, tiny_twin):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "twin.json"
            tiny_twin.save(path)
            loaded = DigitalTwin.load(path)
        assert np.array_equal(twin_sweep(loaded, CTX, 2), twin_sweep(tiny_twin, CTX, 2))
        assert loaded.history == tiny_twin.history


class TestTwinQuality:
    """Error and ranking metrics."""

    def test_test_mse_on_chosen_contexts(self, tiny_twin, tiny_twin_dataset):
        assert twin_test_mse(tiny_twin, tiny_twin_dataset, []) is None
        assert twin_test_mse(tiny_twin, tiny_twin_dataset, [0, 1]) >= 0.0

    def test_fidelity_ranges(self, tiny_twin, tiny_twin_dataset, params):
        contexts = tiny_twin_dataset.contexts(range(5))
        fidelity = twin_fidelity(tiny_twin, params, contexts)
        assert fidelity.n_contexts == 5
        assert fidelity.mean_relative_error >= 0.0
        assert 0.0 <= fidelity.within_10pct <= 1.0
        assert 0.0 <= fidelity.ranking_fidelity <= 1.0

    def test_fidelity_needs_contexts(self, tiny_twin, params):
        with pytest.raises(ValidationError):
            twin_fidelity(tiny_twin, params, [])
