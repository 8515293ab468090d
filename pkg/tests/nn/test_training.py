"""Tests for Adam training with early stopping."""

import numpy as np
import pytest

from llcalloc.core.encoding import TWIN_FEATURES
from llcalloc.errors import TrainingDivergedError, ValidationError
from llcalloc.nn.model import Head, init_model, mlp_layers
from llcalloc.nn.training import EarlyStopping, TrainConfig, evaluate_loss, train
from llcalloc.twin.model import twin_layers


def _regression_data(seed, n=120):
    rng = np.random.default_rng(seed)
    x = rng.random((n, 3))
    y = (x.sum(axis=1) / 3.0).reshape(-1, 1)
    return x, y


def _model(seed=0):
    return init_model(mlp_layers(3, (16,), 1), Head.regression(), seed=seed)


class TestEarlyStopping:
    """Patience counting."""

    def test_stops_after_patience_without_progress(self):
        stopper = EarlyStopping(patience=10)
        assert stopper.update(1, 1.0)
        stopped_at = None
        for iteration in range(2, 30):
            stopper.update(iteration, 1.0)
            if stopper.should_stop:
                stopped_at = iteration
                break
        assert stopped_at == 11
        assert stopper.best_iteration == 1

    def test_improvement_resets_wait(self):
        stopper = EarlyStopping(patience=2)
        stopper.update(1, 1.0)
        stopper.update(2, 1.0)
        assert stopper.update(3, 0.5)
        assert stopper.wait == 0
        assert not stopper.should_stop

    def test_patience_must_be_positive(self):
        with pytest.raises(ValidationError):
            EarlyStopping(0)


class TestTrainConfig:
    """Training options."""

    def test_rejects_unknown_loss(self):
        with pytest.raises(ValidationError):
            TrainConfig(loss="hinge")

    def test_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            TrainConfig.from_dict({"learning_rate": 0.1, "momentum": 0.9})

    def test_dict_round_trip(self):
        config = TrainConfig(learning_rate=0.01, patience=50, loss="cross_entropy", seed=4)
        assert TrainConfig.from_dict(config.to_dict()) == config


class TestTrain:
    """The training loop."""

    def test_learns_a_simple_target(self):
        config = TrainConfig(learning_rate=1e-2, batch_size=16, max_iterations=30, patience=30, seed=0)
        result = train(_model(), _regression_data(0), _regression_data(1, 40), config)
        assert result.best_val_loss < result.history[0].val_loss

    def test_deterministic_per_seed(self):
        config = TrainConfig(learning_rate=1e-2, batch_size=16, max_iterations=3, seed=5)
        a = train(_model(), _regression_data(0), _regression_data(1, 40), config)
        b = train(_model(), _regression_data(0), _regression_data(1, 40), config)
        assert all(np.array_equal(x, y) for x, y in zip(a.model.weights, b.model.weights))
        assert a.history == b.history

    def test_runs_to_max_iterations(self):
        config = TrainConfig(max_iterations=4, patience=10, seed=0)
        result = train(_model(), _regression_data(0), _regression_data(1, 40), config)
        assert result.stopped_at == 4
        assert len(result.history) == 4
        assert not result.early_stopped

    def test_returns_best_snapshot_iteration(self):
        config = TrainConfig(learning_rate=1e-2, max_iterations=8, patience=8, seed=0)
        result = train(_model(), _regression_data(0), _regression_data(1, 40), config)
        assert result.history[result.best_iteration - 1].val_loss == result.best_val_loss

    def test_input_model_untouched(self):
        model = _model()
        before = [w.copy() for w in model.weights]
        train(model, _regression_data(0), _regression_data(1, 40), TrainConfig(max_iterations=2, seed=0))
        assert all(np.array_equal(a, b) for a, b in zip(before, model.weights))

    def test_divergence_is_reported(self):
        config = TrainConfig(learning_rate=1e200, max_iterations=5, seed=0)
        model = init_model(mlp_layers(3, (16, 16), 1), Head.regression(), seed=0)
        with pytest.raises(TrainingDivergedError) as info:
            train(model, _regression_data(0), _regression_data(1, 40), config)
        assert isinstance(info.value.history, list)

    def test_loss_must_fit_head(self):
        config = TrainConfig(loss="cross_entropy")
        with pytest.raises(ValidationError):
            train(_model(), _regression_data(0), _regression_data(1, 40), config)

    def test_rising_validation_loss_stops_at_eleven(self, monkeypatch):
        config = TrainConfig(learning_rate=1e-2, batch_size=16, max_iterations=50, patience=10, seed=3)
        first_only = train(_model(), _regression_data(0), _regression_data(1, 40),
                           TrainConfig(learning_rate=1e-2, batch_size=16, max_iterations=1, seed=3))

        calls = iter(range(1, 1000))
        monkeypatch.setattr("llcalloc.nn.training.evaluate_loss", lambda *args: float(next(calls)))
        result = train(_model(), _regression_data(0), _regression_data(1, 40), config)

        assert result.early_stopped
        assert result.stopped_at == 11
        assert result.best_iteration == 1
        assert [r.val_loss for r in result.history] == [float(i) for i in range(1, 12)]
        assert all(np.array_equal(a, b) for a, b in zip(result.model.weights, first_only.model.weights))
        assert all(np.array_equal(a, b) for a, b in zip(result.model.biases, first_only.model.biases))

    def test_twin_sized_network_memorises_small_set(self):
        rng = np.random.default_rng(0)
        x = rng.random((32, TWIN_FEATURES))
        y = x.mean(axis=1, keepdims=True)
        model = init_model(twin_layers(), Head.regression(), seed=0)
        config = TrainConfig(learning_rate=1e-3, batch_size=64, max_iterations=2000, patience=2000, seed=0)
        result = train(model, (x, y), (x, y), config)
        assert evaluate_loss(result.model, (x, y), "mse") < 1e-3
