"""Shared miniature platforms and models for the test suite."""

import pytest

from llcalloc.config import RunConfig, SizesConfig
from llcalloc.core.types import PlatformSpec
from llcalloc.nn.training import TrainConfig
from llcalloc.oracle.compute import OracleParams
from llcalloc.twin.dataset import generate_twin_dataset
from llcalloc.twin.model import train_twin

SMALL_SPEC = PlatformSpec(m_cores=6, n_llc=6, n_vbs=3, core_sets=(2, 2, 2))


@pytest.fixture
def small_spec():
    return SMALL_SPEC


@pytest.fixture
def default_spec():
    return PlatformSpec.equal_split()


@pytest.fixture
def params():
    return OracleParams()


@pytest.fixture(scope="session")
def tiny_twin_dataset():
    return generate_twin_dataset(SMALL_SPEC, OracleParams(), n_contexts=24, seed=7)


@pytest.fixture(scope="session")
def tiny_twin(tiny_twin_dataset):
    config = TrainConfig(batch_size=32, max_iterations=3, patience=2, seed=1)
    return train_twin(tiny_twin_dataset, config)


def make_mini_config(output_dir, seed=0):
    """A full pipeline run small enough for the test suite."""
    return RunConfig(
        platform=SMALL_SPEC,
        twin_train=TrainConfig(batch_size=32, max_iterations=2, patience=2, loss="mse"),
        clf_train=TrainConfig(batch_size=16, max_iterations=2, patience=2, loss="cross_entropy"),
        sizes=SizesConfig(twin_contexts=12, classifier_contexts=12, eval_contexts=4),
        seed=seed,
        output_dir=str(output_dir),
    )


@pytest.fixture
def mini_config(tmp_path):
    return make_mini_config(tmp_path / "run")


@pytest.fixture
def mini_config_factory():
    return make_mini_config
