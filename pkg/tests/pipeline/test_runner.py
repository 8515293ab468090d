"""Tests for stage orchestration over the artifact store."""

from dataclasses import replace

import pytest

from llcalloc.core.types import PlatformSpec
from llcalloc.errors import MissingArtifactError, StageError
from llcalloc.pipeline.runner import (
    STAGES,
    run_full_pipeline,
    run_gen_data,
    run_train_clf,
    run_train_twin,
)
from llcalloc.storage.artifacts import ARTIFACTS, ArtifactStore


@pytest.fixture
def finished_run(tmp_path, mini_config_factory):
    def build(name, seed):
        config = mini_config_factory(tmp_path / name, seed=seed)
        return config, run_full_pipeline(config)

    return build


class TestRunFullPipeline:
    """All stages in order, every artifact recorded."""

    def test_writes_every_artifact(self, finished_run):
        config, written = finished_run("full", 0)
        assert set(written) == set(ARTIFACTS)
        store = ArtifactStore(config.output_dir)
        assert all(store.exists(name) for name in ARTIFACTS)

    def test_report_lineage(self, finished_run):
        config, _ = finished_run("lineage", 0)
        store = ArtifactStore(config.output_dir)
        entry = store.recorded("report")
        assert entry["stage"] == "evaluate"
        assert entry["inputs"]["classifier"] == store.digest("classifier")
        assert store.load_manifest()["config_hash"] == config.config_hash()

    def test_same_seed_same_bytes(self, finished_run):
        first, _ = finished_run("first", 3)
        second, _ = finished_run("second", 3)
        a, b = ArtifactStore(first.output_dir), ArtifactStore(second.output_dir)
        for name in ARTIFACTS:
            assert a.digest(name) == b.digest(name), name

    def test_seed_changes_report(self, finished_run):
        first, _ = finished_run("seed_a", 1)
        second, _ = finished_run("seed_b", 2)
        assert ArtifactStore(first.output_dir).digest("report") != ArtifactStore(second.output_dir).digest("report")


class TestStageFailures:
    """Failures carry their stage and exit code."""

    def test_stage_order(self):
        assert STAGES == ("gen-data", "train-twin", "build-labels", "train-clf", "evaluate")

    def test_missing_labels(self, mini_config):
        with pytest.raises(StageError) as excinfo:
            run_train_clf(mini_config, ArtifactStore(mini_config.output_dir))
        assert excinfo.value.stage == "train-clf"
        assert excinfo.value.exit_code == 3
        assert isinstance(excinfo.value.cause, MissingArtifactError)
        assert "build-labels" in str(excinfo.value)

    def test_platform_change_between_stages(self, mini_config):
        store = ArtifactStore(mini_config.output_dir)
        run_gen_data(mini_config, store)
        changed = replace(mini_config, platform=PlatformSpec(m_cores=6, n_llc=8, n_vbs=3, core_sets=(2, 2, 2)))
        with pytest.raises(StageError) as excinfo:
            run_train_twin(changed, store)
        assert excinfo.value.exit_code == 2

    def test_invalid_config(self, mini_config):
        with pytest.raises(StageError) as excinfo:
            run_gen_data(replace(mini_config, workers=0), ArtifactStore(mini_config.output_dir))
        assert excinfo.value.exit_code == 2
