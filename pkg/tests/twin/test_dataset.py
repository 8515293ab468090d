"""Tests for twin dataset generation and persistence."""

import tempfile
from pathlib import Path

import pytest

from llcalloc.core.types import PlatformSpec
from llcalloc.errors import ArtifactIOError, ValidationError
from llcalloc.oracle.compute import OracleParams, true_compute
from llcalloc.twin.dataset import TwinDataset, generate_twin_dataset


class TestGenerateTwinDataset:
    """Oracle measurements over every ways value."""

    def test_size_and_order(self, small_spec, params):
        ds = generate_twin_dataset(small_spec, params, n_contexts=10, seed=1)
        assert len(ds.samples) == 10 * small_spec.n_llc
        assert [s.ways for s in ds.samples[:6]] == [1, 2, 3, 4, 5, 6]
        assert len({s.context for s in ds.samples[:6]}) == 1

    def test_split_is_by_context(self, small_spec, params):
        ds = generate_twin_dataset(small_spec, params, n_contexts=20, seed=2)
        split = ds.sample_split
        assert len(split.train) + len(split.val) + len(split.test) == len(ds.samples)
        test_contexts = {ds.context_of(i) for i in split.test}
        assert test_contexts == set(ds.split.test)
        assert not test_contexts & {ds.context_of(i) for i in split.train}

    def test_reproducible(self, small_spec, params):
        a = generate_twin_dataset(small_spec, params, n_contexts=5, seed=3)
        b = generate_twin_dataset(small_spec, params, n_contexts=5, seed=3)
        assert a.samples == b.samples
        assert a.split == b.split

    def test_workers_do_not_change_output(self, small_spec, params):
        serial = generate_twin_dataset(small_spec, params, n_contexts=8, seed=4)
        threaded = generate_twin_dataset(small_spec, params, n_contexts=8, seed=4, workers=3)
        assert serial.samples == threaded.samples

    def test_noiseless_matches_oracle(self, small_spec, params):
        ds = generate_twin_dataset(small_spec, params, n_contexts=3, seed=5, noisy=False)
        for s in ds.samples:
            assert s.cpu_usage == true_compute(s.context, s.cores, s.ways, params)

    def test_cores_cycle_over_core_sets(self, params):
        spec = PlatformSpec(m_cores=6, n_llc=4, n_vbs=3, core_sets=(3, 1, 2))
        ds = generate_twin_dataset(spec, params, n_contexts=6, seed=6)
        cores = [cores for _, cores in ds.contexts(range(6))]
        assert cores == [1, 2, 3, 1, 2, 3]

    def test_needs_a_context(self, small_spec, params):
        with pytest.raises(ValidationError):
            generate_twin_dataset(small_spec, params, n_contexts=0, seed=0)


class TestTwinDatasetFiles:
    """CSV plus JSON sidecar."""

    def test_round_trip(self, small_spec):
        ds = generate_twin_dataset(small_spec, OracleParams(), n_contexts=4, seed=8)
        with tempfile.TemporaryDirectory() as tmpdir:
            csv_path, sidecar = Path(tmpdir) / "twin.csv", Path(tmpdir) / "twin.json"
            ds.save(csv_path, sidecar)
            loaded = TwinDataset.load(csv_path, sidecar)
        assert loaded.samples == ds.samples
        assert loaded.split == ds.split
        assert loaded.params == ds.params
        assert loaded.spec == small_spec
        assert loaded.metadata["profile"] == "uniform"

    def test_bad_row_names_line(self, small_spec):
        ds = generate_twin_dataset(small_spec, OracleParams(), n_contexts=1, seed=8)
        with tempfile.TemporaryDirectory() as tmpdir:
            csv_path, sidecar = Path(tmpdir) / "twin.csv", Path(tmpdir) / "twin.json"
            ds.save(csv_path, sidecar)
            lines = csv_path.read_text().splitlines()
            lines[3] = "oops," + lines[3].split(",", 1)[1]
            csv_path.write_text("\n".join(lines) + "\n")
            with pytest.raises(ArtifactIOError, match="line 4"):
                TwinDataset.load(csv_path, sidecar)

    def test_missing_files(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(ArtifactIOError):
                TwinDataset.load(Path(tmpdir) / "a.csv", Path(tmpdir) / "a.json")
