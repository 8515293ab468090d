"""Twin training data: oracle measurements over every ways value.

Each sampled context contributes one sample per ways value 1..N_LLC, in
context-major order, and the 70/15/15 split is drawn over contexts so all
ways-variants of a context land in the same partition.
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.encoding import encode_twin_features
from ..core.types import PlatformSpec, TwinSample, VbsContext
from ..errors import ArtifactIOError, ValidationError
from ..oracle.compute import OracleParams, true_compute
from ..oracle.sampling import sample_context
from ..utils.parallel import ordered_map
from ..utils.seeds import derive_seed, rng_for
from ..utils.splits import DatasetSplit, split_indices

logger = logging.getLogger(__name__)

CSV_HEADER = ["d_ul", "d_dl", "snr", "mcs_ul", "mcs_dl", "cores", "ways", "cpu"]


@dataclass
class TwinDataset:
    samples: List[TwinSample]
    spec: PlatformSpec
    split: DatasetSplit
    params: Optional[OracleParams] = None
    seed: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        ways = self.spec.n_llc
        if len(self.samples) != self.split.size * ways:
            raise ValidationError(
                f"{len(self.samples)} samples do not fill {self.split.size} contexts x {ways} ways"
            )
        for sample in self.samples:
            sample.validate_for(self.spec)

    @property
    def n_contexts(self) -> int:
        return self.split.size

    def context_of(self, sample_index: int) -> int:
        return sample_index // self.spec.n_llc

    def contexts(self, context_ids: Sequence[int]) -> List[Tuple[VbsContext, int]]:
        """(context, cores) for each context id."""
        ways = self.spec.n_llc
        return [(self.samples[k * ways].context, self.samples[k * ways].cores) for k in context_ids]

    def sample_indices(self, context_ids: Sequence[int]) -> List[int]:
        ways = self.spec.n_llc
        return [k * ways + offset for k in context_ids for offset in range(ways)]

    @property
    def sample_split(self) -> DatasetSplit:
        return DatasetSplit(
            train=tuple(self.sample_indices(self.split.train)),
            val=tuple(self.sample_indices(self.split.val)),
            test=tuple(self.sample_indices(self.split.test)),
        )

    def arrays(self, context_ids: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        """Features and cpu targets of every sample of the given contexts."""
        rows = [self.samples[i] for i in self.sample_indices(context_ids)]
        if not rows:
            return np.zeros((0, 7)), np.zeros((0, 1))
        x = np.stack([encode_twin_features(s, self.spec) for s in rows])
        y = np.array([[s.cpu_usage] for s in rows], dtype=np.float64)
        return x, y

    def save(self, csv_path: Path, sidecar_path: Path, extra: Optional[Dict[str, Any]] = None) -> None:
        """Write the samples as CSV and spec/params/seed/split as JSON."""
        try:
            with open(csv_path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(CSV_HEADER)
                for s in self.samples:
                    c = s.context
                    writer.writerow([
                        repr(c.d_ul), repr(c.d_dl), repr(c.snr), c.mcs_ul, c.mcs_dl,
                        s.cores, s.ways, repr(s.cpu_usage),
                    ])
            sidecar = {
                "spec": self.spec.to_dict(),
                "params": self.params.to_dict() if self.params else None,
                "seed": self.seed,
                "split": self.split.to_dict(),
                **self.metadata,
                **(extra or {}),
            }
            Path(sidecar_path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write twin dataset: {e}") from e
        logger.info("Wrote %d twin samples to %s", len(self.samples), csv_path)

    @classmethod
    def load(cls, csv_path: Path, sidecar_path: Path) -> "TwinDataset":
        try:
            sidecar = json.loads(Path(sidecar_path).read_text())
            with open(csv_path, newline="") as f:
                reader = csv.reader(f)
                header = next(reader)
                if header != CSV_HEADER:
                    raise ArtifactIOError(f"{csv_path}: unexpected header {header}")
                samples = []
                for line_number, row in enumerate(reader, start=2):
                    try:
                        d_ul, d_dl, snr, mcs_ul, mcs_dl, cores, ways, cpu = row
                        ctx = VbsContext(float(d_ul), float(d_dl), float(snr), int(mcs_ul), int(mcs_dl))
                        samples.append(TwinSample(ctx, int(cores), int(ways), float(cpu)))
                    except (ValueError, ValidationError) as e:
                        raise ArtifactIOError(f"{csv_path}: line {line_number}: {e}") from e
        except (OSError, json.JSONDecodeError, StopIteration) as e:
            raise ArtifactIOError(f"Cannot read twin dataset: {e}") from e

        params = sidecar.get("params")
        known = {"spec", "params", "seed", "split"}
        return cls(
            samples=samples,
            spec=PlatformSpec.from_dict(sidecar["spec"]),
            split=DatasetSplit.from_dict(sidecar["split"]),
            params=OracleParams.from_dict(params) if params else None,
            seed=sidecar.get("seed"),
            metadata={k: v for k, v in sidecar.items() if k not in known},
        )


def _twin_core_counts(spec: PlatformSpec) -> List[int]:
    return sorted(set(spec.core_sets))


def _measure_context(job) -> List[TwinSample]:
    index, spec, params, seed, profile, cores, noisy = job
    ctx = sample_context(rng_for(seed, "context", index), profile)
    samples = []
    for ways in range(1, spec.n_llc + 1):
        noise_seed = derive_seed(seed, "noise", index, ways) if noisy else None
        cpu = true_compute(ctx, cores, ways, params, noise_seed=noise_seed)
        samples.append(TwinSample(context=ctx, cores=cores, ways=ways, cpu_usage=cpu))
    return samples


def generate_twin_dataset(
    spec: PlatformSpec,
    params: OracleParams,
    n_contexts: int,
    seed: int,
    profile: str = "uniform",
    workers: int = 1,
    noisy: bool = True,
) -> TwinDataset:
    """Sample ``n_contexts`` contexts and measure each at every ways value.

    Core counts cycle over the distinct sizes in ``spec.core_sets``.
    """
    if n_contexts < 1:
        raise ValidationError(f"n_contexts must be >= 1, got {n_contexts}")
    core_counts = _twin_core_counts(spec)
    jobs = [
        (index, spec, params, seed, profile, core_counts[index % len(core_counts)], noisy)
        for index in range(n_contexts)
    ]
    logger.info("Measuring %d contexts x %d ways (seed %d)", n_contexts, spec.n_llc, seed)
    per_context = ordered_map(_measure_context, jobs, workers)
    samples = [sample for batch in per_context for sample in batch]
    return TwinDataset(
        samples=samples,
        spec=spec,
        split=split_indices(n_contexts, derive_seed(seed, "split")),
        params=params,
        seed=seed,
        metadata={"profile": profile, "noisy": noisy},
    )
