"""Sequential decision intervals and their exportable records."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..core.types import GlobalContext, LlcAllocation, PlatformSpec
from ..errors import ArtifactIOError
from ..oracle.compute import OracleParams, aggregate_compute
from ..oracle.energy import DECISION_INTERVAL_S, energy
from ..utils.parallel import ordered_map
from ..utils.seeds import derive_seed
from .policies import AllocationPolicy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecisionRecord:
    """One policy decision for one decision interval, scored by the noiseless oracle."""

    policy: str
    context_id: int
    allocation: LlcAllocation
    predicted_cpu: Optional[float]
    true_cpu: float
    energy_j: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "policy": self.policy,
            "context_id": self.context_id,
            "allocation": list(self.allocation.ways),
            "unallocated": self.allocation.unallocated,
            "partial": self.allocation.partial,
            "predicted_cpu": self.predicted_cpu,
            "true_cpu": self.true_cpu,
            "energy_j": self.energy_j,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], n_llc: int) -> "DecisionRecord":
        ways = tuple(int(n) for n in data["allocation"])
        predicted = data.get("predicted_cpu")
        return cls(
            policy=data["policy"],
            context_id=int(data["context_id"]),
            allocation=LlcAllocation(ways, n_llc, partial=bool(data.get("partial", sum(ways) < n_llc))),
            predicted_cpu=None if predicted is None else float(predicted),
            true_cpu=float(data["true_cpu"]),
            energy_j=float(data["energy_j"]),
        )


def policy_seed(seed: int, policy_name: str, context_id: int) -> int:
    return derive_seed(seed, "policy", policy_name, context_id)


def decide(
    policy: AllocationPolicy,
    gc: GlobalContext,
    context_id: int,
    spec: PlatformSpec,
    params: OracleParams,
    interval_s: float = DECISION_INTERVAL_S,
    seed: int = 0,
) -> DecisionRecord:
    allocation, predicted = policy.decide_with_prediction(gc, policy_seed(seed, policy.name, context_id))
    true_cpu = aggregate_compute(gc, allocation, spec, params)
    return DecisionRecord(
        policy=policy.name,
        context_id=context_id,
        allocation=allocation,
        predicted_cpu=predicted,
        true_cpu=true_cpu,
        energy_j=energy(true_cpu, spec, interval_s).energy_j,
    )


def decision_loop(
    policy: AllocationPolicy,
    contexts: Sequence[GlobalContext],
    spec: PlatformSpec,
    params: OracleParams,
    interval_s: float = DECISION_INTERVAL_S,
    seed: int = 0,
    workers: int = 1,
) -> List[DecisionRecord]:
    """Run ``policy`` over consecutive decision intervals t = 0..T-1.

    Intervals are independent, so they may be decided in parallel; records
    come back in interval order either way.
    """
    records = ordered_map(
        lambda job: decide(policy, job[1], job[0], spec, params, interval_s, seed),
        list(enumerate(contexts)),
        workers=workers,
    )
    logger.debug(
        "%s: %d intervals, %.1f J total", policy.name, len(records), cumulative_energy(records)
    )
    return records


def cumulative_energy(records: Sequence[DecisionRecord]) -> float:
    total = 0.0
    for record in records:
        total += record.energy_j
    return total


def save_decisions(records: Sequence[DecisionRecord], path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps([r.to_dict() for r in records], indent=2) + "\n")
    except OSError as e:
        raise ArtifactIOError(f"Could not write decisions to {path}: {e}") from e
    return path


def load_decisions(path, n_llc: int) -> List[DecisionRecord]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        return [DecisionRecord.from_dict(item, n_llc) for item in data]
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise ArtifactIOError(f"Could not read decisions from {path}: {e}") from e
