"""Policy benchmark: ground-truth energy of every policy on fresh contexts.

Every allocation is scored by the noiseless oracle, never by a twin.
Savings of policy P against baseline B on one context are
watts_per_core * (cpu(B) - cpu(P)) * interval_s, the energy difference with
idle power cancelled. A report parsed without the platform falls back to
energy(B) - energy(P).
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..allocator.decisions import DecisionRecord, decision_loop
from ..allocator.policies import (
    AllocationPolicy,
    ClassifierPolicy,
    EqualPolicy,
    RandomPolicy,
    WeightedPolicy,
    optimal_policy,
    twin_search_policy,
)
from ..allocator.space import AllocationSpace
from ..core.types import LlcAllocation, PlatformSpec
from ..errors import ArtifactIOError, ReportParseError, ValidationError
from ..nn.model import MlpModel
from ..oracle.compute import OracleParams
from ..oracle.energy import DECISION_INTERVAL_S
from ..oracle.sampling import sample_global_contexts

logger = logging.getLogger(__name__)

BASELINES = ("random", "equal", "weighted")
OPTIMAL = "optimal"
REPORT_HEADER = [
    "context_id", "policy", "allocation", "unallocated",
    "true_cpu", "predicted_cpu", "power_w", "energy_j",
]
PLOTDATA_HEADER = ["policy", "baseline", "mean_savings_j", "max_savings_j"]


@dataclass(frozen=True)
class ReportRow:
    context_id: int
    policy: str
    allocation: LlcAllocation
    true_cpu: float
    predicted_cpu: Optional[float]
    power_w: float
    energy_j: float

    @classmethod
    def from_record(cls, record: DecisionRecord, spec: PlatformSpec) -> "ReportRow":
        return cls(
            context_id=record.context_id,
            policy=record.policy,
            allocation=record.allocation,
            true_cpu=record.true_cpu,
            predicted_cpu=record.predicted_cpu,
            power_w=spec.idle_power_w + spec.watts_per_core * record.true_cpu,
            energy_j=record.energy_j,
        )

    def to_csv_row(self) -> List[Any]:
        return [
            self.context_id,
            self.policy,
            self.allocation.to_text(),
            self.allocation.unallocated,
            repr(self.true_cpu),
            "" if self.predicted_cpu is None else repr(self.predicted_cpu),
            repr(self.power_w),
            repr(self.energy_j),
        ]

    @classmethod
    def from_csv_row(cls, row: Sequence[str]) -> "ReportRow":
        if len(row) != len(REPORT_HEADER):
            raise ValueError(f"expected {len(REPORT_HEADER)} columns, got {len(row)}")
        context_id, policy, allocation, unallocated, true_cpu, predicted, power_w, energy_j = row
        if not policy:
            raise ValueError("empty policy name")
        ways = tuple(int(n) for n in allocation.split("-"))
        spare = int(unallocated)
        return cls(
            context_id=int(context_id),
            policy=policy,
            allocation=LlcAllocation(ways, sum(ways) + spare, partial=spare > 0),
            true_cpu=float(true_cpu),
            predicted_cpu=float(predicted) if predicted else None,
            power_w=float(power_w),
            energy_j=float(energy_j),
        )


@dataclass(frozen=True)
class SavingsSummary:
    policy: str
    baseline: str
    mean_savings_j: float
    max_savings_j: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "policy": self.policy,
            "baseline": self.baseline,
            "mean_savings_j": self.mean_savings_j,
            "max_savings_j": self.max_savings_j,
        }


@dataclass(frozen=True)
class PolicySummary:
    policy: str
    mean_cpu: float
    mean_energy_j: float
    mean_regret: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "policy": self.policy,
            "mean_cpu": self.mean_cpu,
            "mean_energy_j": self.mean_energy_j,
            "mean_regret": self.mean_regret,
        }


class BenchmarkReport:
    """Per-context rows plus savings aggregates derived from them."""

    def __init__(self, rows: Sequence[ReportRow], interval_s: Optional[float] = None,
                 baselines: Sequence[str] = BASELINES, watts_per_core: Optional[float] = None):
        self.rows = list(rows)
        self.interval_s = interval_s
        self.watts_per_core = watts_per_core
        self.baselines = tuple(b for b in baselines if b in self.policies)
        self._by_policy: Dict[str, Dict[int, ReportRow]] = {}
        for row in self.rows:
            per_context = self._by_policy.setdefault(row.policy, {})
            if row.context_id in per_context:
                raise ValidationError(f"duplicate row for {row.policy} on context {row.context_id}")
            per_context[row.context_id] = row
        contexts = {frozenset(rows) for rows in self._by_policy.values()}
        if len(contexts) > 1:
            raise ValidationError("policies were not evaluated on the same contexts")

    @property
    def policies(self) -> List[str]:
        seen: List[str] = []
        for row in self.rows:
            if row.policy not in seen:
                seen.append(row.policy)
        return seen

    @property
    def context_ids(self) -> List[int]:
        if not self._by_policy:
            return []
        return sorted(next(iter(self._by_policy.values())))

    def row(self, policy: str, context_id: int) -> ReportRow:
        return self._by_policy[policy][context_id]

    def per_context_savings(self, policy: str, baseline: str) -> List[float]:
        if self.watts_per_core is None or self.interval_s is None:
            return [
                self.row(baseline, c).energy_j - self.row(policy, c).energy_j for c in self.context_ids
            ]
        return [
            self.watts_per_core
            * (self.row(baseline, c).true_cpu - self.row(policy, c).true_cpu)
            * self.interval_s
            for c in self.context_ids
        ]

    def savings(self, policy: str, baseline: str) -> SavingsSummary:
        values = self.per_context_savings(policy, baseline)
        if not values:
            raise ValidationError("report has no contexts")
        return SavingsSummary(policy, baseline, sum(values) / len(values), max(values))

    def savings_table(self) -> List[SavingsSummary]:
        return [self.savings(p, b) for p in self.policies for b in self.baselines]

    def policy_summaries(self) -> List[PolicySummary]:
        n = len(self.context_ids)
        summaries = []
        for policy in self.policies:
            rows = [self.row(policy, c) for c in self.context_ids]
            regret = None
            if OPTIMAL in self._by_policy:
                regret = sum(
                    (r.true_cpu - self.row(OPTIMAL, r.context_id).true_cpu)
                    / self.row(OPTIMAL, r.context_id).true_cpu
                    for r in rows
                ) / n
            summaries.append(PolicySummary(
                policy=policy,
                mean_cpu=sum(r.true_cpu for r in rows) / n,
                mean_energy_j=sum(r.energy_j for r in rows) / n,
                mean_regret=regret,
            ))
        return summaries

    def summary_dict(self) -> Dict[str, Any]:
        return {
            "interval_s": self.interval_s,
            "watts_per_core": self.watts_per_core,
            "n_contexts": len(self.context_ids),
            "baselines": list(self.baselines),
            "policies": [s.to_dict() for s in self.policy_summaries()],
            "savings": [s.to_dict() for s in self.savings_table()],
        }

    def write_csv(self, path: Path) -> None:
        try:
            with open(path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(REPORT_HEADER)
                for row in self.rows:
                    writer.writerow(row.to_csv_row())
        except OSError as e:
            raise ArtifactIOError(f"Cannot write report {path}: {e}") from e

    def write_summary(self, path: Path) -> None:
        try:
            Path(path).write_text(json.dumps(self.summary_dict(), indent=2, sort_keys=True) + "\n")
        except OSError as e:
            raise ArtifactIOError(f"Cannot write report summary {path}: {e}") from e

    def write_plotdata(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(PLOTDATA_HEADER)
        for s in self.savings_table():
            writer.writerow([s.policy, s.baseline, repr(s.mean_savings_j), repr(s.max_savings_j)])

    @classmethod
    def read_csv(cls, path: Path, interval_s: Optional[float] = None,
                 watts_per_core: Optional[float] = None) -> "BenchmarkReport":
        """Parse a report CSV; malformed content raises ReportParseError with its line."""
        try:
            with open(path, newline="") as f:
                lines = list(csv.reader(f))
        except OSError as e:
            raise ArtifactIOError(f"Cannot read report {path}: {e}") from e
        if not lines or lines[0] != REPORT_HEADER:
            raise ReportParseError(f"expected header {','.join(REPORT_HEADER)}", 1)
        rows = []
        for line_number, raw in enumerate(lines[1:], start=2):
            try:
                rows.append(ReportRow.from_csv_row(raw))
            except (ValueError, ValidationError) as e:
                raise ReportParseError(str(e), line_number) from e
        if not rows:
            raise ReportParseError("report has no rows", 2)
        try:
            return cls(rows, interval_s, watts_per_core=watts_per_core)
        except ValidationError as e:
            raise ReportParseError(str(e), len(lines)) from e


def standard_policies(
    spec: PlatformSpec,
    space: AllocationSpace,
    params: OracleParams,
    classifier: Optional[MlpModel] = None,
    twins=None,
) -> List[AllocationPolicy]:
    """Baselines, the learned policies that are available, and the optimum."""
    policies: List[AllocationPolicy] = [
        RandomPolicy(spec, space),
        EqualPolicy(spec),
        WeightedPolicy(spec),
    ]
    if classifier is not None:
        policies.append(ClassifierPolicy(spec, space, classifier))
    if twins is not None:
        policies.append(twin_search_policy(spec, space, twins))
    policies.append(optimal_policy(spec, space, params))
    return policies


def evaluate_policies(
    spec: PlatformSpec,
    params: OracleParams,
    policies: Sequence[AllocationPolicy],
    n_eval_contexts: int,
    interval_s: float = DECISION_INTERVAL_S,
    seed: int = 0,
    profile: str = "uniform",
    workers: int = 1,
    space: Optional[AllocationSpace] = None,
) -> BenchmarkReport:
    """Score every policy on the same fresh contexts.

    The noiseless-oracle optimum joins the policies when none is named
    ``optimal`` and ``space`` is given.
    """
    if n_eval_contexts < 1:
        raise ValidationError(f"n_eval_contexts must be >= 1, got {n_eval_contexts}")
    policies = list(policies)
    names = [p.name for p in policies]
    if len(set(names)) != len(names):
        raise ValidationError(f"policy names must be unique, got {names}")
    for policy in policies:
        if policy.spec != spec:
            raise ValidationError(f"policy '{policy.name}' was built for another platform")
    if OPTIMAL not in names and space is not None:
        policies.append(optimal_policy(spec, space, params))

    contexts = sample_global_contexts(n_eval_contexts, seed, spec.n_vbs, profile)
    logger.info(
        "Evaluating %d policies on %d contexts (seed %d)", len(policies), n_eval_contexts, seed
    )
    records: Dict[str, List[DecisionRecord]] = {
        p.name: decision_loop(p, contexts, spec, params, interval_s, seed, workers) for p in policies
    }
    rows = [
        ReportRow.from_record(records[p.name][k], spec)
        for k in range(n_eval_contexts)
        for p in policies
    ]
    return BenchmarkReport(rows, interval_s, watts_per_core=spec.watts_per_core)

