"""Tests for the policy benchmark and its report files."""

import io
import tempfile
from pathlib import Path

import pytest

from llcalloc.allocator.policies import EqualPolicy, WeightedPolicy, optimal_policy
from llcalloc.allocator.space import enumerate_allocations
from llcalloc.core.types import LlcAllocation, PlatformSpec
from llcalloc.errors import ReportParseError, ValidationError
from llcalloc.oracle.compute import OracleParams
from llcalloc.pipeline.benchmark import (
    BASELINES,
    PLOTDATA_HEADER,
    REPORT_HEADER,
    BenchmarkReport,
    ReportRow,
    evaluate_policies,
    standard_policies,
)

SPEC = PlatformSpec(m_cores=6, n_llc=6, n_vbs=3, core_sets=(2, 2, 2))


@pytest.fixture(scope="module")
def report():
    space = enumerate_allocations(6, 3)
    policies = standard_policies(SPEC, space, OracleParams())
    return evaluate_policies(SPEC, OracleParams(), policies, n_eval_contexts=12, interval_s=900.0, seed=4)


class TestEvaluatePolicies:
    """Every policy scored on the same contexts."""

    def test_rows_are_context_major(self, report):
        assert report.policies == ["random", "equal", "weighted", "optimal"]
        assert report.context_ids == list(range(12))
        assert [(r.context_id, r.policy) for r in report.rows[:4]] == [
            (0, "random"), (0, "equal"), (0, "weighted"), (0, "optimal"),
        ]

    def test_optimal_against_itself_saves_nothing(self, report):
        assert report.per_context_savings("optimal", "optimal") == [0.0] * 12

    def test_optimal_dominates_baselines(self, report):
        for baseline in BASELINES:
            assert all(s >= 0.0 for s in report.per_context_savings("optimal", baseline))

    def test_savings_follow_compute_difference(self, report):
        for baseline in BASELINES:
            savings = report.per_context_savings("optimal", baseline)
            for context_id, value in zip(report.context_ids, savings):
                cpu_gap = report.row(baseline, context_id).true_cpu - report.row("optimal", context_id).true_cpu
                assert value == pytest.approx(SPEC.watts_per_core * cpu_gap * 900.0, rel=1e-9)

    def test_optimal_appended_when_space_given(self):
        space = enumerate_allocations(6, 3)
        report = evaluate_policies(
            SPEC, OracleParams(), [EqualPolicy(SPEC)], n_eval_contexts=3, seed=1, space=space,
        )
        assert report.policies == ["equal", "optimal"]

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError):
            evaluate_policies(SPEC, OracleParams(), [EqualPolicy(SPEC), EqualPolicy(SPEC)], n_eval_contexts=2)

    def test_platform_mismatch_rejected(self):
        other = PlatformSpec(m_cores=6, n_llc=9, n_vbs=3, core_sets=(2, 2, 2))
        with pytest.raises(ValidationError):
            evaluate_policies(SPEC, OracleParams(), [WeightedPolicy(other)], n_eval_contexts=2)

    def test_workers_do_not_change_report(self, report):
        space = enumerate_allocations(6, 3)
        threaded = evaluate_policies(
            SPEC, OracleParams(), standard_policies(SPEC, space, OracleParams()),
            n_eval_contexts=12, interval_s=900.0, seed=4, workers=3,
        )
        assert [r.energy_j for r in threaded.rows] == [r.energy_j for r in report.rows]


class TestSummaries:
    """Savings aggregates and regret."""

    def test_plotdata_rows(self, report):
        stream = io.StringIO()
        report.write_plotdata(stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == ",".join(PLOTDATA_HEADER)
        assert len(lines) - 1 == len(report.policies) * len(BASELINES)

    def test_optimal_has_no_regret(self, report):
        summaries = {s.policy: s for s in report.policy_summaries()}
        assert summaries["optimal"].mean_regret == 0.0
        assert all(s.mean_regret >= 0.0 for s in summaries.values())

    def test_summary_dict(self, report):
        summary = report.summary_dict()
        assert summary["n_contexts"] == 12
        assert summary["interval_s"] == 900.0
        assert summary["watts_per_core"] == SPEC.watts_per_core
        assert len(summary["savings"]) == 4 * 3

    def test_mean_and_max(self, report):
        values = report.per_context_savings("optimal", "random")
        saved = report.savings("optimal", "random")
        assert saved.max_savings_j == max(values)
        assert saved.mean_savings_j == pytest.approx(sum(values) / len(values))


class TestSavingsPrecision:
    """Savings come from the compute gap, not from two large energies."""

    def _rows(self, spec, cpus, interval_s=900.0):
        rows = []
        for policy, cpu in cpus.items():
            power = spec.idle_power_w + spec.watts_per_core * cpu
            rows.append(ReportRow(0, policy, LlcAllocation((2, 2, 2), 6), cpu, None, power, power * interval_s))
        return rows

    def test_near_tie_savings_exact(self):
        cpus = {"equal": 5.0 + 2.0 ** -24, "optimal": 5.0}
        report = BenchmarkReport(self._rows(SPEC, cpus), 900.0, watts_per_core=SPEC.watts_per_core)
        expected = 9.0 * 2.0 ** -24 * 900.0
        assert report.per_context_savings("optimal", "equal")[0] == pytest.approx(expected, rel=1e-9)

    def test_without_platform_uses_energy_difference(self):
        rows = self._rows(SPEC, {"equal": 6.0, "optimal": 5.0})
        report = BenchmarkReport(rows, 900.0)
        assert report.per_context_savings("optimal", "equal") == [rows[0].energy_j - rows[1].energy_j]


class TestReportFiles:
    """Report CSV parsing."""

    def _write(self, tmpdir, text):
        path = Path(tmpdir) / "report.csv"
        path.write_text(text)
        return path

    def test_csv_round_trip(self, report):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "report.csv"
            report.write_csv(path)
            loaded = BenchmarkReport.read_csv(path, 900.0, SPEC.watts_per_core)
        assert loaded.policies == report.policies
        assert [r.energy_j for r in loaded.rows] == [r.energy_j for r in report.rows]
        assert loaded.savings_table() == report.savings_table()

    def test_bad_header(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = self._write(tmpdir, "context_id,policy\n0,equal\n")
            with pytest.raises(ReportParseError) as excinfo:
                BenchmarkReport.read_csv(path)
        assert excinfo.value.line_number == 1

    def test_bad_row_reports_line(self, report):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "report.csv"
            report.write_csv(path)
            lines = path.read_text().splitlines()
            lines[3] = lines[3].replace(lines[3].split(",")[-1], "lots")
            path.write_text("\n".join(lines) + "\n")
            with pytest.raises(ReportParseError) as excinfo:
                BenchmarkReport.read_csv(path)
        assert excinfo.value.line_number == 4

    def test_no_rows(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = self._write(tmpdir, ",".join(REPORT_HEADER) + "\n")
            with pytest.raises(ReportParseError, match="no rows"):
                BenchmarkReport.read_csv(path)

    def test_uneven_contexts(self, report):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "report.csv"
            report.write_csv(path)
            lines = path.read_text().splitlines()
            path.write_text("\n".join(lines[:-1]) + "\n")
            with pytest.raises(ReportParseError):
                BenchmarkReport.read_csv(path)

    def test_optimal_policy_reused(self):
        space = enumerate_allocations(6, 3)
        report = evaluate_policies(
            SPEC, OracleParams(), [optimal_policy(SPEC, space, OracleParams())],
            n_eval_contexts=2, space=space,
        )
        assert report.policies == ["optimal"]
