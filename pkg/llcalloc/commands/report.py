"""Render a benchmark report as a summary table or plot-ready CSV."""

import io
import json
from pathlib import Path
from typing import Any, Dict

import click
from rich.table import Table

from ..pipeline.benchmark import BenchmarkReport
from ._common import console, handle_errors


def _summary(report: BenchmarkReport) -> None:
    console.print(f"[bold]Contexts:[/bold] {len(report.context_ids)}")
    table = Table(title="Energy savings vs baselines (J per interval)")
    table.add_column("Policy", style="cyan")
    table.add_column("Baseline")
    table.add_column("Mean", justify="right")
    table.add_column("Max", justify="right")
    for s in report.savings_table():
        table.add_row(s.policy, s.baseline, f"{s.mean_savings_j:.3f}", f"{s.max_savings_j:.3f}")
    console.print(table)

    policies = Table(title="Policies")
    policies.add_column("Policy", style="cyan")
    policies.add_column("Mean cpu", justify="right")
    policies.add_column("Mean energy (J)", justify="right")
    policies.add_column("Mean regret", justify="right")
    for p in report.policy_summaries():
        regret = "-" if p.mean_regret is None else f"{p.mean_regret:.4%}"
        policies.add_row(p.policy, f"{p.mean_cpu:.4f}", f"{p.mean_energy_j:.1f}", regret)
    console.print(policies)


def _summary_platform(report_path: Path) -> Dict[str, Any]:
    """interval_s and watts_per_core from the summary written beside the report, if any."""
    summary_path = report_path.with_name(report_path.stem + "_summary.json")
    try:
        summary = json.loads(summary_path.read_text())
    except (OSError, ValueError):
        return {}
    return summary if isinstance(summary, dict) else {}


@click.command(name="report")
@click.argument("report_path", type=click.Path(dir_okay=False))
@click.option(
    "--format", "-f", "fmt",
    type=click.Choice(["summary", "plotdata"]),
    default="summary",
    help="Summary tables or bar-chart CSV",
)
@handle_errors
def report(report_path, fmt):
    """Show per-policy savings from a report CSV."""
    platform = _summary_platform(Path(report_path))
    parsed = BenchmarkReport.read_csv(
        Path(report_path), platform.get("interval_s"), platform.get("watts_per_core")
    )
    if fmt == "plotdata":
        buffer = io.StringIO()
        parsed.write_plotdata(buffer)
        click.echo(buffer.getvalue(), nl=False)
    else:
        _summary(parsed)
