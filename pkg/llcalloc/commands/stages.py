"""Pipeline stage commands: one command per stage plus run-all."""

import click
from rich.table import Table

from ..pipeline import runner
from ._common import config_options, console, handle_errors, load_run_config, store_for


def _run_stage(stage, config_path, seed, out):
    config = load_run_config(config_path, seed, out)
    store = store_for(config)
    with console.status(f"[bold green]{stage}..."):
        result = runner.STAGE_RUNNERS[stage](config, store)
    console.print(f"[green]✓[/green] {stage} finished, artifacts in {config.output_dir}")
    return result


@click.command(name="gen-data")
@config_options
@handle_errors
def gen_data(config_path, seed, out):
    """Measure random contexts with the oracle to build the twin dataset."""
    ds = _run_stage("gen-data", config_path, seed, out)
    console.print(f"{ds.n_contexts} contexts, {len(ds.samples)} samples")


@click.command(name="train-twin")
@config_options
@handle_errors
def train_twin(config_path, seed, out):
    """Train the digital twin on the twin dataset."""
    dt = _run_stage("train-twin", config_path, seed, out)
    console.print(f"Stopped at iteration {dt.stopped_at}, test MSE {dt.test_mse}")
    fidelity = dt.metadata.get("fidelity")
    if fidelity:
        console.print(
            f"Mean relative error {fidelity['mean_relative_error']:.4f}, "
            f"ranking fidelity {fidelity['ranking_fidelity']:.3f}"
        )


@click.command(name="build-labels")
@config_options
@handle_errors
def build_labels(config_path, seed, out):
    """Label random global contexts with the twin-searched optimum."""
    ds = _run_stage("build-labels", config_path, seed, out)
    console.print(
        f"{len(ds)} contexts, {ds.metadata.get('distinct_labels')} distinct classes, "
        f"label agreement {ds.metadata.get('label_agreement', 0.0):.3f}"
    )


@click.command(name="train-clf")
@config_options
@handle_errors
def train_clf(config_path, seed, out):
    """Train the allocation classifier on the labels."""
    clf = _run_stage("train-clf", config_path, seed, out)
    console.print(
        f"Stopped at iteration {clf.stopped_at}, test accuracy {clf.test_accuracy}, "
        f"regret {clf.test_regret}"
    )


def print_savings(report):
    table = Table(title="Mean energy savings per decision interval (J)")
    table.add_column("Policy", style="cyan")
    for baseline in report.baselines:
        table.add_column(f"vs {baseline}", justify="right")
    for policy in report.policies:
        table.add_row(
            policy,
            *[f"{report.savings(policy, b).mean_savings_j:.2f}" for b in report.baselines],
        )
    console.print(table)


@click.command(name="evaluate")
@config_options
@handle_errors
def evaluate(config_path, seed, out):
    """Score every policy with the noiseless oracle on fresh contexts."""
    report = _run_stage("evaluate", config_path, seed, out)
    print_savings(report)


@click.command(name="run-all")
@config_options
@handle_errors
def run_all(config_path, seed, out):
    """Run every stage in order."""
    config = load_run_config(config_path, seed, out)
    store = store_for(config)
    for stage in runner.STAGES:
        with console.status(f"[bold green]{stage}..."):
            result = runner.STAGE_RUNNERS[stage](config, store)
        console.print(f"[green]✓[/green] {stage}")
    print_savings(result)

    table = Table(title=f"Artifacts in {config.output_dir}")
    table.add_column("Artifact", style="cyan")
    table.add_column("Files")
    for name, entry in sorted(store.load_manifest()["artifacts"].items()):
        table.add_row(name, ", ".join(sorted(entry["files"])))
    console.print(table)


COMMANDS = [gen_data, train_twin, build_labels, train_clf, evaluate, run_all]
