"""Run one policy over consecutive decision intervals."""

import json

import click

from ..allocator.decisions import cumulative_energy, decision_loop, save_decisions
from ..allocator.evaluators import TwinEvaluator
from ..allocator.policies import (
    ClassifierPolicy,
    EqualPolicy,
    RandomPolicy,
    WeightedPolicy,
    optimal_policy,
    twin_search_policy,
)
from ..oracle.sampling import sample_global_contexts
from ..pipeline import runner
from ._common import config_options, console, handle_errors, load_run_config, store_for

POLICIES = ["classifier", "twin_search", "optimal", "random", "equal", "weighted"]


def build_policy(name, config, store, space):
    spec = config.platform
    if name == "classifier":
        model = runner.load_classifier(store).model
        twin = runner.load_twin(store) if store.exists("twin") else None
        return ClassifierPolicy(spec, space, model, evaluator=TwinEvaluator(twin) if twin is not None else None)
    if name == "twin_search":
        return twin_search_policy(spec, space, runner.load_twin(store))
    if name == "optimal":
        return optimal_policy(spec, space, config.oracle)
    if name == "random":
        return RandomPolicy(spec, space)
    if name == "equal":
        return EqualPolicy(spec)
    return WeightedPolicy(spec)


@click.command(name="decide")
@config_options
@click.option("--policy", "-p", type=click.Choice(POLICIES), default="classifier", help="Decision policy")
@click.option("--intervals", "-n", type=click.IntRange(min=1), default=4, help="Number of decision intervals")
@click.option("--json-out", type=click.Path(dir_okay=False), default=None, help="Write records to a file")
@handle_errors
def decide(config_path, seed, out, policy, intervals, json_out):
    """Decide allocations for fresh contexts and print the decision records."""
    config = load_run_config(config_path, seed, out)
    store = store_for(config)
    space = runner.space_for(config)
    chosen = build_policy(policy, config, store, space)
    contexts = sample_global_contexts(
        intervals, config.stage_seed("decide"), config.platform.n_vbs, config.eval_profile
    )
    records = decision_loop(
        chosen, contexts, config.platform, config.oracle,
        interval_s=config.interval_s, seed=config.stage_seed("decide"), workers=config.workers,
    )
    if json_out:
        save_decisions(records, json_out)
        console.print(f"Wrote {len(records)} decisions to {json_out}")
        console.print(f"Total energy over {len(records)} intervals: {cumulative_energy(records):.1f} J")
    else:
        click.echo(json.dumps([r.to_dict() for r in records], indent=2))
