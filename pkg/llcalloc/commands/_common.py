"""Options and error handling shared by the commands."""

import functools
import sys
from pathlib import Path

import click
from rich.console import Console
from rich.markup import escape

from ..config import RunConfig
from ..errors import ArtifactIOError, LlcAllocError
from ..storage.artifacts import ArtifactStore

console = Console()


def config_options(fn):
    """--config, --seed and --out, shared by every stage command."""
    fn = click.option(
        "--out", "-o", "out", type=click.Path(file_okay=False), default=None,
        help="Output directory (overrides the config)",
    )(fn)
    fn = click.option(
        "--seed", "-s", type=click.IntRange(min=0), default=None,
        help="Master seed (overrides the config)",
    )(fn)
    fn = click.option(
        "--config", "-c", "config_path", type=click.Path(dir_okay=False), default=None,
        help="Run configuration JSON (defaults if omitted)",
    )(fn)
    return fn


def load_run_config(config_path, seed, out) -> RunConfig:
    config = RunConfig.load(Path(config_path)) if config_path else RunConfig.default()
    return config.with_overrides(seed=seed, output_dir=out)


def store_for(config: RunConfig) -> ArtifactStore:
    return ArtifactStore(config.output_dir)


def fail(error: LlcAllocError) -> None:
    console.print(f"[red]Error:[/red] {escape(str(error))}")
    sys.exit(error.exit_code)


def handle_errors(fn):
    """Map llcalloc errors to a red message and their exit code."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LlcAllocError as e:
            fail(e)
        except OSError as e:
            fail(ArtifactIOError(str(e)))
    return wrapper
