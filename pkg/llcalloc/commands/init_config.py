"""Write a starting run configuration."""

from pathlib import Path

import click

from ..config import RunConfig
from ._common import console, handle_errors


@click.command(name="init-config")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--eight-ways", is_flag=True, help="Scarce-cache variant: 8 ways for 5 vBS")
@click.option("--force", is_flag=True, help="Overwrite an existing file")
@handle_errors
def init_config(path, eight_ways, force):
    """Write the default configuration to PATH."""
    target = Path(path)
    if target.exists() and not force:
        console.print(f"[yellow]{target} exists; use --force to overwrite[/yellow]")
        raise SystemExit(1)
    config = RunConfig.eight_way() if eight_ways else RunConfig.default()
    config.save(target)
    console.print(f"Wrote {target} (config hash {config.config_hash()[:12]})")
