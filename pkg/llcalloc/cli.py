import click
from rich.console import Console

from llcalloc import __version__
from llcalloc.commands import discover_commands
from llcalloc.utils.logging import setup_logging

console = Console()


@click.group()
@click.version_option(version=__version__, prog_name="llcalloc")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.pass_context
def main(ctx, verbose):
    """llcalloc - cache-way allocation for virtualized base stations.

    \b
    Pipeline:  gen-data -> train-twin -> build-labels -> train-clf -> evaluate
    All at once:  llcalloc run-all --config configs/default.json
    """
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    setup_logging(verbose=verbose)


discover_commands(main)


if __name__ == "__main__":
    main()
