"""Logging setup for the llcalloc command line."""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOG_FORMAT = "%(name)s - %(levelname)s - %(message)s"


def setup_logging(verbose: bool = False, console: Console = None) -> logging.Logger:
    """Attach a single RichHandler to the package logger.

    Safe to call repeatedly; the handler is replaced, never duplicated.
    """
    logger = logging.getLogger("llcalloc")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)

    handler = RichHandler(
        console=console or Console(stderr=True),
        show_time=False,
        show_path=False,
    )
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False
    return logger
