"""Command discovery via module scanning.

Drop a new .py file into llcalloc/commands/ that defines click commands
and they register as top-level subcommands.

Convention:
    - A module lists its commands in ``COMMANDS``; without it the first
      click command found in the module is registered.
    - Modules whose name starts with ``_`` are helpers and are skipped.
"""

import importlib
import logging
import pkgutil

import click

logger = logging.getLogger(__name__)


def _module_commands(module):
    commands = getattr(module, "COMMANDS", None)
    if commands is not None:
        return list(commands)
    for attr_name in dir(module):
        obj = getattr(module, attr_name)
        if isinstance(obj, click.Command):
            return [obj]
    return []


def discover_commands(parent_group):
    """Scan llcalloc/commands/ and register every command on parent_group."""
    import llcalloc.commands as commands_pkg

    registered = []
    for finder, modname, ispkg in pkgutil.iter_modules(commands_pkg.__path__):
        if modname.startswith("_"):
            continue

        try:
            module = importlib.import_module(f"llcalloc.commands.{modname}")
        except Exception as e:
            logger.warning("Failed to load command module '%s': %s", modname, e)
            continue

        for cmd in _module_commands(module):
            parent_group.add_command(cmd)
            registered.append(cmd.name)
            logger.debug("Registered command: %s", cmd.name)
    return registered
