"""Command-line interface for hornet: `verify`, `config show` and `version`."""

from hornet.cli.main import app, cli, main

__all__ = ["app", "cli", "main"]
