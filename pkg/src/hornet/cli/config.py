"""Configuration commands for the hornet CLI."""

import json
from pathlib import Path
from typing import Annotated, Literal, cast

import yaml
from cyclopts import App, Parameter
from rich.panel import Panel
from rich.syntax import Syntax
from rich.text import Text
from rich.tree import Tree

from hornet.cli.main import ContextArg, HornetContext, print_error_and_exit
from hornet.config import Config, get_default_config_path, get_env_overrides, load_config_from_path
from hornet.core.errors import ConfigurationError
from hornet.core.logging import get_logger
from hornet.rich_utils import console

logger = get_logger(__name__)

config = App(
    name="config",
    help="Configuration commands.\n\nDisplay the effective hornet configuration.",
)


def _write_stdout(text: str) -> None:
    console.file.write(text)
    console.file.flush()


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _add_dict_to_tree(tree: Tree, data: dict[str, object], env_overrides: dict[str, str], prefix: str = "") -> None:
    for key, value in data.items():
        full_path = f"{prefix}{key}"
        if isinstance(value, dict):
            branch = tree.add(f"[bold blue]{key}[/]")
            _add_dict_to_tree(branch, cast(dict[str, object], value), env_overrides, f"{full_path}.")
            continue
        formatted = _format_value(value)
        if full_path in env_overrides:
            text = Text()
            text.append(f"{key}: ", style="bold")
            text.append(formatted, style="bold yellow")
            text.append(f" (from {env_overrides[full_path]})", style="italic dark_orange")
            tree.add(text)
            continue
        tree.add(Text.assemble(f"{key}: ", (formatted, "green")))


def _render_tree_panel(config_dict: dict[str, object], env_overrides: dict[str, str]) -> None:
    tree = Tree("[bold magenta]hornet config[/]")
    _add_dict_to_tree(tree, config_dict, env_overrides)
    console.print(Panel(tree, border_style="blue", expand=False))
    if env_overrides:
        console.print("\n[yellow]Yellow values[/] indicate environment variable overrides.", highlight=False)


def _dump(config_dict: dict[str, object], output_format: str) -> str:
    if output_format == "json":
        return json.dumps(config_dict, indent=2)
    return yaml.safe_dump(config_dict, default_flow_style=False, sort_keys=False)


def _render_syntax_panel(config_dict: dict[str, object], output_format: str) -> None:
    syntax = Syntax(_dump(config_dict, output_format), output_format, line_numbers=True, theme="ansi_dark", padding=1)
    console.print(Panel(syntax, title="hornet config", border_style="blue", expand=False))


def _render_plain_text(config_dict: dict[str, object], output_format: str, env_overrides: dict[str, str]) -> None:
    _write_stdout(_dump(config_dict, output_format).rstrip("\n") + "\n")
    if output_format != "json" and env_overrides:
        _write_stdout("\n# Values from environment variables:\n")
        for config_key, env_var in sorted(env_overrides.items()):
            _write_stdout(f"#   {config_key} <- {env_var}\n")


def _load_config_for_show(ctx: HornetContext, path: str | None, config_path: Path) -> Config:
    if path:
        logger.debug("Loading configuration from custom path", config_path=str(config_path))
        base_config = load_config_from_path(config_path)
        return base_config.model_copy(update={"debug": ctx.debug or base_config.debug})
    return ctx.config


@config.command(name="show")
def config_show(
    *,
    path: Annotated[
        str | None,
        Parameter(name=["--path", "-p"], help="Configuration file to show (default: ~/.hornet/config.yaml)"),
    ] = None,
    output_format: Annotated[
        Literal["yaml", "json", "tree"],
        Parameter(name=["--format", "-f"], help="yaml or json text, or a tree highlighting env overrides"),
    ] = "yaml",
    pretty_print: Annotated[
        bool,
        Parameter(name="--pretty-print", negative="--no-pretty-print", help="Syntax-highlight yaml/json output"),
    ] = True,
    ctx: ContextArg,
) -> None:
    """Display the effective hornet configuration."""
    config_path = Path(path).expanduser() if path else get_default_config_path()
    logger.info("Running config show command", config_path=str(config_path), output_format=output_format)

    try:
        cfg = _load_config_for_show(ctx, path, config_path)
    except FileNotFoundError as error:
        print_error_and_exit(f"Configuration file not found: {config_path}", error=error)
    except ConfigurationError as error:
        print_error_and_exit(error.message, error=error)

    config_dict = cfg.model_dump(exclude_none=True, mode="json")
    env_overrides = get_env_overrides()
    source = f"Configuration from: {config_path}"
    if not path and not config_path.exists():
        source += " (file not found, using defaults)"
    _write_stdout(source + "\n\n")

    if output_format == "tree" or (pretty_print and env_overrides and output_format != "json"):
        _render_tree_panel(config_dict, env_overrides)
        return

    shown = {**config_dict, "_env_overrides": env_overrides} if output_format == "json" and env_overrides else config_dict
    if pretty_print:
        _render_syntax_panel(shown, output_format)
        return
    _render_plain_text(shown, output_format, env_overrides)
