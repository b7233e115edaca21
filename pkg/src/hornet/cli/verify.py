"""The `verify` command."""

from pathlib import Path
from typing import Annotated, Literal

from cyclopts import Parameter
from pydantic import ValidationError

from hornet.cli.main import ContextArg, print_error_and_exit
from hornet.config import Config, load_config_from_path
from hornet.core.logging import get_logger
from hornet.core.models import RunConfig
from hornet.core.output import DefaultOutputHandler
from hornet.core.verifier import Verifier
from hornet.rich_utils import err_console

logger = get_logger(__name__)


def _load_config(ctx_config: Config, path: Path | None) -> Config:
    if path is None:
        return ctx_config
    try:
        loaded = load_config_from_path(path)
    except FileNotFoundError as error:
        print_error_and_exit(str(error), error=error)
    return loaded.model_copy(update={"debug": ctx_config.debug or loaded.debug})


def verify(
    file: Annotated[Path, Parameter(help="Protocol specification to verify")],
    *,
    max_clauses: Annotated[
        int | None, Parameter(name="--max-clauses", help="Stop saturation after this many stored clauses")
    ] = None,
    max_depth: Annotated[
        int | None, Parameter(name="--max-depth", help="Stop saturation when a clause exceeds this term depth")
    ] = None,
    derivation_depth: Annotated[
        int | None, Parameter(name="--derivation-depth", help="Depth limit of the derivation search")
    ] = None,
    emit_derivation: Annotated[
        Literal["text", "dot", "none"] | None,
        Parameter(name="--emit-derivation", help="Derivation format; dot writes <input>.deriv.dot"),
    ] = None,
    no_index: Annotated[
        bool, Parameter(name="--no-index", negative="", help="Disable the clause indexes during saturation")
    ] = False,
    stats: Annotated[bool, Parameter(name="--stats", negative="", help="Print saturation counters")] = False,
    verbose: Annotated[
        bool, Parameter(name=["--verbose", "-v"], negative="", help="Trace saturation events to stderr")
    ] = False,
    config_path: Annotated[Path | None, Parameter(name="--config", help="Configuration file to use")] = None,
    ctx: ContextArg,
) -> None:
    """Saturate a specification and answer its queries.

    Exit codes: 0 all proved, 1 some derivable, 2 some inconclusive, 3 input error.
    """
    config = _load_config(ctx.config, config_path)
    try:
        run_config = RunConfig.from_config(
            config,
            file,
            max_clauses=max_clauses,
            max_depth=max_depth,
            derivation_depth=derivation_depth,
            derivation_format=emit_derivation,
            no_index=no_index,
            stats=stats,
            verbose=verbose,
        )
    except ValidationError as error:
        logger.warning("Invalid verify options", error=str(error))
        print_error_and_exit(f"Invalid options: {error}", error=error)

    logger.info(
        "Running verify command",
        input_path=str(run_config.input_path),
        max_clauses=run_config.max_clauses,
        max_depth=run_config.max_depth,
        derivation_format=run_config.derivation_format,
        use_index=run_config.use_index,
    )
    handler = DefaultOutputHandler(verbose=run_config.verbose, derivation_format=run_config.derivation_format)
    report = Verifier(config=config, output_handler=handler).run(run_config)

    if run_config.derivation_format == "dot" and any(outcome.dot for outcome in report.outcomes):
        err_console.print(f"Derivations written to {run_config.dot_path}", markup=False, highlight=False)
    raise SystemExit(report.exit_code)
