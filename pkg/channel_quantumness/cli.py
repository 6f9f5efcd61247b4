import logging
import os

import typer

from .commands.measure import measure_command, visibility_command
from .commands.sweep import sweep_command, validate_command

logger = logging.getLogger(__name__)


app = typer.Typer(
    help="qchan: quantumness of single-qubit channels via output-state incompatibility.",
    add_completion=True,
    no_args_is_help=True,
)

app.command(name="measure", help="Maximize output incompatibility for one channel.")(
    measure_command
)
app.command(name="sweep", help="Sweep one channel parameter and write CSV or JSON rows.")(
    sweep_command
)
app.command(name="validate", help="Check numerical quantumness against tabulated values.")(
    validate_command
)
app.command(name="visibility", help="Visibility decomposition of the probe pair.")(
    visibility_command
)


@app.callback()
def main_callback(ctx: typer.Context):
    # Logs go to stderr; stdout carries only the result document.
    log_level_str = os.getenv("QCHAN_LOG_LEVEL", "WARNING").upper()
    numeric_level = getattr(logging, log_level_str, logging.WARNING)
    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logger.debug(f"Invoking '{ctx.invoked_subcommand}' at log level {log_level_str}")


def main(argv: list[str] | None = None):
    app(args=argv)


if __name__ == "__main__":
    main()
