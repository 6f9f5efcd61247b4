# Command implementations registered on the typer app in cli.py, plus the helpers they share.
import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

import typer
from pydantic import ValidationError

from ..models import OptimizerConfig
from ..utils import ConsistencyError, InputError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _fail(message: str, code: int) -> None:
    typer.secho(f"Error: {message}", fg=typer.colors.RED, err=True)
    raise typer.Exit(code=code)


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Maps library exceptions onto the CLI's exit codes."""
    try:
        yield
    except (InputError, ValidationError) as e:
        logger.debug("Usage error", exc_info=True)
        _fail(str(e), EXIT_USAGE)
    except (OSError, ConsistencyError) as e:
        logger.error(f"Runtime failure: {e}", exc_info=True)
        _fail(str(e), EXIT_RUNTIME)
    except (typer.Exit, typer.Abort):
        raise
    except Exception as e:
        # Exit code 1 is reserved for failed validation.
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        _fail(f"{type(e).__name__}: {e}", EXIT_RUNTIME)


def build_config(grid: int | None, seed: int, **extra: Any) -> OptimizerConfig:
    # Omitting the grid lets QCHAN_DEFAULT_GRID supply it.
    kwargs: dict[str, Any] = {"seed": seed, **extra}
    if grid is not None:
        kwargs["grid_points_per_angle"] = grid
    return OptimizerConfig(**kwargs)


def echo_document(doc: dict[str, Any]) -> None:
    typer.echo(json.dumps(doc, indent=2))
