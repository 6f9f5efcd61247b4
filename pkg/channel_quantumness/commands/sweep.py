import json
import logging
from enum import Enum
from pathlib import Path
from typing import Annotated

import typer

from ..models import SweepSpec
from ..sweeps import (
    CSV_FLOAT_FORMAT,
    DEFAULT_VALIDATION_TOL,
    run_sweep,
    run_validation,
    sweep_document,
    validation_frame,
    write_sweep_csv,
    write_sweep_structured,
)
from ..utils import parse_assignments, parse_sweep
from . import EXIT_VALIDATION_FAILED, build_config, echo_document, exit_on_error
from .measure import ChannelOption, GridOption, KernelOption, SeedOption, SetOption

logger = logging.getLogger(__name__)

JobsOption = Annotated[
    int, typer.Option("--jobs", min=1, help="Points evaluated concurrently.")
]


class SweepFormat(str, Enum):
    CSV = "csv"
    STRUCTURED = "structured"


class ReportFormat(str, Enum):
    TABLE = "table"
    STRUCTURED = "structured"


def sweep_command(
    channel: ChannelOption,
    sweep: Annotated[
        str, typer.Option("--sweep", help="Swept parameter as name=start:stop:step.")
    ],
    assignments: SetOption = None,
    kernel: KernelOption = None,
    out: Annotated[
        Path | None, typer.Option("--out", help="Output file (standard output if omitted).")
    ] = None,
    fmt: Annotated[SweepFormat, typer.Option("--format", help="Output format.")] = SweepFormat.CSV,
    grid: GridOption = None,
    jobs: JobsOption = 1,
    seed: SeedOption = 0,
):
    """Compute quantumness along one parameter and write one row per value."""
    with exit_on_error():
        name, start, stop, step = parse_sweep(sweep)
        spec = SweepSpec(
            channel_label=channel,
            fixed_params=parse_assignments(assignments),
            sweep_param=name,
            start=start,
            stop=stop,
            step=step,
            kernel_choice=kernel,
        )
        df = run_sweep(spec, build_config(grid, seed), jobs=jobs)

        if out is None:
            if fmt is SweepFormat.CSV:
                text = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
                typer.echo(text, nl=False)
            else:
                echo_document(sweep_document(spec, df))
            return
        if fmt is SweepFormat.CSV:
            write_sweep_csv(df, out)
        else:
            write_sweep_structured(spec, df, out)
        typer.secho(f"Wrote {len(df)} rows to {out}", fg=typer.colors.GREEN, err=True)


def validate_command(
    tol: Annotated[
        float, typer.Option("--tol", help="Tolerance against the tabulated values.")
    ] = DEFAULT_VALIDATION_TOL,
    grid: GridOption = None,
    jobs: JobsOption = 1,
    seed: SeedOption = 0,
    fmt: Annotated[
        ReportFormat, typer.Option("--format", help="Report format.")
    ] = ReportFormat.TABLE,
    out: Annotated[
        Path | None, typer.Option("--out", help="Also write the report as JSON to this file.")
    ] = None,
):
    """Reproduce the tabulated quantumness values numerically; exit 1 if any check fails."""
    with exit_on_error():
        report = run_validation(tol, build_config(grid, seed), jobs=jobs)
        if fmt is ReportFormat.STRUCTURED:
            echo_document(report.model_dump(mode="json"))
        else:
            typer.echo(validation_frame(report).to_string(index=False))
            summary = report.summary()
            color = typer.colors.GREEN if report.overall_pass else typer.colors.RED
            typer.secho(
                f"{summary['asserted']} asserted rows, {summary['failed']} failed "
                f"(tolerance {report.tolerance:g}); overall_pass={report.overall_pass}",
                fg=color,
            )
        if out is not None:
            out.write_text(json.dumps(report.model_dump(mode="json"), indent=2) + "\n")

    if not report.overall_pass:
        raise typer.Exit(code=EXIT_VALIDATION_FAILED)
