import logging
import math
from typing import Annotated

import typer

from ..channels import build_channel
from ..optimizer import maximize_mu
from ..quantumness import probe_visibilities
from ..utils import InputError, parse_assignments
from . import build_config, echo_document, exit_on_error

logger = logging.getLogger(__name__)

ChannelOption = Annotated[
    str,
    typer.Option(
        "--channel", help="Channel label: identity, rtn, nmd, pd, ad, gad, unruh or gdc."
    ),
]
SetOption = Annotated[
    list[str] | None,
    typer.Option("--set", help="Channel parameters as k=v[,k=v...]; may be repeated."),
]
KernelOption = Annotated[
    str | None,
    typer.Option("--kernel", help="Memory kernel for rtn/nmd (rtn-daffer, nmd-linear)."),
]
GridOption = Annotated[
    int | None,
    typer.Option("--grid", help="Grid points per angle (default: QCHAN_DEFAULT_GRID or 24)."),
]
SeedOption = Annotated[int, typer.Option("--seed", help="Seed for the mixed-state diagnostic.")]


def measure_command(
    channel: ChannelOption,
    assignments: SetOption = None,
    kernel: KernelOption = None,
    grid: GridOption = None,
    seed: SeedOption = 0,
    mixed_diagnostic: Annotated[
        bool,
        typer.Option(
            "--mixed-diagnostic", help="Also sample random mixed input pairs (reported only)."
        ),
    ] = False,
):
    """Compute the quantumness of one channel and print the result record."""
    with exit_on_error():
        cfg = build_config(grid, seed, include_mixed_diagnostic=mixed_diagnostic)
        ch, kernel_value = build_channel(channel, parse_assignments(assignments), kernel)
        logger.info(f"Measuring {ch.label} {ch.params} with grid {cfg.grid_points_per_angle}")
        result = maximize_mu(ch, cfg)
        doc = result.model_dump(mode="json")
        doc["kernel_value"] = kernel_value
        echo_document(doc)


def visibility_command(
    channel: ChannelOption,
    assignments: SetOption = None,
    kernel: KernelOption = None,
    x: Annotated[float, typer.Option("--x", help="Polar angle x of the probe pair.")] = 0.0,
    phi: Annotated[float, typer.Option("--phi", help="Azimuth φ of the probe pair.")] = 0.0,
):
    """Print both visibilities of the maximally noncommuting probe after the channel."""
    with exit_on_error():
        if not (math.isfinite(x) and math.isfinite(phi)):
            raise InputError("Probe angles must be finite.")
        ch, _ = build_channel(channel, parse_assignments(assignments), kernel)
        pair = probe_visibilities(ch, x, phi)
        echo_document(
            {
                "channel_label": ch.label,
                "channel_params": ch.params,
                "x": x,
                "phi": phi,
                **pair.model_dump(mode="json"),
            }
        )
