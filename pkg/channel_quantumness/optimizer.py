"""
Numerical quantumness: the largest output incompatibility over pairs of pure inputs.

Stage one scans a uniform grid over the four angles (x, φ, y, ξ) of the two input
states. Stage two polishes the best grid point with a Nelder-Mead simplex. Both
stages are deterministic; the random seed only drives the mixed-state diagnostic.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channels import KrausChannel
from .matrix_core import bloch_to_density_batch, density_to_bloch_batch
from .models import ClosedForm, OptimizerConfig, QuantumnessResult, StatePairParams
from .quantumness import closed_form_mu, incompatibility_bloch_batch
from .states import pure_states
from .utils import (
    MissingParameterError,
    OptimizerConfigError,
    UnknownChannelError,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

BRUTE_FORCE_MIN_GRID = 16
BLOCK_STATES = 64
DOMINANCE_TOL = 1e-9


@dataclass(frozen=True)
class GridMaximum:
    value: float
    index: int
    params: StatePairParams
    evaluations: int


def polar_angles(n: int) -> np.ndarray:
    """n polar angles over [0, π], both poles included."""
    return np.linspace(0.0, math.pi, n)


def azimuth_angles(n: int) -> np.ndarray:
    """n azimuths over [0, 2π), the periodic endpoint excluded."""
    return np.linspace(0.0, 2 * math.pi, n, endpoint=False)


def _require_qubit(ch: KrausChannel) -> None:
    if ch.dim != 2:
        raise UnsupportedDimensionError(
            f"Quantumness is optimized for qubit channels only, got dim {ch.dim}."
        )


def grid_output_bloch(ch: KrausChannel, n: int) -> np.ndarray:
    """Bloch vectors of the channel outputs for all n² grid states, x-major order."""
    xs, phis = np.meshgrid(polar_angles(n), azimuth_angles(n), indexing="ij")
    outputs = ch.apply_batch(pure_states(xs.ravel(), phis.ravel()))
    return density_to_bloch_batch(outputs)


def _best_in_block(bloch: np.ndarray, start: int, stop: int) -> tuple[float, int]:
    values = incompatibility_bloch_batch(bloch[start:stop, None, :], bloch[None, :, :])
    local = int(np.argmax(values))  # first occurrence, i.e. smallest flat index
    return float(values.flat[local]), start * bloch.shape[0] + local


def reduce_candidates(candidates: list[tuple[float, int]]) -> tuple[float, int]:
    """Largest value wins; ties go to the smallest flat index, whatever the input order."""
    return max(candidates, key=lambda c: (c[0], -c[1]))


def params_from_index(index: int, n: int) -> StatePairParams:
    ia, ja, ib, jb = np.unravel_index(index, (n, n, n, n))
    polar, azimuth = polar_angles(n), azimuth_angles(n)
    return StatePairParams(x=polar[ia], phi=azimuth[ja], y=polar[ib], xi=azimuth[jb])


def grid_search(ch: KrausChannel, n: int, workers: int = 1) -> GridMaximum:
    """Exhaustive maximum over the n⁴ grid; the result does not depend on ``workers``."""
    _require_qubit(ch)
    bloch = grid_output_bloch(ch, n)
    states = bloch.shape[0]
    bounds = [(s, min(s + BLOCK_STATES, states)) for s in range(0, states, BLOCK_STATES)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            candidates = list(pool.map(lambda b: _best_in_block(bloch, *b), bounds))
    else:
        candidates = [_best_in_block(bloch, *b) for b in bounds]
    value, index = reduce_candidates(candidates)
    logger.debug(f"Grid n={n} on '{ch.label}': max {value:.12g} at flat index {index}")
    return GridMaximum(
        value=value, index=index, params=params_from_index(index, n), evaluations=states**2
    )


def pair_incompatibility(ch: KrausChannel, angles: np.ndarray) -> float:
    """Output incompatibility for the input angles (x, φ, y, ξ)."""
    x, phi, y, xi = angles
    outputs = ch.apply_batch(pure_states([x, y], [phi, xi]))
    a, b = density_to_bloch_batch(outputs)
    return float(incompatibility_bloch_batch(a, b))


def brute_force_mu(ch: KrausChannel, n: int) -> float:
    """Grid maximum without refinement: a lower bound on μ."""
    if n < BRUTE_FORCE_MIN_GRID:
        raise OptimizerConfigError(f"Brute force needs n >= {BRUTE_FORCE_MIN_GRID}, got {n}.")
    return grid_search(ch, n).value


def _refine(ch: KrausChannel, start: StatePairParams, cfg: OptimizerConfig):
    n = cfg.grid_points_per_angle
    x0 = np.array([start.x, start.phi, start.y, start.xi])
    half_steps = np.array([math.pi / (n - 1), 2 * math.pi / n] * 2) / 2
    simplex = np.vstack([x0, x0 + np.diag(half_steps)])
    return minimize(
        lambda v: -pair_incompatibility(ch, v),
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.refinement_iterations,
            "xatol": cfg.refinement_tolerance,
            "fatol": cfg.refinement_tolerance,
            "initial_simplex": simplex,
        },
    )


def _closed_form_for(ch: KrausChannel) -> ClosedForm | None:
    try:
        return closed_form_mu(ch.label, ch.params)
    except (UnknownChannelError, MissingParameterError):
        return None


def mixed_state_diagnostic(ch: KrausChannel, cfg: OptimizerConfig) -> float:
    """Largest output incompatibility over random mixed input pairs (Bloch radius < 1)."""
    if not cfg.include_mixed_diagnostic:
        raise OptimizerConfigError("The mixed-state diagnostic is disabled in this configuration.")
    _require_qubit(ch)
    rng = np.random.default_rng(cfg.seed)
    count = 2 * cfg.mixed_samples
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(count) ** (1 / 3)
    vectors = directions * radii[:, None]
    outputs = density_to_bloch_batch(ch.apply_batch(bloch_to_density_batch(vectors)))
    half = cfg.mixed_samples
    values = incompatibility_bloch_batch(outputs[:half], outputs[half:])
    best = float(np.max(values))
    logger.info(f"Mixed-state diagnostic for '{ch.label}': {best:.12g} over {half} pairs")
    return best


def maximize_mu(ch: KrausChannel, cfg: OptimizerConfig | None = None) -> QuantumnessResult:
    cfg = cfg or OptimizerConfig()
    _require_qubit(ch)
    grid = grid_search(ch, cfg.grid_points_per_angle)

    res = _refine(ch, grid.params, cfg)
    refined = -float(res.fun)
    if not res.success:
        logger.warning(
            f"Refinement for '{ch.label}' stopped after {res.nit} iterations: {res.message}"
        )
    if refined > grid.value:
        x, phi, y, xi = res.x
        mu, argmax = refined, StatePairParams(x=x, phi=phi, y=y, xi=xi)
    else:
        mu, argmax = grid.value, grid.params
    mu = min(mu, 1.0)
    logger.debug(f"'{ch.label}': grid {grid.value:.12g}, refined {refined:.12g}, nfev {res.nfev}")

    closed = _closed_form_for(ch)
    mixed = None
    if cfg.include_mixed_diagnostic:
        mixed = mixed_state_diagnostic(ch, cfg)
        if mixed > mu + DOMINANCE_TOL:
            logger.warning(
                f"Mixed inputs reach {mixed:.12g} on '{ch.label}', above the pure-state {mu:.12g}."
            )

    return QuantumnessResult(
        channel_label=ch.label,
        channel_params=dict(ch.params),
        mu=mu,
        argmax_params=argmax,
        grid_mu=grid.value,
        closed_form=closed.value if closed else None,
        closed_form_kind=closed.kind if closed else None,
        abs_error=abs(mu - closed.value) if closed else None,
        evaluations=grid.evaluations + int(res.nfev),
        converged=bool(res.success),
        mixed_diagnostic=mixed,
    )
