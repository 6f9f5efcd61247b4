import math

import numpy as np
import pytest
from pydantic import ValidationError

from channel_quantumness.channels import (
    KrausChannel,
    ad,
    build_channel,
    gad,
    gdc,
    identity_channel,
    nmd,
    pd,
    rtn,
)
from channel_quantumness.models import ClosedFormKind, OptimizerConfig
from channel_quantumness.optimizer import (
    brute_force_mu,
    grid_search,
    maximize_mu,
    mixed_state_diagnostic,
    pair_incompatibility,
    params_from_index,
    reduce_candidates,
)
from channel_quantumness.quantumness import probe_incompatibility
from channel_quantumness.sweeps import validation_points
from channel_quantumness.utils import OptimizerConfigError, UnsupportedDimensionError


@pytest.mark.parametrize(
    "channel, expected",
    [
        (identity_channel(), 1.0),
        (pd(0.25), 0.75),
        (rtn(-0.5), 0.25),
        (gdc(0.7, 0.1, 0.1, 0.1), 0.1296),
        (gad(0.5, 0.6), 0.36),
    ],
    ids=["identity", "pd", "rtn", "gdc", "gad-symmetric"],
)
def test_maximize_mu_reaches_known_maxima(channel, expected):
    result = maximize_mu(channel, OptimizerConfig())
    assert result.mu == pytest.approx(expected, abs=1e-6)
    assert 0.0 <= result.mu <= 1.0
    assert result.grid_mu <= result.mu + 1e-15


def test_amplitude_damping_exceeds_its_lower_bound():
    result = maximize_mu(ad(0.5), OptimizerConfig())
    assert result.closed_form_kind is ClosedFormKind.LOWER_BOUND
    assert result.closed_form == pytest.approx(0.5)
    assert result.mu > 0.8
    # A pair tilted symmetrically off the pole already reaches 0.84375.
    assert result.mu >= 0.84375 - 1e-6


def test_result_carries_closed_form_and_argmax():
    ch = pd(0.25)
    cfg = OptimizerConfig(grid_points_per_angle=16)
    result = maximize_mu(ch, cfg)
    assert result.closed_form == 0.75
    assert result.closed_form_kind is ClosedFormKind.EXACT
    assert result.abs_error == pytest.approx(abs(result.mu - 0.75), abs=1e-15)
    p = result.argmax_params
    angles = np.array([p.x, p.phi, p.y, p.xi])
    assert pair_incompatibility(ch, angles) == pytest.approx(result.mu, abs=1e-12)
    assert result.evaluations > 16**4


def test_channel_without_closed_form_reports_none():
    ch = KrausChannel(ops=(np.diag([1.0, 0.0]), np.array([[0.0, 1.0], [0.0, 0.0]])), label="reset")
    result = maximize_mu(ch, OptimizerConfig(grid_points_per_angle=12))
    assert result.closed_form is None and result.abs_error is None
    assert result.mu == pytest.approx(0.0, abs=1e-12)


def test_brute_force_lower_bounds():
    assert brute_force_mu(identity_channel(), 16) >= 0.99
    value = brute_force_mu(rtn(0.5), 32)
    assert value <= 0.25 + 1e-12
    assert value == pytest.approx(0.25, abs=2e-3)
    assert brute_force_mu(ad(1.0), 16) == pytest.approx(0.0, abs=1e-12)


def test_brute_force_rejects_coarse_grids():
    with pytest.raises(OptimizerConfigError):
        brute_force_mu(pd(0.3), 15)


@pytest.mark.parametrize(
    "label, params",
    validation_points(),
    ids=[f"{label}-{i}" for i, (label, _) in enumerate(validation_points())],
)
def test_maximize_mu_dominates_grid_and_noncommuting_pair(label, params):
    channel, _ = build_channel(label, params)
    n = 17  # odd, so the equator is on the grid
    result = maximize_mu(channel, OptimizerConfig(grid_points_per_angle=n))
    assert result.mu >= brute_force_mu(channel, n) - 1e-12
    assert result.mu >= probe_incompatibility(channel, 0.0, 0.0) - 1e-12


def test_maximize_mu_is_deterministic(fast_config):
    first = maximize_mu(ad(0.3), fast_config)
    second = maximize_mu(ad(0.3), fast_config)
    assert first.model_dump() == second.model_dump()


def test_grid_search_does_not_depend_on_workers():
    ch = gdc(0.5, 0.3, 0.0, 0.2)
    serial = grid_search(ch, 16, workers=1)
    parallel = grid_search(ch, 16, workers=4)
    assert (serial.value, serial.index) == (parallel.value, parallel.index)
    assert serial.evaluations == 16**4


def test_reduce_candidates_prefers_smallest_index_on_ties():
    candidates = [(0.5, 9), (0.4, 1), (0.5, 3)]
    assert reduce_candidates(candidates) == (0.5, 3)
    assert reduce_candidates(list(reversed(candidates))) == (0.5, 3)


def test_params_from_index_is_x_major():
    n = 8
    p = params_from_index(1 * n**3 + 2 * n**2 + 3 * n + 4, n)
    assert p.x == pytest.approx(math.pi / (n - 1))
    assert p.phi == pytest.approx(2 * 2 * math.pi / n)
    assert p.y == pytest.approx(3 * math.pi / (n - 1))
    assert p.xi == pytest.approx(4 * 2 * math.pi / n)


def test_dephasing_family_depends_only_on_kernel_magnitude(fast_config):
    values = [maximize_mu(ch, fast_config).mu for ch in (rtn(0.6), rtn(-0.6), nmd(0.6), nmd(-0.6))]
    assert np.std(values) <= 1e-8


@pytest.mark.parametrize("channel", [rtn(0.45), nmd(-0.8), pd(0.3)])
def test_dephasing_objective_is_flat_on_noncommuting_family(channel):
    values = [
        probe_incompatibility(channel, x, phi)
        for x in np.linspace(0, math.pi, 16)
        for phi in np.linspace(0, 2 * math.pi, 16, endpoint=False)
    ]
    assert np.std(values) <= 1e-10


def test_mixed_diagnostic_disabled_by_default():
    with pytest.raises(OptimizerConfigError):
        mixed_state_diagnostic(pd(0.5), OptimizerConfig())


def test_mixed_diagnostic_stays_below_pure_state_maximum():
    cfg = OptimizerConfig(
        grid_points_per_angle=12, include_mixed_diagnostic=True, mixed_samples=500, seed=3
    )
    result = maximize_mu(pd(0.5), cfg)
    assert result.mixed_diagnostic is not None
    assert result.mixed_diagnostic <= 0.5 + 1e-9
    assert result.mixed_diagnostic <= result.mu + 1e-9
    assert mixed_state_diagnostic(pd(0.5), cfg) == result.mixed_diagnostic


def test_only_qubit_channels_are_optimized():
    qutrit = KrausChannel(ops=(np.eye(3),), label="identity-3")
    with pytest.raises(UnsupportedDimensionError):
        maximize_mu(qutrit, OptimizerConfig(grid_points_per_angle=8))


def test_grid_default_comes_from_environment(monkeypatch):
    assert OptimizerConfig().grid_points_per_angle == 24
    monkeypatch.setenv("QCHAN_DEFAULT_GRID", "10")
    assert OptimizerConfig().grid_points_per_angle == 10
    monkeypatch.setenv("QCHAN_DEFAULT_GRID", "ten")
    assert OptimizerConfig().grid_points_per_angle == 24


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid_points_per_angle": 4},
        {"refinement_iterations": 0},
        {"refinement_tolerance": -1.0},
        {"seed": -1},
    ],
)
def test_optimizer_config_rejects_bad_values(kwargs):
    with pytest.raises(ValidationError):
        OptimizerConfig(**kwargs)
