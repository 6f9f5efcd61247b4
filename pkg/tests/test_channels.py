import math

import numpy as np
import pytest

from channel_quantumness.channels import (
    CHANNELS,
    KrausChannel,
    ad,
    apply,
    bloch_affine,
    build_channel,
    gad,
    gdc,
    identity_channel,
    is_unital,
    nmd,
    pd,
    rtn,
    unruh,
    unruh_r_from_acceleration,
)
from channel_quantumness.matrix_core import DensityMatrix, commutator, from_bloch, hs_norm_sq
from channel_quantumness.utils import (
    ChannelParameterError,
    DimensionMismatchError,
    IncompleteChannelError,
    InvalidKernelValueError,
    MissingParameterError,
    UnknownChannelError,
)

GRID = np.linspace(0, 1, 51)


def representative_channels() -> list[KrausChannel]:
    return [
        identity_channel(),
        rtn(0.35),
        nmd(-0.6),
        pd(0.4),
        ad(0.3),
        gad(0.3, 0.45),
        unruh(0.6),
        gdc(0.4, 0.3, 0.2, 0.1),
    ]


def _assert_complete(ch: KrausChannel):
    total = sum(k.conj().T @ k for k in ch.ops)
    assert np.max(np.abs(total - np.eye(ch.dim))) <= 1e-10


def test_rtn_scales_off_diagonals_by_kernel_value():
    rho = DensityMatrix(np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]]))
    out = apply(rtn(0.4), rho)
    expected = np.array([[0.7, 0.4 * (0.2 - 0.1j)], [0.4 * (0.2 + 0.1j), 0.3]])
    assert np.allclose(out.mat, expected, atol=1e-15)


def test_amplitude_damping_action():
    p, q, gamma = 0.4, 0.3 + 0.2j, 0.35
    rho = DensityMatrix(np.array([[1 - p, q], [np.conj(q), p]]))
    out = apply(ad(gamma), rho)
    s = math.sqrt(1 - gamma)
    expected = np.array([[1 - p * (1 - gamma), q * s], [np.conj(q) * s, p * (1 - gamma)]])
    assert np.allclose(out.mat, expected, atol=1e-15)


def test_identity_channel_leaves_states_alone(random_states):
    for rho in random_states(20):
        assert np.allclose(apply(identity_channel(), rho).mat, rho.mat, atol=1e-15)


def test_special_parameter_values():
    rho = from_bloch((0.6, 0.0, 0.8))
    for ch in (rtn(1.0), nmd(1.0), pd(0.0), ad(0.0), gad(0.2, 1.0), unruh(0.0), gdc(1, 0, 0, 0)):
        assert np.allclose(apply(ch, rho).mat, rho.mat, atol=1e-15), ch.label
    for ch in (rtn(0.0), nmd(0.0), pd(1.0)):
        out = apply(ch, rho).mat
        assert abs(out[0, 1]) < 1e-15, ch.label
    assert np.allclose(apply(ad(1.0), rho).mat, np.diag([1, 0]), atol=1e-15)


def test_gad_with_alpha_one_is_amplitude_damping():
    t_gad, c_gad = bloch_affine(gad(1.0, 0.7))
    t_ad, c_ad = bloch_affine(ad(0.3))
    assert np.allclose(t_gad, t_ad, atol=1e-15)
    assert np.allclose(c_gad, c_ad, atol=1e-15)


def test_completeness_across_parameter_grids():
    for v in GRID:
        for ch in (rtn(2 * v - 1), nmd(1 - 2 * v), pd(v), ad(v), unruh(v * math.pi / 4)):
            _assert_complete(ch)
        for xi in GRID[::5]:
            _assert_complete(gad(v, xi))
        rest = 1 - v
        _assert_complete(gdc(v, rest / 2, rest / 3, rest - rest / 2 - rest / 3))


def test_printed_phase_damping_pair_is_not_trace_preserving():
    gamma = 0.3
    printed = (np.diag([1, math.sqrt(1 - gamma)]), np.diag([1, math.sqrt(gamma)]))
    with pytest.raises(IncompleteChannelError):
        KrausChannel(ops=printed, label="pd-printed")


def test_kraus_operators_must_share_a_shape():
    with pytest.raises(DimensionMismatchError):
        KrausChannel(ops=(np.eye(2), np.zeros((3, 3))), label="mixed")
    with pytest.raises(IncompleteChannelError):
        KrausChannel(ops=(), label="empty")


def test_apply_preserves_density_matrices(random_states):
    states = random_states(1000)
    for ch in representative_channels():
        for rho in states:
            out = apply(ch, rho)  # DensityMatrix validates hermiticity, trace and PSD
            assert abs(np.trace(out.mat) - 1) <= 1e-12


def test_apply_batch_matches_apply(random_states):
    states = random_states(10)
    batch = np.stack([rho.mat for rho in states])
    for ch in representative_channels():
        outs = ch.apply_batch(batch)
        for rho, out in zip(states, outs):
            assert np.allclose(out, apply(ch, rho).mat, atol=1e-15)


def test_apply_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply(rtn(0.5), DensityMatrix(np.eye(3) / 3))


def test_unitality():
    for ch in (rtn(0.3), nmd(-0.2), pd(0.6), gdc(0.1, 0.2, 0.3, 0.4), gad(0.5, 0.3)):
        assert is_unital(ch), ch.label
    for ch in (ad(0.5), gad(0.8, 0.3), unruh(0.5)):
        assert not is_unital(ch), ch.label
    half = DensityMatrix(np.eye(2) / 2)
    assert not np.allclose(apply(ad(0.5), half).mat, half.mat)


def test_dephasing_channels_keep_diagonal_pairs_commuting():
    rho = DensityMatrix(np.diag([0.8, 0.2]).astype(complex))
    sigma = DensityMatrix(np.diag([0.35, 0.65]).astype(complex))
    for ch in (rtn(0.4), nmd(0.9), pd(0.7), gdc(0.4, 0.3, 0.2, 0.1)):
        c = commutator(apply(ch, rho).mat, apply(ch, sigma).mat)
        assert hs_norm_sq(c) <= 1e-20


def test_bloch_affine_forms():
    t, c = bloch_affine(gdc(0.5, 0.2, 0.2, 0.1))
    assert np.allclose(t, np.diag([0.4, 0.4, 0.2]), atol=1e-15)
    assert np.allclose(c, 0, atol=1e-15)

    gamma = 0.36
    t, c = bloch_affine(ad(gamma))
    assert np.allclose(t, np.diag([0.8, 0.8, 0.64]), atol=1e-15)
    assert np.allclose(c, [0, 0, gamma], atol=1e-15)

    r = 0.5
    t, c = bloch_affine(unruh(r))
    cr = math.cos(r)
    assert np.allclose(t, np.diag([cr, cr, cr**2]), atol=1e-15)
    assert np.allclose(c, [0, 0, -math.sin(r) ** 2], atol=1e-15)

    alpha, xi = 0.8, 0.49
    t, c = bloch_affine(gad(alpha, xi))
    assert np.allclose(t, np.diag([0.7, 0.7, xi]), atol=1e-15)
    assert np.allclose(c, [0, 0, (2 * alpha - 1) * (1 - xi)], atol=1e-15)


@pytest.mark.parametrize(
    "factory, args, error",
    [
        (rtn, (1.1,), InvalidKernelValueError),
        (nmd, (-1.5,), InvalidKernelValueError),
        (pd, (-0.1,), ChannelParameterError),
        (ad, (1.2,), ChannelParameterError),
        (gad, (0.5, 1.5), ChannelParameterError),
        (unruh, (1.0,), ChannelParameterError),
        (gdc, (0.5, 0.6, -0.1, 0.0), ChannelParameterError),
        (gdc, (0.5, 0.2, 0.2, 0.2), ChannelParameterError),
        (pd, (math.nan,), ChannelParameterError),
    ],
)
def test_constructors_reject_out_of_range_parameters(factory, args, error):
    with pytest.raises(error):
        factory(*args)


def test_unruh_acceleration_mapping():
    r = unruh_r_from_acceleration(omega=1.0, acceleration=2.0)
    assert math.cos(r) == pytest.approx((1 + math.exp(-math.pi)) ** -0.5)
    assert unruh_r_from_acceleration(1.0, 1e12) == pytest.approx(math.pi / 4, abs=1e-9)
    assert unruh_r_from_acceleration(1.0, 1e-3) == pytest.approx(0.0, abs=1e-12)
    unruh(unruh_r_from_acceleration(3.0, 7.0))
    with pytest.raises(ChannelParameterError):
        unruh_r_from_acceleration(1.0, 0.0)


def test_build_channel_direct_parameters():
    ch, kernel_value = build_channel("PD", {"gamma": 0.25})
    assert ch.label == "pd" and ch.params == {"gamma": 0.25}
    assert kernel_value is None

    ch, kernel_value = build_channel("rtn", {"lambda": -0.3})
    assert kernel_value == -0.3
    assert set(CHANNELS) == {"identity", "rtn", "nmd", "pd", "ad", "gad", "unruh", "gdc"}


def test_build_channel_uses_default_kernels():
    ch, kernel_value = build_channel("rtn", {"t": 0.0, "gamma": 1.0, "b": 2.0})
    assert kernel_value == 1.0 and ch.params == {"lambda": 1.0}

    ch, kernel_value = build_channel("nmd", {"p": 0.35})
    assert kernel_value == pytest.approx(0.3)

    ch, kernel_value = build_channel("nmd", {"p": 0.1}, kernel="nmd-linear")
    assert kernel_value == pytest.approx(0.8)


@pytest.mark.parametrize(
    "label, params, kernel, error",
    [
        ("xyz", {}, None, UnknownChannelError),
        ("pd", {}, None, MissingParameterError),
        ("gad", {"alpha": 0.5}, None, MissingParameterError),
        ("pd", {"gamma": 0.2, "r": 0.1}, None, ChannelParameterError),
        ("pd", {"gamma": 0.2}, "rtn-daffer", ChannelParameterError),
        ("nmd", {"p": 0.2}, "rtn-daffer", ChannelParameterError),
        ("rtn", {"lambda": 0.5, "t": 1.0, "gamma": 1.0, "b": 2.0}, "rtn-daffer", ChannelParameterError),
        ("rtn", {"gamma": 1.0, "b": 2.0}, "rtn-daffer", MissingParameterError),
        ("rtn", {"t": 1.0, "gamma": 1.0}, None, MissingParameterError),
    ],
)
def test_build_channel_errors(label, params, kernel, error):
    with pytest.raises(error):
        build_channel(label, params, kernel)
