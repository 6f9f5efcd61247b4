"""
Kraus-operator channels.

A channel is an immutable set of Kraus operators {K_i} acting as
ρ -> Σ_i K_i ρ K_i†. Construction checks completeness Σ_i K_i†K_i = I, so every
``KrausChannel`` in circulation is trace preserving.

Constructors take kernel *values* (Λ for RTN, Ω for NMD); ``kernels.py`` turns
physical parameters into those values and ``build_channel`` wires the two
together for the command line.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .kernels import DEFAULT_KERNELS, MemoryKernel, get_kernel
from .matrix_core import (
    IDENTITY,
    PAULIS,
    SIGMA_Z,
    ComplexMatrix,
    DensityMatrix,
    _frozen,
    as_complex_matrix,
)
from .utils import (
    ChannelParameterError,
    DimensionMismatchError,
    IncompleteChannelError,
    InvalidKernelValueError,
    MissingParameterError,
    UnknownChannelError,
    UnsupportedDimensionError,
)

logger = logging.getLogger(__name__)

COMPLETENESS_TOL = 1e-10
PROBABILITY_SUM_TOL = 1e-12
UNITAL_TOL = 1e-12
UNRUH_R_MAX = math.pi / 4


@dataclass(frozen=True, eq=False)
class KrausChannel:
    ops: tuple[ComplexMatrix, ...]
    label: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.ops) == 0:
            raise IncompleteChannelError("A channel needs at least one Kraus operator.")
        ops = tuple(as_complex_matrix(k) for k in self.ops)
        shape = ops[0].shape
        for k in ops[1:]:
            if k.shape != shape:
                raise DimensionMismatchError(
                    f"Kraus operators of channel '{self.label}' mix shapes {shape} and {k.shape}."
                )
        stack = np.stack(ops)
        gram = np.einsum("kji,kjl->il", stack.conj(), stack)
        deviation = float(np.max(np.abs(gram - np.eye(shape[0]))))
        if deviation > COMPLETENESS_TOL:
            raise IncompleteChannelError(
                f"Channel '{self.label}' is not trace preserving: "
                f"max |Σ K†K - I| = {deviation:.3e}."
            )
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "_stack", _frozen(stack))

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def map_matrix(self, mat: npt.ArrayLike) -> ComplexMatrix:
        """The linear map Σ K X K† on an arbitrary square matrix."""
        mat = as_complex_matrix(mat)
        if mat.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"Channel '{self.label}' acts on dim {self.dim}, got shape {mat.shape}."
            )
        return np.einsum("kij,jl,kml->im", self._stack, mat, self._stack.conj())

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        out = self.map_matrix(rho.mat)
        return DensityMatrix(0.5 * (out + out.conj().T))

    def apply_batch(self, rhos: np.ndarray) -> np.ndarray:
        """Applies the channel to an array of matrices of shape (..., d, d). No validation."""
        rhos = np.asarray(rhos, dtype=np.complex128)
        if rhos.shape[-2:] != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"Channel '{self.label}' acts on dim {self.dim}, got shape {rhos.shape}."
            )
        return np.einsum(
            "kij,...jl,kml->...im", self._stack, rhos, self._stack.conj(), optimize=True
        )


def apply(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    return ch.apply(rho)


# --- Parameter checks ---


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ChannelParameterError(f"{name} must be finite, got {value}.")
    return value


def _unit_interval(name: str, value: float) -> float:
    value = _finite(name, value)
    if not 0 <= value <= 1:
        raise ChannelParameterError(f"{name} must lie in [0, 1], got {value}.")
    return value


def _kernel_value(name: str, value: float) -> float:
    value = _finite(name, value)
    if abs(value) > 1:
        raise InvalidKernelValueError(f"|{name}| must not exceed 1, got {value}.")
    return value


# --- Constructors ---


def identity_channel(dim: int = 2) -> KrausChannel:
    if dim < 1:
        raise UnsupportedDimensionError(f"dim must be positive, got {dim}.")
    return KrausChannel(ops=(np.eye(dim, dtype=np.complex128),), label="identity")


def _telegraph(label: str, param: str, value: float) -> KrausChannel:
    value = _kernel_value(param, value)
    k_plus = math.sqrt((1 + value) / 2)
    k_minus = math.sqrt((1 - value) / 2)
    return KrausChannel(
        ops=(k_plus * IDENTITY, k_minus * SIGMA_Z), label=label, params={param: value}
    )


def rtn(lam: float) -> KrausChannel:
    """Random telegraph noise dephasing: K0 = k₊I, K1 = k₋σz with k± = √((1 ± Λ)/2)."""
    return _telegraph("rtn", "lambda", lam)


def nmd(omega: float) -> KrausChannel:
    """Non-Markovian dephasing with kernel value Ω; same operator structure as ``rtn``."""
    return _telegraph("nmd", "omega", omega)


def pd(gamma: float) -> KrausChannel:
    gamma = _unit_interval("gamma", gamma)
    p0 = np.diag([1.0, math.sqrt(1 - gamma)])
    p1 = np.diag([0.0, math.sqrt(gamma)])
    return KrausChannel(ops=(p0, p1), label="pd", params={"gamma": gamma})


def ad(gamma: float) -> KrausChannel:
    gamma = _unit_interval("gamma", gamma)
    a0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1 - gamma)]])
    a1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel(ops=(a0, a1), label="ad", params={"gamma": gamma})


def gad(alpha: float, xi: float) -> KrausChannel:
    """
    Generalized amplitude damping with β = 1 - α and P = 1 - ξ.

    ``alpha`` weights decay towards |0>, ``beta`` towards |1>; ``xi = 1`` is the
    identity and ``alpha = 1`` reduces to ``ad(1 - xi)``.
    """
    alpha = _unit_interval("alpha", alpha)
    xi = _unit_interval("xi", xi)
    beta = 1 - alpha
    big_p = 1 - xi
    g0 = math.sqrt(alpha) * np.diag([1.0, math.sqrt(xi)])
    g1 = np.array([[0.0, math.sqrt(alpha * big_p)], [0.0, 0.0]])
    g2 = np.diag([math.sqrt(beta * xi), math.sqrt(beta)])
    g3 = np.array([[0.0, 0.0], [math.sqrt(beta * big_p), 0.0]])
    return KrausChannel(ops=(g0, g1, g2, g3), label="gad", params={"alpha": alpha, "xi": xi})


def unruh(r: float) -> KrausChannel:
    r = _finite("r", r)
    if not 0 <= r <= UNRUH_R_MAX:
        raise ChannelParameterError(f"r must lie in [0, π/4], got {r}.")
    u0 = np.diag([math.cos(r), 1.0])
    u1 = np.array([[0.0, 0.0], [math.sin(r), 0.0]])
    return KrausChannel(ops=(u0, u1), label="unruh", params={"r": r})


def gdc(p0: float, p1: float, p2: float, p3: float) -> KrausChannel:
    """Generalized depolarizing (Pauli) channel with Kraus operators √p_i σ_i."""
    weights = [_finite(f"p{i}", p) for i, p in enumerate((p0, p1, p2, p3))]
    for i, p in enumerate(weights):
        if p < 0:
            raise ChannelParameterError(f"p{i} must be non-negative, got {p}.")
    total = sum(weights)
    if abs(total - 1) > PROBABILITY_SUM_TOL:
        raise ChannelParameterError(f"GDC weights must sum to 1, got {total!r}.")
    ops = tuple(math.sqrt(p) * sigma for p, sigma in zip(weights, PAULIS))
    params = {f"p{i}": p for i, p in enumerate(weights)}
    return KrausChannel(ops=ops, label="gdc", params=params)


def unruh_r_from_acceleration(omega: float, acceleration: float, c: float = 1.0) -> float:
    """Returns r with cos r = (1 + e^{-2πωc/a})^{-1/2}."""
    omega = _finite("omega", omega)
    acceleration = _finite("acceleration", acceleration)
    if omega < 0 or acceleration <= 0 or c <= 0:
        raise ChannelParameterError("Need omega >= 0, acceleration > 0 and c > 0.")
    cos_r = (1 + math.exp(-2 * math.pi * omega * c / acceleration)) ** -0.5
    return math.acos(cos_r)


# --- Bloch picture ---


def bloch_affine(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Returns (T, c) with the channel acting on Bloch vectors as a -> T a + c."""
    if ch.dim != 2:
        raise UnsupportedDimensionError(f"Bloch form needs a qubit channel, got dim {ch.dim}.")
    images = [ch.map_matrix(sigma) for sigma in PAULIS]
    coords = np.array(
        [[0.5 * np.trace(PAULIS[i] @ img).real for img in images] for i in range(1, 4)]
    )
    return coords[:, 1:], coords[:, 0]


def is_unital(ch: KrausChannel, tol: float = UNITAL_TOL) -> bool:
    image = ch.map_matrix(np.eye(ch.dim))
    return bool(np.max(np.abs(image - np.eye(ch.dim))) <= tol)


# --- Label-driven construction (CLI vocabulary) ---


@dataclass(frozen=True)
class ChannelSpec:
    label: str
    parameters: tuple[str, ...]
    build: Callable[[dict[str, float]], KrausChannel]
    kernel_param: str | None = None


CHANNELS: dict[str, ChannelSpec] = {
    spec.label: spec
    for spec in (
        ChannelSpec("identity", (), lambda p: identity_channel()),
        ChannelSpec("rtn", ("lambda",), lambda p: rtn(p["lambda"]), kernel_param="lambda"),
        ChannelSpec("nmd", ("omega",), lambda p: nmd(p["omega"]), kernel_param="omega"),
        ChannelSpec("pd", ("gamma",), lambda p: pd(p["gamma"])),
        ChannelSpec("ad", ("gamma",), lambda p: ad(p["gamma"])),
        ChannelSpec("gad", ("alpha", "xi"), lambda p: gad(p["alpha"], p["xi"])),
        ChannelSpec("unruh", ("r",), lambda p: unruh(p["r"])),
        ChannelSpec(
            "gdc", ("p0", "p1", "p2", "p3"), lambda p: gdc(p["p0"], p["p1"], p["p2"], p["p3"])
        ),
    )
}


def get_channel_spec(label: str) -> ChannelSpec:
    try:
        return CHANNELS[label.lower()]
    except KeyError:
        known = ", ".join(CHANNELS)
        raise UnknownChannelError(f"Unknown channel '{label}'. Known channels: {known}.") from None


def _resolve_kernel(
    spec: ChannelSpec, params: dict[str, float], kernel: str | None
) -> MemoryKernel | None:
    if kernel is not None:
        if spec.kernel_param is None:
            raise ChannelParameterError(f"Channel '{spec.label}' does not take a memory kernel.")
        mk = get_kernel(kernel)
        if mk.channel_label != spec.label:
            raise ChannelParameterError(
                f"Kernel '{kernel}' drives '{mk.channel_label}', not '{spec.label}'."
            )
        return mk
    if spec.kernel_param is not None and spec.kernel_param not in params:
        mk = get_kernel(DEFAULT_KERNELS[spec.label])
        if mk.variable in params:
            return mk
    return None


def build_channel(
    label: str, params: dict[str, float], kernel: str | None = None
) -> tuple[KrausChannel, float | None]:
    """
    Builds a channel from its label and named parameters.

    For ``rtn``/``nmd`` the kernel value comes either directly (``lambda`` /
    ``omega``) or from a memory kernel evaluated at ``t`` / ``p``; the default
    kernel is used when only the kernel variable is given. Returns the channel
    and the kernel value it was built with (``None`` for other channels).
    """
    spec = get_channel_spec(label)
    mk = _resolve_kernel(spec, params, kernel)

    allowed = set(spec.parameters)
    resolved = dict(params)
    if mk is not None:
        allowed |= {mk.variable, *mk.parameters}
        if mk.variable not in params:
            raise MissingParameterError(
                f"Kernel '{mk.label}' needs '{mk.variable}' (use --set {mk.variable}=...)."
            )
        if spec.kernel_param in params:
            raise ChannelParameterError(
                f"Give either '{spec.kernel_param}' or kernel variable '{mk.variable}', not both."
            )
        resolved[spec.kernel_param] = mk.evaluate(params[mk.variable], params)
        logger.debug(
            f"Kernel {mk.label} at {mk.variable}={params[mk.variable]} -> "
            f"{spec.kernel_param}={resolved[spec.kernel_param]}"
        )

    unexpected = sorted(set(params) - allowed)
    if unexpected:
        raise ChannelParameterError(
            f"Channel '{spec.label}' does not take parameter(s): {', '.join(unexpected)}."
        )
    missing = [name for name in spec.parameters if name not in resolved]
    if missing:
        raise MissingParameterError(
            f"Channel '{spec.label}' needs parameter(s): {', '.join(missing)}."
        )

    channel = spec.build(resolved)
    kernel_value = resolved[spec.kernel_param] if spec.kernel_param else None
    return channel, kernel_value
