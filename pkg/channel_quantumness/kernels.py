"""
Memory kernels: functions from a physical parameter (time or probability) to the
kernel value Λ or Ω consumed by the ``rtn`` and ``nmd`` channel constructors.

The defaults are the damped-oscillation random telegraph noise kernel and the
linear probability kernel Ω(p) = 1 - 2p. Both are replaceable; constructors only
ever see the numeric kernel value.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

from .utils import ChannelParameterError, InvalidKernelValueError, MissingParameterError

logger = logging.getLogger(__name__)

KERNEL_BOUND_TOL = 1e-12
CRITICAL_REL_TOL = 1e-12


def rtn_kernel(t: float, gamma: float, b: float) -> float:
    """
    Random telegraph noise kernel with switching rate ``gamma`` and coupling ``b``.

    Oscillatory for 4b² > γ² (revivals), hyperbolic for 4b² < γ² (monotone decay),
    and (1 + γt)e^{-γt} at the critical point.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ChannelParameterError(f"t must be a finite non-negative time, got {t}.")
    if not (math.isfinite(gamma) and gamma > 0):
        raise ChannelParameterError(f"gamma must be positive, got {gamma}.")
    if not (math.isfinite(b) and b > 0):
        raise ChannelParameterError(f"b must be positive, got {b}.")

    four_b2 = 4 * b * b
    g2 = gamma * gamma
    if math.isclose(four_b2, g2, rel_tol=CRITICAL_REL_TOL):
        return (1 + gamma * t) * math.exp(-gamma * t)
    if four_b2 > g2:
        omega = math.sqrt(four_b2 - g2)
        return math.exp(-gamma * t) * (math.cos(omega * t) + gamma / omega * math.sin(omega * t))
    # e^{-γt}cosh(ω't) and e^{-γt}sinh(ω't) written as exponentials to stay finite for large t
    omega = math.sqrt(g2 - four_b2)
    grow = math.exp((omega - gamma) * t)
    decay = math.exp(-(omega + gamma) * t)
    return 0.5 * (grow + decay) + 0.5 * gamma / omega * (grow - decay)


def nmd_linear_kernel(p: float) -> float:
    if not (math.isfinite(p) and 0 <= p <= 1):
        raise ChannelParameterError(f"p must lie in [0, 1], got {p}.")
    return 1 - 2 * p


@dataclass(frozen=True)
class MemoryKernel:
    label: str
    channel_label: str
    variable: str
    parameters: tuple[str, ...]
    func: Callable[..., float]
    description: str = ""

    def evaluate(self, s: float, params: dict[str, float] | None = None) -> float:
        params = params or {}
        missing = [name for name in self.parameters if name not in params]
        if missing:
            raise MissingParameterError(
                f"Kernel '{self.label}' needs parameter(s): {', '.join(missing)}."
            )
        value = self.func(s, **{name: params[name] for name in self.parameters})
        if abs(value) > 1 + KERNEL_BOUND_TOL:
            raise InvalidKernelValueError(
                f"Kernel '{self.label}' gave {value} at {self.variable}={s}; need |value| <= 1."
            )
        return min(max(value, -1.0), 1.0)


KERNELS: dict[str, MemoryKernel] = {
    "rtn-daffer": MemoryKernel(
        label="rtn-daffer",
        channel_label="rtn",
        variable="t",
        parameters=("gamma", "b"),
        func=rtn_kernel,
        description="Damped-oscillation telegraph noise kernel Λ(t; γ, b).",
    ),
    "nmd-linear": MemoryKernel(
        label="nmd-linear",
        channel_label="nmd",
        variable="p",
        parameters=(),
        func=nmd_linear_kernel,
        description="Linear dephasing kernel Ω(p) = 1 - 2p.",
    ),
}

DEFAULT_KERNELS = {"rtn": "rtn-daffer", "nmd": "nmd-linear"}


def get_kernel(name: str) -> MemoryKernel:
    try:
        return KERNELS[name]
    except KeyError:
        known = ", ".join(sorted(KERNELS))
        raise ChannelParameterError(f"Unknown kernel '{name}'. Known kernels: {known}.") from None
