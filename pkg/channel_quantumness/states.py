"""
Parameterized pure input states.

A state with angles (x, φ) is cos(x/2)|0> + e^{-iφ} sin(x/2)|1>, so the upper
off-diagonal of its density matrix is e^{+iφ} sin(x)/2 and its Bloch vector is
(sin x cos φ, -sin x sin φ, cos x).
"""

import math

import numpy as np
import numpy.typing as npt

from .matrix_core import DensityMatrix
from .models import StatePairParams


def pure_state(x: float, phi: float) -> DensityMatrix:
    c = math.cos(x / 2)
    s = math.sin(x / 2)
    off = np.exp(1j * phi) * c * s
    mat = np.array([[c * c, off], [np.conj(off), s * s]], dtype=np.complex128)
    return DensityMatrix(mat)


def pure_states(x: npt.ArrayLike, phi: npt.ArrayLike) -> np.ndarray:
    """Batched ``pure_state``: broadcasts the angles and returns shape (..., 2, 2)."""
    x, phi = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(phi, dtype=np.float64))
    c = np.cos(x / 2)
    s = np.sin(x / 2)
    off = np.exp(1j * phi) * c * s
    out = np.empty(x.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c * c
    out[..., 0, 1] = off
    out[..., 1, 0] = np.conj(off)
    out[..., 1, 1] = s * s
    return out


def bloch_of_angles(x: float, phi: float) -> tuple[float, float, float]:
    return (math.sin(x) * math.cos(phi), -math.sin(x) * math.sin(phi), math.cos(x))


def state_pair(p: StatePairParams) -> tuple[DensityMatrix, DensityMatrix]:
    return pure_state(p.x, p.phi), pure_state(p.y, p.xi)


def max_noncommuting_params(x: float, phi: float) -> StatePairParams:
    return StatePairParams(x=x, phi=phi, y=x + math.pi / 2, xi=phi)


def max_noncommuting_pair(x: float, phi: float) -> tuple[DensityMatrix, DensityMatrix]:
    """The pair with y = x + π/2 and ξ = φ; its Bloch vectors are orthogonal unit vectors."""
    return state_pair(max_noncommuting_params(x, phi))
