"""
Dense complex matrices, validated density matrices and qubit Bloch vectors.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every array handed
out by this module is marked read-only so values can be shared freely.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .utils import (
    ConsistencyError,
    DimensionMismatchError,
    InvalidBlochVectorError,
    InvalidMatrixError,
    InvalidStateError,
    UnsupportedDimensionError,
)

ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
BLOCH_NORM_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


IDENTITY = _frozen(np.eye(2, dtype=np.complex128))
SIGMA_X = _frozen(np.array([[0, 1], [1, 0]], dtype=np.complex128))
SIGMA_Y = _frozen(np.array([[0, -1j], [1j, 0]], dtype=np.complex128))
SIGMA_Z = _frozen(np.array([[1, 0], [0, -1]], dtype=np.complex128))
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_complex_matrix(data: npt.ArrayLike) -> ComplexMatrix:
    """Returns a read-only complex copy of ``data``, rejecting non-square or non-finite input."""
    try:
        arr = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidMatrixError(f"Cannot interpret input as a complex matrix: {e}") from e
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidMatrixError(f"Expected a non-empty square matrix, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrixError("Matrix entries must be finite.")
    return _frozen(arr)


def real_scalar(value: complex, what: str) -> float:
    """Drops an imaginary residue up to 1e-12; anything larger means a bug upstream."""
    value = complex(value)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ConsistencyError(f"{what} has imaginary residue {value.imag:.3e}.")
    return value.real


def commutator(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Returns AB - BA."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Cannot commute {a.shape} with {b.shape}.")
    return _frozen(a @ b - b @ a)


def hs_norm_sq(a: npt.ArrayLike) -> float:
    """Squared Hilbert-Schmidt norm Tr(A†A)."""
    a = as_complex_matrix(a)
    return real_scalar(np.trace(a.conj().T @ a), "Tr(A†A)")


def min_eigenvalue(mat: ComplexMatrix) -> float:
    """Smallest eigenvalue of a Hermitian matrix; closed form for 2x2."""
    if mat.shape == (2, 2):
        a = mat[0, 0].real
        d = mat[1, 1].real
        off = abs(mat[0, 1])
        return (a + d) / 2 - math.hypot((a - d) / 2, off)
    return float(np.linalg.eigvalsh(mat)[0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, unit-trace, positive semidefinite matrix."""

    mat: ComplexMatrix

    def __post_init__(self):
        mat = as_complex_matrix(self.mat)
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > HERMITIAN_TOL:
            raise InvalidStateError(f"Matrix is not Hermitian (max deviation {herm_err:.3e}).")
        trace = complex(np.trace(mat))
        if abs(trace - 1) > TRACE_TOL:
            raise InvalidStateError(f"Trace must be 1, got {trace:.15g}.")
        lam = min_eigenvalue(mat)
        if lam < EIGENVALUE_FLOOR:
            raise InvalidStateError(f"Matrix is not positive semidefinite (eigenvalue {lam:.3e}).")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidBlochVectorError(f"Component {name} must be finite.")
            object.__setattr__(self, name, value)
        if self.norm > 1 + BLOCH_NORM_TOL:
            raise InvalidBlochVectorError(f"Bloch vector norm {self.norm:.15g} exceeds 1.")

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([self.x, self.y, self.z])


def from_bloch(v: BlochVector | Sequence[float]) -> DensityMatrix:
    """Returns ½(I + v·σ)."""
    if not isinstance(v, BlochVector):
        v = BlochVector(*v)
    mat = 0.5 * (IDENTITY + v.x * SIGMA_X + v.y * SIGMA_Y + v.z * SIGMA_Z)
    return DensityMatrix(mat)


def to_bloch(rho: DensityMatrix) -> BlochVector:
    if rho.dim != 2:
        raise UnsupportedDimensionError(f"Bloch vectors exist for qubits only, got dim {rho.dim}.")
    m = rho.mat
    vec = np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])
    norm = float(np.linalg.norm(vec))
    # States admitted by the eigenvalue floor may sit a hair outside the unit ball.
    # Only those past the norm tolerance are pulled back onto the sphere.
    if norm > 1 + BLOCH_NORM_TOL:
        vec = vec / norm
    return BlochVector(*vec)


def purity(rho: DensityMatrix) -> float:
    return real_scalar(np.trace(rho.mat @ rho.mat), "Tr(rho^2)")


# --- Batched helpers (arrays of shape (n, 3) and (n, 2, 2)) ---


def bloch_to_density_batch(vectors: npt.ArrayLike) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.float64)
    out = np.empty(v.shape[:-1] + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 0.5 * (1 + v[..., 2])
    out[..., 1, 1] = 0.5 * (1 - v[..., 2])
    out[..., 0, 1] = 0.5 * (v[..., 0] - 1j * v[..., 1])
    out[..., 1, 0] = 0.5 * (v[..., 0] + 1j * v[..., 1])
    return out


def density_to_bloch_batch(mats: np.ndarray) -> np.ndarray:
    off = mats[..., 0, 1]
    return np.stack(
        [2 * off.real, -2 * off.imag, (mats[..., 0, 0] - mats[..., 1, 1]).real], axis=-1
    )
