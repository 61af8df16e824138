"""Small dense linear algebra for qubit (and flagged-qubit) density matrices.

Everything here works on 2x2 matrices, plus the 3x3 block-diagonal shape
``2x2 block (+) scalar`` produced by the erasure channel. Eigenvalues come
from closed forms, so no general eigensolver is involved.

All logarithms are base two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
BLOCH_TOL = 1e-12
CLAMP_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (I2, *PAULIS):
    _m.setflags(write=False)


class ValidationError(ValueError):
    """Raised when a matrix or vector violates a state invariant."""


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a complex square array of dimension 2 or 3."""
    if isinstance(m, DensityMatrix):
        return m.matrix
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in (2, 3):
        raise ValidationError(f"expected a 2x2 or 3x3 matrix, got shape {arr.shape}")
    return arr


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated qubit (dim 2) or flagged-qubit (dim 3) state.

    The wrapped array is copied and made read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(as_matrix(self.matrix), dtype=complex, copy=True)
        if not is_hermitian(m):
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix has trace {tr!r}, expected 1")
        if _raw_eigenvalues(m)[-1] < -PSD_TOL:
            raise ValidationError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self.matrix, precision=6)})"


def _eig2(a: float, d: float, b: complex) -> tuple[float, float]:
    # [[a, b], [conj(b), d]]; same as tr/2 +- sqrt(tr^2 - 4 det)/2 but
    # without cancellation when the eigenvalues are nearly equal
    half_tr = 0.5 * (a + d)
    r = 0.5 * np.hypot(a - d, 2.0 * abs(b))
    return half_tr + r, half_tr - r


def _is_block_diagonal(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(max(abs(m[0, 2]), abs(m[1, 2]), abs(m[2, 0]), abs(m[2, 1])) <= tol)


def _raw_eigenvalues(m: np.ndarray) -> list[float]:
    if m.shape == (2, 2):
        return list(_eig2(m[0, 0].real, m[1, 1].real, m[0, 1]))
    if not _is_block_diagonal(m):
        raise ValidationError("unsupported 3x3 shape: expected a 2x2 block plus a scalar")
    vals = [*_eig2(m[0, 0].real, m[1, 1].real, m[0, 1]), m[2, 2].real]
    return sorted(vals, reverse=True)


def eigenvalues_hermitian(m) -> list[float]:
    """Eigenvalues of a Hermitian 2x2 (or block-diagonal 3x3) matrix, descending.

    A 3x3 input must be of the form ``[[A, 0], [0, c]]`` with ``A`` a 2x2
    block; its spectrum is the block's two eigenvalues plus ``c``.
    """
    arr = as_matrix(m)
    if not is_hermitian(arr):
        raise ValidationError("not Hermitian")
    return _raw_eigenvalues(arr)


def _entropy_terms(vals) -> float:
    s = 0.0
    for v in vals:
        if v < 0.0 and v > -CLAMP_TOL:
            v = 0.0
        elif v > 1.0 and v < 1.0 + CLAMP_TOL:
            v = 1.0
        if v > 0.0:
            s -= v * np.log2(v)
    return float(s)


def entropy_from_eigenvalues(vals) -> float:
    """Shannon entropy in bits of a spectrum, with 0 log 0 = 0.

    Values within ``CLAMP_TOL`` outside [0, 1] are clamped onto the interval.
    """
    return _entropy_terms(vals)


def von_neumann_entropy(rho) -> float:
    """S(rho) = -tr rho log2 rho, in bits."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return _entropy_terms(_raw_eigenvalues(rho.matrix))


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2(1-x)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x!r}")
    return _entropy_terms((x, 1.0 - x))


def bloch_to_density(w) -> DensityMatrix:
    """rho = (I + w . sigma) / 2."""
    w = np.asarray(w, dtype=float)
    if w.shape != (3,):
        raise ValidationError(f"Bloch vector must have 3 components, got shape {w.shape}")
    if np.linalg.norm(w) > 1.0 + BLOCH_TOL:
        raise ValidationError("outside Bloch ball")
    x, y, z = w
    m = 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)
    return DensityMatrix(m)


def density_to_bloch(rho) -> np.ndarray:
    """Inverse of :func:`bloch_to_density`: w_i = tr(rho sigma_i)."""
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise ValidationError("Bloch vectors exist only for qubit (dim 2) states")
    return np.array([2.0 * m[0, 1].real, -2.0 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])


def bloch_from_angles(theta: float, phi: float) -> np.ndarray:
    """Unit Bloch vector for the pure state with polar angle theta, azimuth phi."""
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def angles_from_bloch(w) -> tuple[float, float]:
    """(theta, phi) of a Bloch vector, with phi in [0, 2 pi)."""
    x, y, z = np.asarray(w, dtype=float)
    r = np.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        return 0.0, 0.0
    theta = float(np.arccos(np.clip(z / r, -1.0, 1.0)))
    phi = float(np.arctan2(y, x)) % (2 * np.pi)
    if phi >= 2 * np.pi:
        # -tiny % 2pi rounds up to 2pi
        phi = 0.0
    return theta, phi


def pure_state(theta: float, phi: float) -> DensityMatrix:
    return bloch_to_density(bloch_from_angles(theta, phi))


# Batched helpers used by the grid scans and the optimizer. Inputs are stacks
# of matrices with shape (..., d, d); no validation is done here.

def eigenvalues_batch(ms: np.ndarray) -> np.ndarray:
    """Eigenvalues (descending) of a stack of Hermitian 2x2 or block 3x3 matrices."""
    d = ms.shape[-1]
    a = ms[..., 0, 0].real
    dd = ms[..., 1, 1].real
    half_tr = 0.5 * (a + dd)
    r = 0.5 * np.hypot(a - dd, 2.0 * np.abs(ms[..., 0, 1]))
    if d == 2:
        return np.stack([half_tr + r, half_tr - r], axis=-1)
    if d == 3:
        off = np.max(np.abs(np.stack([ms[..., 0, 2], ms[..., 1, 2]], axis=-1)))
        if off > HERMITIAN_TOL:
            raise ValidationError("unsupported 3x3 shape: expected a 2x2 block plus a scalar")
        vals = np.stack([half_tr + r, half_tr - r, ms[..., 2, 2].real], axis=-1)
        return -np.sort(-vals, axis=-1)
    raise ValidationError(f"unsupported dimension {d}")


def entropy_batch(vals: np.ndarray) -> np.ndarray:
    """Row-wise entropy in bits of a stack of spectra (last axis)."""
    v = np.clip(vals, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(v > 0.0, -v * np.log2(np.where(v > 0.0, v, 1.0)), 0.0)
    return terms.sum(axis=-1)


def random_density_matrix(rng: np.random.Generator, dim: int = 2) -> DensityMatrix:
    """Random qubit state, uniform over the Bloch ball (dim 2 only)."""
    if dim != 2:
        raise ValueError("only qubit states are supported")
    w = rng.normal(size=3)
    w *= rng.uniform() ** (1 / 3) / np.linalg.norm(w)
    return bloch_to_density(w)
