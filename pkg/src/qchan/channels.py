"""Catalog of single-qubit noisy channels in Kraus form.

Channels act as ``rho -> sum_k E_k rho E_k^dagger``. Every catalog channel
takes a qubit in; the erasure channel emits a qutrit whose third level is
the erasure flag.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .qlinalg import I2, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix, ValidationError, bloch_to_density

CPTP_TOL = 1e-10
UNITAL_TOL = 1e-10


class ChannelKind(enum.Enum):
    DEPOLARIZING = "depolarizing"
    ERASURE = "erasure"
    PHASE_DAMPING = "phase-damping"
    BIT_FLIP = "bit-flip"
    BIT_PHASE_FLIP = "bit-phase-flip"
    PHASE_FLIP = "phase-flip"
    TWO_PAULI = "two-pauli"
    AMPLITUDE_DAMPING = "amplitude-damping"
    SPLAYING = "splaying"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, name: str) -> "ChannelKind":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls if k is not cls.CUSTOM)
            raise ValueError(f"unknown channel kind {name!r} (choose from {choices})") from None


_ALIASES = {
    "depolarising": "depolarizing",
    "phasedamping": "phase-damping",
    "dephasing": "phase-damping",
    "bitflip": "bit-flip",
    "bitphaseflip": "bit-phase-flip",
    "phaseflip": "phase-flip",
    "twopauli": "two-pauli",
    "amplitude": "amplitude-damping",
    "amplitudedamping": "amplitude-damping",
    "spraying": "splaying",
}

UNITAL_KINDS = frozenset({
    ChannelKind.DEPOLARIZING,
    ChannelKind.PHASE_DAMPING,
    ChannelKind.BIT_FLIP,
    ChannelKind.BIT_PHASE_FLIP,
    ChannelKind.PHASE_FLIP,
    ChannelKind.TWO_PAULI,
})


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    kind: ChannelKind
    eta: float
    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or self.kind.value

    def kraus_stack(self) -> np.ndarray:
        return np.stack(self.kraus)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Action of a qubit channel on Bloch vectors, ``w -> t + T w``."""

    T: np.ndarray
    t: np.ndarray

    def __call__(self, w) -> np.ndarray:
        return self.t + self.T @ np.asarray(w, dtype=float)

    @property
    def is_unital(self) -> bool:
        return bool(np.max(np.abs(self.t)) <= UNITAL_TOL)


@dataclass(frozen=True)
class CPTPReport:
    ok: bool
    max_deviation: float
    messages: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.ok


def _frozen(*mats) -> tuple[np.ndarray, ...]:
    out = []
    for m in mats:
        a = np.array(m, dtype=complex)
        a.setflags(write=False)
        out.append(a)
    return tuple(out)


def validate_cptp(kraus) -> CPTPReport:
    """Check the completeness relation ``sum_k E_k^dagger E_k = I``.

    Raises ValidationError when the operators are empty or disagree in shape.
    """
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    if not mats:
        raise ValidationError("empty Kraus list")
    shape = mats[0].shape
    if len(shape) != 2:
        raise ValidationError(f"Kraus operator 0 is not a matrix (shape {shape})")
    for i, m in enumerate(mats):
        if m.shape != shape:
            raise ValidationError(f"Kraus operator {i} has shape {m.shape}, expected {shape}")
    acc = sum(m.conj().T @ m for m in mats)
    dev = float(np.max(np.abs(acc - np.eye(shape[1]))))
    if dev <= CPTP_TOL:
        return CPTPReport(True, dev)
    return CPTPReport(False, dev, (f"max |sum E^dagger E - I| = {dev:.6f}",))


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    return eta


SPLAYING_T = np.diag([1 / np.sqrt(3), 0.0, 1 / 3])
SPLAYING_t = np.array([0.0, 0.0, 1 / 3])


def kraus_from_affine(T, t, cutoff: float = 1e-13) -> tuple[np.ndarray, ...]:
    """Kraus operators realizing the qubit affine map (T, t).

    Builds the Choi matrix ``sum_ij |i><j| (x) E(|i><j|)`` and splits it along
    its eigenvectors; eigenvalues below ``cutoff`` are dropped.
    """
    T = np.asarray(T, dtype=float)
    t = np.asarray(t, dtype=float)

    def image(m):
        # E(a I + b.sigma) = a (I + t.sigma) + (T b).sigma
        a = np.trace(m) / 2
        b = np.array([np.trace(m @ p) / 2 for p in PAULIS])
        v = a * t + T @ b
        return a * I2 + sum(v[i] * PAULIS[i] for i in range(3))

    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            choi += np.kron(e, image(e))
    vals, vecs = np.linalg.eigh(choi)
    if vals[0] < -1e-12:
        raise ValidationError("affine map is not completely positive")
    ops = []
    for lam, v in sorted(zip(vals, vecs.T), key=lambda p: -p[0]):
        if lam > cutoff:
            # choi = sum |v><v| with v = sum_i |i> (x) E|i>  =>  E[:, i] = v[2i:2i+2]
            ops.append(np.sqrt(lam) * v.reshape(2, 2).T)
    return tuple(ops)


# Choi-eigenvector split of (SPLAYING_T, SPLAYING_t), signs fixed; the Choi
# matrix has rank 3 so three operators suffice.
_SPLAYING_KRAUS = _frozen(
    np.diag([np.sqrt(3) / 2, 0.5]),
    [[0.0, 1 / np.sqrt(2)], [1 / np.sqrt(6), 0.0]],
    np.diag([1 / (2 * np.sqrt(3)), -0.5]),
)


def _kraus_for(kind: ChannelKind, eta: float) -> tuple[np.ndarray, ...]:
    s0 = np.sqrt(1 - eta)
    if kind is ChannelKind.DEPOLARIZING:
        s = np.sqrt(eta / 3)
        return _frozen(s0 * I2, s * SIGMA_X, s * SIGMA_Y, s * SIGMA_Z)
    if kind is ChannelKind.ERASURE:
        embed = np.zeros((3, 2))
        embed[0, 0] = embed[1, 1] = 1.0
        flag0 = np.zeros((3, 2))
        flag0[2, 0] = 1.0
        flag1 = np.zeros((3, 2))
        flag1[2, 1] = 1.0
        return _frozen(s0 * embed, np.sqrt(eta) * flag0, np.sqrt(eta) * flag1)
    if kind is ChannelKind.PHASE_DAMPING:
        s = np.sqrt(eta)
        return _frozen(s0 * I2, s * np.diag([1.0, 0.0]), s * np.diag([0.0, 1.0]))
    if kind is ChannelKind.BIT_FLIP:
        return _frozen(s0 * I2, np.sqrt(eta) * SIGMA_X)
    if kind is ChannelKind.BIT_PHASE_FLIP:
        return _frozen(s0 * I2, np.sqrt(eta) * SIGMA_Y)
    if kind is ChannelKind.PHASE_FLIP:
        return _frozen(s0 * I2, np.sqrt(eta) * SIGMA_Z)
    if kind is ChannelKind.TWO_PAULI:
        s = np.sqrt(eta / 2)
        return _frozen(s0 * I2, s * SIGMA_X, s * SIGMA_Y)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return _frozen([[1.0, 0.0], [0.0, s0]], [[0.0, np.sqrt(eta)], [0.0, 0.0]])
    raise AssertionError(kind)


def make_channel(kind, eta: float = 0.0) -> QuantumChannel:
    """Build a catalog channel with error probability ``eta``.

    The splaying channel has no free parameter; ``eta`` is ignored for it and
    stored as 0.
    """
    if isinstance(kind, str):
        kind = ChannelKind.parse(kind)
    if kind is ChannelKind.CUSTOM:
        raise ValueError("custom channels are loaded from a channel file, not make_channel")
    eta = _check_eta(eta)
    if kind is ChannelKind.SPLAYING:
        return QuantumChannel(kind, 0.0, _SPLAYING_KRAUS, 2, 2)
    kraus = _kraus_for(kind, eta)
    dim_out = 3 if kind is ChannelKind.ERASURE else 2
    return QuantumChannel(kind, eta, kraus, 2, dim_out)


def _apply_matrix(ch: QuantumChannel, m: np.ndarray) -> np.ndarray:
    return sum(k @ m @ k.conj().T for k in ch.kraus)


def apply(ch: QuantumChannel, rho) -> DensityMatrix:
    """Output state ``sum_k E_k rho E_k^dagger``."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if rho.dim != ch.dim_in:
        raise ValidationError(f"channel expects dimension {ch.dim_in}, state has {rho.dim}")
    out = _apply_matrix(ch, rho.matrix)
    return DensityMatrix(0.5 * (out + out.conj().T))


def apply_batch(ch: QuantumChannel, rhos: np.ndarray) -> np.ndarray:
    """Apply the channel to a stack of input matrices, shape (..., d_in, d_in)."""
    K = ch.kraus_stack()
    return np.einsum("kab,...bc,kdc->...ad", K, rhos, K.conj())


def is_unital(ch: QuantumChannel) -> bool:
    if ch.dim_in != ch.dim_out:
        raise ValidationError("unitality undefined across dimensions")
    out = _apply_matrix(ch, np.eye(ch.dim_in, dtype=complex))
    return bool(np.max(np.abs(out - np.eye(ch.dim_out))) <= UNITAL_TOL)


def affine_representation(ch: QuantumChannel) -> AffineMap:
    """(T, t) with ``T_ij = tr(sigma_i E(sigma_j)) / 2`` and ``t_i = tr(sigma_i E(I)) / 2``."""
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise ValidationError("no qubit affine form for a channel that leaves the qubit space")
    T = np.empty((3, 3))
    for j, sj in enumerate(PAULIS):
        img = _apply_matrix(ch, sj)
        for i, si in enumerate(PAULIS):
            T[i, j] = 0.5 * np.trace(si @ img).real
    img = _apply_matrix(ch, I2)
    t = np.array([0.5 * np.trace(si @ img).real for si in PAULIS])
    T.setflags(write=False)
    t.setflags(write=False)
    return AffineMap(T, t)


def apply_affine(ch: QuantumChannel, w) -> DensityMatrix:
    return bloch_to_density(affine_representation(ch)(w))


# -- custom channel files ---------------------------------------------------

class ChannelFileError(ValueError):
    """Malformed channel definition; ``location`` names the offending spot."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def _parse_matrix(raw, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != rows:
        raise ChannelFileError(f"expected {rows} rows", where)
    m = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise ChannelFileError(f"expected {cols} entries", f"{where}[{i}]")
        for j, entry in enumerate(row):
            loc = f"{where}[{i}][{j}]"
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
                raise ChannelFileError("expected a [re, im] number pair", loc)
            m[i, j] = complex(entry[0], entry[1])
    return m


def parse_channel_dict(data) -> tuple[QuantumChannel, CPTPReport]:
    """Parse a channel definition object without rejecting non-CPTP sets."""
    if not isinstance(data, dict):
        raise ChannelFileError("top level must be an object", "$")
    for key in ("name", "dim_in", "dim_out", "kraus"):
        if key not in data:
            raise ChannelFileError(f"missing field {key!r}", "$")
    name = data["name"]
    if not isinstance(name, str):
        raise ChannelFileError("expected a string", "$.name")
    dims = []
    for key in ("dim_in", "dim_out"):
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, int) or v not in (2, 3):
            raise ChannelFileError("expected integer 2 or 3", f"$.{key}")
        dims.append(v)
    dim_in, dim_out = dims
    raw = data["kraus"]
    if not isinstance(raw, list) or not raw:
        raise ChannelFileError("expected a non-empty array of matrices", "$.kraus")
    kraus = tuple(_parse_matrix(m, dim_out, dim_in, f"$.kraus[{k}]") for k, m in enumerate(raw))
    report = validate_cptp(kraus)
    kind = ChannelKind.CUSTOM
    try:
        parsed = ChannelKind.parse(name)
        if parsed is ChannelKind.SPLAYING:
            kind = parsed
    except ValueError:
        pass
    ch = QuantumChannel(kind, 0.0, _frozen(*kraus), dim_in, dim_out, name=name)
    return ch, report


def load_channel_text(text: str) -> tuple[QuantumChannel, CPTPReport]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_channel_dict(data)


def load_channel_file(path) -> QuantumChannel:
    """Read a channel definition file; non-CPTP operator sets are rejected."""
    ch, report = load_channel_text(Path(path).read_text(encoding="utf-8"))
    if not report.ok:
        raise ValidationError(f"Kraus operators are not trace preserving (max deviation {report.max_deviation:.6f})")
    return ch


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {
        "name": ch.label,
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in k] for k in ch.kraus],
    }
