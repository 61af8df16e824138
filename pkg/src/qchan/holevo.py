"""Holevo quantity, closed-form capacities and restricted two-state scans.

The product-state capacity of a channel is the supremum of the Holevo
quantity

    chi = S(sum_j p_j E(rho_j)) - sum_j p_j S(E(rho_j))

over input ensembles. Closed forms are available for the unital catalog
channels and the erasure channel. For amplitude damping and the splaying
channel the supremum is taken over a two-state family: a fixed equatorial
input and a second input obtained by rotating it about the channel's
symmetry axis, scanned on a grid and refined by golden-section search.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import channels as chn
from .channels import ChannelKind, QuantumChannel
from .qlinalg import (
    DensityMatrix,
    ValidationError,
    binary_entropy,
    bloch_to_density,
    eigenvalues_batch,
    entropy_batch,
    von_neumann_entropy,
)
from .search import golden_section_max

PROB_TOL = 1e-12
TWO_PI = 2 * math.pi


class Method(enum.Enum):
    # definition order is the row order used by sweeps
    CLOSED_FORM = "closed_form"
    RESTRICTED_SCAN = "restricted_scan"
    GENERAL_OPTIMIZER = "general_optimizer"


@dataclass(frozen=True)
class Ensemble:
    """Signal states with prior probabilities."""

    entries: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        entries = tuple((float(p), rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho))
                        for p, rho in self.entries)
        if not entries:
            raise ValidationError("ensemble is empty")
        if any(p < 0 for p, _ in entries):
            raise ValidationError("ensemble has a negative probability")
        total = sum(p for p, _ in entries)
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"ensemble probabilities sum to {total!r}")
        if len({rho.dim for _, rho in entries}) != 1:
            raise ValidationError("ensemble states have mixed dimensions")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_bloch(cls, priors, vectors) -> "Ensemble":
        return cls(tuple((p, bloch_to_density(w)) for p, w in zip(priors, vectors)))

    @property
    def priors(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def states(self) -> tuple[DensityMatrix, ...]:
        return tuple(rho for _, rho in self.entries)

    @property
    def dim(self) -> int:
        return self.entries[0][1].dim

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class RestrictedSearchParams:
    """Rotation angle of the second input and its prior ``tau``."""

    psi: float
    tau: float

    def __post_init__(self):
        psi = float(self.psi) % TWO_PI
        tau = float(self.tau)
        if not 0.0 <= tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {tau!r}")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "tau", tau)

    @property
    def A(self) -> float:
        return self.tau * (1.0 - self.tau)


@dataclass(frozen=True)
class CapacityResult:
    value_bits: float
    ensemble: Ensemble
    method: Method
    params: Any = None
    details: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()


def holevo_chi(ch: QuantumChannel, ens: Ensemble) -> float:
    """Holevo quantity of ``ens`` sent through ``ch``, in bits."""
    if ens.dim != ch.dim_in:
        raise ValidationError(f"ensemble dimension {ens.dim} does not match channel input {ch.dim_in}")
    mix = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    avg = 0.0
    for p, rho in ens.entries:
        if p == 0.0:
            continue
        out = chn.apply(ch, rho)
        mix += p * out.matrix
        avg += p * von_neumann_entropy(out)
    return von_neumann_entropy(DensityMatrix(0.5 * (mix + mix.conj().T))) - avg


# -- closed forms -----------------------------------------------------------

_Z_PAIR = ((0.0, 0.0, 1.0), (0.0, 0.0, -1.0))
_X_PAIR = ((1.0, 0.0, 0.0), (-1.0, 0.0, 0.0))
_Y_PAIR = ((0.0, 1.0, 0.0), (0.0, -1.0, 0.0))


def closed_form_value(kind: ChannelKind, eta: float) -> float:
    H = binary_entropy
    if kind is ChannelKind.DEPOLARIZING:
        return 1.0 - H(2 * eta / 3)
    if kind is ChannelKind.ERASURE:
        return 1.0 - eta
    if kind in (ChannelKind.PHASE_DAMPING, ChannelKind.BIT_FLIP,
                ChannelKind.BIT_PHASE_FLIP, ChannelKind.PHASE_FLIP):
        return 1.0
    if kind is ChannelKind.TWO_PAULI:
        return 1.0 - H(eta / 2) if eta < 2 / 3 else 1.0 - H(eta)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        r = math.sqrt(1 - eta + eta * eta)
        return H((1 - eta) / 2) - H((1 - r) / 2)
    raise ValueError(f"no closed form for {kind.value}")


def _closed_form_pair(kind: ChannelKind, eta: float):
    if kind in (ChannelKind.BIT_FLIP, ChannelKind.AMPLITUDE_DAMPING):
        return _X_PAIR
    if kind is ChannelKind.BIT_PHASE_FLIP:
        # sigma_y eigenstates (|0> +- i|1>)/sqrt(2)
        return _Y_PAIR
    if kind is ChannelKind.TWO_PAULI:
        return _X_PAIR if eta < 2 / 3 else _Z_PAIR
    return _Z_PAIR


def capacity_closed_form(kind, eta: float) -> CapacityResult:
    """Closed-form capacity and the two-state ensemble achieving it.

    For amplitude damping the formula is the optimum over a restricted
    two-state family, flagged ``restricted`` in the result.
    """
    if isinstance(kind, str):
        kind = ChannelKind.parse(kind)
    if kind in (ChannelKind.SPLAYING, ChannelKind.CUSTOM):
        raise ValueError(f"no closed form for {kind.value}")
    eta = chn._check_eta(eta)
    value = closed_form_value(kind, eta)
    ens = Ensemble.from_bloch((0.5, 0.5), _closed_form_pair(kind, eta))
    flags = ("restricted",) if kind is ChannelKind.AMPLITUDE_DAMPING else ()
    params = RestrictedSearchParams(math.pi, 0.5) if kind is ChannelKind.AMPLITUDE_DAMPING else None
    return CapacityResult(value, ens, Method.CLOSED_FORM, params=params, flags=flags)


# -- per-state eigenvalue formulas -------------------------------------------

def _pair(r: float) -> tuple[float, float]:
    return 0.5 + 0.5 * r, 0.5 - 0.5 * r


def eigenvalue_formulas(kind, eta: float, angle: float):
    """Closed-form output spectra ``(alpha, beta)`` of the two signal states.

    ``angle`` is the polar angle theta of the first input for phase damping
    and two-Pauli (the partner sits at theta + pi), and the rotation angle of
    the second input for amplitude damping and splaying. Pairs are returned
    in descending order.
    """
    if isinstance(kind, str):
        kind = ChannelKind.parse(kind)
    s2 = math.sin(angle) ** 2
    if kind is ChannelKind.PHASE_DAMPING:
        mu = eta / 2
        a = _pair(math.sqrt(max(0.0, 1 - 4 * mu * (1 - mu) * s2)))
        return a, a
    if kind is ChannelKind.TWO_PAULI:
        a = _pair(math.sqrt(max(0.0, 1 - 4 * eta * (1 - eta) + eta * (2 - 3 * eta) * s2)))
        return a, a
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        a = _pair(math.sqrt(1 - eta + eta * eta))
        return a, a
    if kind is ChannelKind.SPLAYING:
        s = math.sin(angle)
        r = math.sqrt(max(0.0, 4 - 2 * s - 2 * s * s))
        return (5 / 6, 1 / 6), (0.5 + r / 6, 0.5 - r / 6)
    raise ValueError(f"no eigenvalue formula for {kind.value}")


def _rot_z(psi: float) -> np.ndarray:
    return np.array([math.cos(psi), -math.sin(psi), 0.0])


def _rot_y(psi: float) -> np.ndarray:
    return np.array([math.cos(psi), 0.0, -math.sin(psi)])


def formula_inputs(kind, angle: float, phi: float = 0.0) -> tuple[DensityMatrix, DensityMatrix]:
    """The two input states whose output spectra :func:`eigenvalue_formulas` describes."""
    if isinstance(kind, str):
        kind = ChannelKind.parse(kind)
    if kind in (ChannelKind.PHASE_DAMPING, ChannelKind.TWO_PAULI):
        def w(th):
            return (math.sin(th) * math.cos(phi), math.sin(th) * math.sin(phi), math.cos(th))
        return bloch_to_density(w(angle)), bloch_to_density(w(angle + math.pi))
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return bloch_to_density((1.0, 0.0, 0.0)), bloch_to_density(_rot_z(angle))
    if kind is ChannelKind.SPLAYING:
        return bloch_to_density((1.0, 0.0, 0.0)), bloch_to_density(_rot_y(angle))
    raise ValueError(f"no eigenvalue formula for {kind.value}")


# -- restricted scans ---------------------------------------------------------

@dataclass(frozen=True)
class ScanGrid:
    psi_points: int = 721
    tau_points: int = 101
    refine_tol: float = 1e-9


def _bloch_matrices(ws: np.ndarray) -> np.ndarray:
    x, y, z = ws[..., 0], ws[..., 1], ws[..., 2]
    out = np.empty(ws.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = 0.5 * (1 + z)
    out[..., 1, 1] = 0.5 * (1 - z)
    out[..., 0, 1] = 0.5 * (x - 1j * y)
    out[..., 1, 0] = 0.5 * (x + 1j * y)
    return out


def _entropy(ms: np.ndarray) -> np.ndarray:
    return entropy_batch(eigenvalues_batch(ms))


class _PairObjective:
    """chi of {(1 - tau): E(rho1), tau: E(rho2(psi))} for a fixed first input."""

    def __init__(self, ch: QuantumChannel, rotate):
        self.ch = ch
        self.rotate = rotate
        self.out1 = chn.apply_batch(ch, _bloch_matrices(np.array([1.0, 0.0, 0.0])))
        self.s1 = float(_entropy(self.out1))

    def outputs(self, psi: np.ndarray) -> np.ndarray:
        ws = np.stack([self.rotate(p) for p in np.atleast_1d(psi)])
        return chn.apply_batch(self.ch, _bloch_matrices(ws))

    def grid(self, psis: np.ndarray, taus: np.ndarray) -> np.ndarray:
        out2 = self.outputs(psis)
        s2 = _entropy(out2)
        t = taus[None, :, None, None]
        mix = (1 - t) * self.out1 + t * out2[:, None]
        return _entropy(mix) - (1 - taus[None, :]) * self.s1 - taus[None, :] * s2[:, None]

    def __call__(self, psi: float, tau: float) -> float:
        return float(self.grid(np.array([psi]), np.array([tau]))[0, 0])


def _grid_argmax(values: np.ndarray) -> tuple[int, ...]:
    # smallest psi, then smallest tau, among values within 1e-12 of the max
    flat = values.ravel()
    idx = int(np.nonzero(flat >= flat.max() - 1e-12)[0][0])
    return np.unravel_index(idx, values.shape)


def _restricted_ensemble(obj: _PairObjective, psi: float, tau: float) -> Ensemble:
    return Ensemble.from_bloch((1 - tau, tau), ((1.0, 0.0, 0.0), obj.rotate(psi)))


def amplitude_pair_outputs(eta: float, psi: float) -> tuple[DensityMatrix, DensityMatrix]:
    ch = chn.make_channel(ChannelKind.AMPLITUDE_DAMPING, eta)
    r1, r2 = formula_inputs(ChannelKind.AMPLITUDE_DAMPING, psi)
    return chn.apply(ch, r1), chn.apply(ch, r2)


def capacity_amplitude_scan(eta: float, grid: ScanGrid | None = None) -> CapacityResult:
    """Maximize chi over (psi, tau) for amplitude damping.

    The first input is the equatorial state w = (1, 0, 0); the second is its
    rotation by psi about z, with prior tau. The mixed output is formed as
    the literal convex combination of the two output matrices.
    """
    grid = grid or ScanGrid()
    eta = chn._check_eta(eta)
    if grid.psi_points < 8 or grid.tau_points < 3:
        raise ValueError("scan grid too coarse")
    ch = chn.make_channel(ChannelKind.AMPLITUDE_DAMPING, eta)
    obj = _PairObjective(ch, _rot_z)
    psis = np.linspace(0.0, TWO_PI, grid.psi_points, endpoint=False)
    taus = np.linspace(0.0, 1.0, grid.tau_points)
    values = obj.grid(psis, taus)
    i, j = _grid_argmax(values)
    psi, tau, best = psis[i], taus[j], values[i, j]
    dpsi, dtau = psis[1] - psis[0], taus[1] - taus[0]

    if values.max() - values.min() > 1e-12:
        for _ in range(50):
            p_new, v = golden_section_max(lambda p: obj(p, tau), psi - dpsi, psi + dpsi, grid.refine_tol)
            t_new, v = golden_section_max(lambda t: obj(p_new, t), max(0.0, tau - dtau),
                                          min(1.0, tau + dtau), grid.refine_tol)
            moved = max(abs(p_new - psi), abs(t_new - tau))
            if v >= best:
                psi, tau, best = p_new, t_new, v
            if moved < grid.refine_tol:
                break

    params = RestrictedSearchParams(psi, tau)
    ens = _restricted_ensemble(obj, params.psi, params.tau)
    return CapacityResult(float(best), ens, Method.RESTRICTED_SCAN, params=params,
                          details={"grid_points": grid.psi_points * grid.tau_points})


def splaying_pair_chi(psi: float) -> float:
    """chi of the equal-prior splaying pair with second input rotated by psi about y."""
    obj = _PairObjective(chn.make_channel(ChannelKind.SPLAYING), _rot_y)
    return obj(psi, 0.5)


def capacity_splaying_scan(grid: ScanGrid | None = None) -> CapacityResult:
    """Maximize chi over the rotation angle of the second splaying input.

    Priors are equal. ``details`` carries the orthogonal-input value at
    psi = pi for comparison and whether the maximum beats it.
    """
    grid = grid or ScanGrid()
    if grid.psi_points < 8:
        raise ValueError("degenerate grid: need at least 8 psi points")
    obj = _PairObjective(chn.make_channel(ChannelKind.SPLAYING), _rot_y)
    psis = np.linspace(0.0, TWO_PI, grid.psi_points, endpoint=False)
    values = obj.grid(psis, np.array([0.5]))[:, 0]
    (i,) = _grid_argmax(values)
    step = psis[1] - psis[0]
    psi, best = golden_section_max(lambda p: obj(p, 0.5), psis[i] - step, psis[i] + step, grid.refine_tol)
    if best < values[i]:
        psi, best = psis[i], values[i]
    orth = obj(math.pi, 0.5)
    params = RestrictedSearchParams(psi, 0.5)
    ens = _restricted_ensemble(obj, params.psi, 0.5)
    details = {
        "orthogonal_psi": math.pi,
        "orthogonal_value": orth,
        "exceeds_orthogonal": bool(best > orth),
    }
    return CapacityResult(float(best), ens, Method.RESTRICTED_SCAN, params=params, details=details)
