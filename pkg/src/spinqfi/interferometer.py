"""Phase evolution, classical Fisher information and the Cramer-Rao check.

The phase map is rho -> exp(-i theta J_n) rho exp(+i theta J_n). Classical
Fisher information for a projective measurement is computed by central finite
differences of the outcome probabilities; outcomes whose probability falls
below a floor are excluded (their derivative contribution is dropped and the
count is reported in the diagnostics).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .collective import check_direction, j_direction, pauli_at
from .errors import ValidationError
from .matcore import eigh, herm_exp, kron_all
from .qfi import qfi_direction
from .states import QuantumState, _pure_state

FD_STEP = 1e-4
P_FLOOR = 1e-12


@dataclass(frozen=True)
class PhaseSetting:
    theta: float
    direction: tuple

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValidationError("theta must be finite")
        object.__setattr__(self, "direction", tuple(check_direction(self.direction)))


class Measurement:
    """Complete projective measurement: projectors summing to the identity."""

    def __init__(self, projectors: Sequence[np.ndarray]):
        projs = [np.asarray(p, dtype=complex) for p in projectors]
        if not projs:
            raise ValidationError("measurement needs at least one projector")
        dim = projs[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for p in projs:
            if p.shape != (dim, dim):
                raise ValidationError("projectors must share one square shape")
            if np.max(np.abs(p @ p - p)) > 1e-9:
                raise ValidationError("projector fails P @ P == P within 1e-9")
            total += p
        if np.max(np.abs(total - np.eye(dim))) > 1e-9:
            raise ValidationError("projectors do not sum to the identity within 1e-9")
        self.projectors = projs
        self.dim = dim

    @classmethod
    def from_observable(cls, a, tol: float = 1e-8) -> "Measurement":
        """Projectors onto eigenspaces of a Hermitian observable.

        Eigenvalues within tol of each other share one projector.
        """
        dec = eigh(a)
        projs: List[np.ndarray] = []
        start = 0
        for i in range(1, len(dec.values) + 1):
            if i == len(dec.values) or dec.values[i] - dec.values[start] > tol:
                block = dec.vectors[:, start:i]
                projs.append(block @ block.conj().T)
                start = i
        return cls(projs)

    @classmethod
    def parity(cls, axis: str, n_qubits: int) -> "Measurement":
        """Two projectors, onto the +1 and -1 eigenspaces of sigma_axis^(x N)."""
        word = kron_all([pauli_at(axis, 1, 1) for _ in range(n_qubits)])
        return cls.from_observable(word)

    @classmethod
    def computational(cls, n_qubits: int) -> "Measurement":
        dim = 2 ** n_qubits
        eye = np.eye(dim, dtype=complex)
        return cls([np.outer(eye[:, i], eye[:, i].conj()) for i in range(dim)])


def evolve(state: QuantumState, setting: PhaseSetting) -> QuantumState:
    """Conjugate by exp(-i theta J_n); spectrum-preserving."""
    jn = j_direction(setting.direction, state.n_qubits)
    u = herm_exp(jn, -setting.theta)
    if state.is_pure:
        return _pure_state(u @ state.vector, state.n_qubits)
    rho = u @ state.rho @ u.conj().T
    return QuantumState((rho + rho.conj().T) / 2.0, state.n_qubits)


def _probabilities(state: QuantumState, setting: PhaseSetting, meas: Measurement,
                   theta: float) -> np.ndarray:
    shifted = PhaseSetting(theta, setting.direction)
    out = evolve(state, shifted)
    return np.array([float(np.trace(p @ out.rho).real) for p in meas.projectors])


def classical_fisher_report(state: QuantumState, setting: PhaseSetting,
                            meas: Measurement, h: float = FD_STEP,
                            p_floor: float = P_FLOOR) -> dict:
    """Classical Fisher information with finite-difference diagnostics."""
    if meas.dim != state.dim:
        raise ValidationError("measurement dimension does not match the state")
    theta = setting.theta
    p_mid = _probabilities(state, setting, meas, theta)
    p_lo = _probabilities(state, setting, meas, theta - h)
    p_hi = _probabilities(state, setting, meas, theta + h)
    dp = (p_hi - p_lo) / (2.0 * h)
    keep = p_mid >= p_floor
    value = float(np.sum(dp[keep] ** 2 / p_mid[keep]))
    return {
        "value": value,
        "excluded_outcomes": int(np.sum(~keep)),
        "probabilities": p_mid,
        "step": h,
    }


def classical_fisher(state: QuantumState, setting: PhaseSetting, meas: Measurement,
                     h: float = FD_STEP, p_floor: float = P_FLOOR) -> float:
    return classical_fisher_report(state, setting, meas, h, p_floor)["value"]


def crb_bound(state: QuantumState, n, tol: float = 1e-9) -> float:
    """Phase-deviation lower bound 1/sqrt(F_Q); inf when the state is
    insensitive along n."""
    fq = qfi_direction(state, n)
    if fq <= tol:
        return math.inf
    return 1.0 / math.sqrt(fq)
