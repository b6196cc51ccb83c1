"""Quantum Fisher information for collective spin operators.

The central object is the 3x3 matrix M with F_Q[rho, J_n] = n^T M n for any
unit direction n. It is assembled from the spectral decomposition of rho:

    M_ij = 2 sum_{l,m} (lam_l + lam_m) ((lam_l - lam_m)/(lam_l + lam_m))^2
               <l|J_i|m><m|J_j|l>

restricted to eigenvalue pairs with lam_l + lam_m above a rank cutoff.
Pairs where both eigenvalues vanish contribute nothing, and pairs with one
vanishing eigenvalue enter through a completeness identity, so the whole sum
only needs the support eigenvectors:

    M_ij = sum_{l,m in supp} w_lm A_i[l,m] conj(A_j[l,m])
           + 4 Re( sum_l lam_l (<l|J_i J_j|l> - [A_i A_j]_ll) )

with A_i = V^dag J_i V on the support and w_lm = 2 (lam_l - lam_m)^2 /
(lam_l + lam_m). The second term drops out for full-rank states.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collective import check_direction, collective_all
from .errors import NumericalError, ValidationError
from .matcore import require_hermitian
from .states import QuantumState

EPS_RANK = 1e-12
CLAMP = 1e-10


def _clamp_nonneg(x: float, tol: float = CLAMP) -> float:
    """Round tiny negative residues up to zero; reject real negativity."""
    if x < -tol:
        raise NumericalError(f"expected a nonnegative quantity, got {x!r}")
    return 0.0 if x < 0.0 else x


@dataclass(frozen=True)
class QfiMatrix:
    """Symmetric 3x3 QFI matrix for the collective spin components."""

    mat: np.ndarray
    imag_residue: float = 0.0

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        asym = float(np.max(np.abs(mat - mat.T)))
        if asym > 1e-10:
            raise NumericalError(f"QFI matrix asymmetry {asym:.3e} exceeds 1e-10")
        mat = (mat + mat.T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def fisher_triple(self) -> np.ndarray:
        return np.diag(self.mat).copy()

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat))

    def direction(self, n) -> float:
        n = check_direction(n)
        return _clamp_nonneg(float(n @ self.mat @ n))


def qfi_matrix(state: QuantumState, eps_rank: float = EPS_RANK) -> QfiMatrix:
    """Assemble the collective-spin QFI matrix of a state."""
    lam, vs = state.support(eps_rank)
    ops = collective_all(state.n_qubits)
    b = [j @ vs for j in ops]
    a = [vs.conj().T @ bi for bi in b]

    pair_sum = lam[:, None] + lam[None, :]
    pair_diff = lam[:, None] - lam[None, :]
    w = 2.0 * pair_diff * pair_diff / pair_sum

    full_rank = vs.shape[1] == state.dim
    out = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(i, 3):
            val = np.sum(w * a[i] * a[j].conj())
            if not full_rank:
                cross = np.einsum("dk,dk->k", b[i].conj(), b[j])
                inside = np.einsum("dk,dk->k", a[i].conj(), a[j])
                val = val + 4.0 * (lam @ (cross - inside)).real
            out[i, j] = val
            out[j, i] = np.conj(val)
    residue = float(np.max(np.abs(out.imag)))
    if residue > 1e-10:
        raise NumericalError(f"QFI matrix imaginary residue {residue:.3e} exceeds 1e-10")
    mat = out.real.copy()
    for i in range(3):
        mat[i, i] = _clamp_nonneg(mat[i, i])
    return QfiMatrix(mat=mat, imag_residue=residue)


def fisher_triple(state: QuantumState, eps_rank: float = EPS_RANK) -> np.ndarray:
    """(F_Q[rho, J_x], F_Q[rho, J_y], F_Q[rho, J_z])."""
    triple = qfi_matrix(state, eps_rank).fisher_triple
    n2 = float(state.n_qubits ** 2)
    if np.any(triple > n2 + 1e-6):
        raise NumericalError(f"Fisher component exceeds N^2 = {n2}: {triple}")
    return triple


def qfi_direction(state: QuantumState, n, eps_rank: float = EPS_RANK) -> float:
    return qfi_matrix(state, eps_rank).direction(n)


def variance(state: QuantumState, a) -> float:
    """<a^2> - <a>^2 for a Hermitian observable."""
    a = require_hermitian(a)
    if a.shape[0] != state.dim:
        raise ValidationError(f"operator dim {a.shape[0]} does not match state dim {state.dim}")
    mean = state.expectation(a).real
    second = state.expectation(a @ a).real
    return _clamp_nonneg(second - mean * mean)


def average_qfi(state: QuantumState, eps_rank: float = EPS_RANK) -> float:
    """QFI averaged over uniformly random directions: trace of the matrix / 3."""
    return qfi_matrix(state, eps_rank).trace / 3.0


def skew_information(state: QuantumState, a, eps_rank: float = EPS_RANK) -> float:
    """<a^2> - trace(sqrt(rho) a sqrt(rho) a), from the spectral decomposition."""
    a = require_hermitian(a)
    if a.shape[0] != state.dim:
        raise ValidationError(f"operator dim {a.shape[0]} does not match state dim {state.dim}")
    lam, vs = state.support(eps_rank)
    asup = vs.conj().T @ a @ vs
    root = np.sqrt(lam)
    cross = float(np.einsum("l,m,lm,ml->", root, root, asup, asup).real)
    second = state.expectation(a @ a).real
    return _clamp_nonneg(second - cross)
