"""Single-qubit Paulis embedded in the register and collective spin operators.

Site 1 is the most significant tensor factor throughout the package, which
fixes bitstring conventions for the Dicke constructors and the file format.
Collective operators are memoized per (axis, N); cached arrays are returned
read-only and must not be mutated by callers.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .matcore import DIM_CAP, check_dim

AXES = ("x", "y", "z")

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY_2 = np.eye(2, dtype=complex)


def check_axis(label: str) -> str:
    if label not in AXES:
        raise ValidationError(f"axis must be one of {AXES}, got {label!r}")
    return label


def check_direction(n) -> np.ndarray:
    try:
        n = np.asarray(n, dtype=float).reshape(3)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"direction must be a 3-vector: {exc}") from exc
    if not np.all(np.isfinite(n)):
        raise ValidationError("direction entries must be finite")
    nrm = float(np.linalg.norm(n))
    if abs(nrm - 1.0) > 1e-12:
        raise ValidationError(f"direction must be unit norm, got |n| = {nrm!r}")
    return n


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def pauli_at(axis: str, site: int, n_qubits: int, cap: int = DIM_CAP) -> np.ndarray:
    """I x ... x sigma_axis x ... x I with the Pauli at 1-based position `site`."""
    check_axis(axis)
    if n_qubits < 1:
        raise ValidationError("n_qubits must be positive")
    if not 1 <= site <= n_qubits:
        raise ValidationError(f"site {site} out of range 1..{n_qubits}")
    check_dim(2 ** n_qubits, cap)
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n_qubits - site), dtype=complex)
    return np.kron(left, np.kron(SIGMA[axis], right))


@lru_cache(maxsize=24)
def _collective_cached(axis: str, n_qubits: int) -> np.ndarray:
    dim = 2 ** n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for site in range(1, n_qubits + 1):
        total += pauli_at(axis, site, n_qubits)
    return _readonly(total / 2.0)


def collective_j(axis: str, n_qubits: int, cap: int = DIM_CAP) -> np.ndarray:
    """J_axis = (1/2) sum_k sigma_axis^(k). Returned array is read-only."""
    check_axis(axis)
    if n_qubits < 1:
        raise ValidationError("n_qubits must be positive")
    check_dim(2 ** n_qubits, cap)
    return _collective_cached(axis, n_qubits)


def collective_all(n_qubits: int, cap: int = DIM_CAP):
    return tuple(collective_j(l, n_qubits, cap) for l in AXES)


def j_direction(n, n_qubits: int, cap: int = DIM_CAP) -> np.ndarray:
    n = check_direction(n)
    ops = collective_all(n_qubits, cap)
    return n[0] * ops[0] + n[1] * ops[1] + n[2] * ops[2]
