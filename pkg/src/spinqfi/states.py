"""State families and the declarative StateSpec they serialize to.

All constructors return a QuantumState: an immutable density matrix with a
lazily computed spectral decomposition. Pure states carry their state vector
so the decomposition can be completed analytically (rank one) instead of
running a full eigendecomposition of a 2^N matrix.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import SpecError, ValidationError
from .matcore import (DIM_CAP, SpectralDecomposition, check_dim, eigh,
                      hermiticity_residue, require_hermitian)

# Per-qubit unitaries taking sigma_z eigenvectors to sigma_x / sigma_y ones.
# Any conjugating choice works; correctness is pinned by the coordinate
# permutation tests, not by these entries.
BASIS_ROTATION = {
    "x": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
}


KNOWN_KINDS = frozenset({
    "ghz", "dicke", "product_bloch", "even_parity", "dicke_superposition",
    "excited_dicke", "completely_mixed", "white_noise_mix", "raw_matrix",
})


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a state family, serializable to JSON."""

    kind: str
    n_qubits: Optional[int] = None
    basis: str = "z"
    m: Optional[int] = None
    c: Optional[tuple] = None
    coeffs: Optional[tuple] = None
    alpha: Optional[tuple] = None
    p: Optional[float] = None
    inner: Optional["StateSpec"] = None
    matrix: Optional[tuple] = None

    def to_dict(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.n_qubits is not None:
            doc["n_qubits"] = int(self.n_qubits)
        if self.kind in ("ghz", "dicke", "excited_dicke"):
            doc["basis"] = self.basis
        if self.m is not None:
            doc["m"] = int(self.m)
        if self.c is not None:
            doc["c"] = [float(v) for v in self.c]
        if self.coeffs is not None:
            doc["coeffs"] = [[float(v.real), float(v.imag)] for v in self.coeffs]
        if self.alpha is not None:
            doc["alpha"] = [[float(v.real), float(v.imag)] for v in self.alpha]
        if self.p is not None:
            doc["p"] = float(self.p)
        if self.inner is not None:
            doc["inner"] = self.inner.to_dict()
        if self.matrix is not None:
            doc["matrix"] = [[[float(z.real), float(z.imag)] for z in row]
                             for row in self.matrix]
        return doc

    @staticmethod
    def from_dict(doc) -> "StateSpec":
        if not isinstance(doc, dict):
            raise SpecError(f"state spec must be an object, got {type(doc).__name__}")
        kind = doc.get("kind")
        if not isinstance(kind, str):
            raise SpecError("state spec is missing a string 'kind' field")
        if kind not in KNOWN_KINDS:
            raise SpecError(f"unknown state kind {kind!r}; expected one of "
                            f"{sorted(KNOWN_KINDS)}")
        known = {"kind", "n_qubits", "basis", "m", "c", "coeffs", "alpha", "p",
                 "inner", "matrix"}
        unknown = set(doc) - known
        if unknown:
            raise SpecError(f"unknown spec fields: {sorted(unknown)}")

        def _complex_list(key):
            raw = doc.get(key)
            if raw is None:
                return None
            try:
                return tuple(complex(re, im) for re, im in raw)
            except (TypeError, ValueError) as exc:
                raise SpecError(f"field {key!r} must be a list of [re, im] pairs") from exc

        matrix = None
        if doc.get("matrix") is not None:
            try:
                matrix = tuple(tuple(complex(re, im) for re, im in row)
                               for row in doc["matrix"])
            except (TypeError, ValueError) as exc:
                raise SpecError("field 'matrix' must be rows of [re, im] pairs") from exc
        inner = StateSpec.from_dict(doc["inner"]) if doc.get("inner") is not None else None
        try:
            return StateSpec(
                kind=kind,
                n_qubits=None if doc.get("n_qubits") is None else int(doc["n_qubits"]),
                basis=doc.get("basis", "z"),
                m=None if doc.get("m") is None else int(doc["m"]),
                c=None if doc.get("c") is None else tuple(float(v) for v in doc["c"]),
                coeffs=_complex_list("coeffs"),
                alpha=_complex_list("alpha"),
                p=None if doc.get("p") is None else float(doc["p"]),
                inner=inner,
                matrix=matrix,
            )
        except (TypeError, ValueError) as exc:
            raise SpecError(f"malformed state spec: {exc}") from exc


class QuantumState:
    """N-qubit density matrix with cached spectral decomposition.

    Instances are immutable; the spectrum is computed at most once and the
    computation is serialized by a per-instance lock.
    """

    __slots__ = ("n_qubits", "rho", "spec", "herm_residue", "_vector",
                 "_spectrum", "_spectrum_fn", "_lock")

    def __init__(self, rho: np.ndarray, n_qubits: int, *, vector=None,
                 spectrum=None, spectrum_fn=None, spec=None, herm_residue=0.0):
        self.n_qubits = int(n_qubits)
        rho = np.asarray(rho, dtype=complex)
        rho.setflags(write=False)
        self.rho = rho
        self.spec = spec
        self.herm_residue = float(herm_residue)
        self._vector = vector
        self._spectrum = spectrum
        self._spectrum_fn = spectrum_fn
        self._lock = threading.Lock()

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def is_pure(self) -> bool:
        return self._vector is not None

    @property
    def vector(self) -> Optional[np.ndarray]:
        return self._vector

    @property
    def spectrum(self) -> SpectralDecomposition:
        with self._lock:
            if self._spectrum is None:
                if self._vector is not None:
                    self._spectrum = _pure_spectrum(self._vector)
                elif self._spectrum_fn is not None:
                    self._spectrum = self._spectrum_fn()
                else:
                    self._spectrum = eigh(self.rho)
                self._spectrum_fn = None
            return self._spectrum

    def support(self, eps: float = 1e-12):
        """Eigenvalues above eps and the matching eigenvector columns.

        Eigenvalues at or below eps are treated as exactly zero.
        """
        if self._vector is not None:
            return np.array([1.0]), self._vector.reshape(-1, 1)
        dec = self.spectrum
        keep = dec.values > eps
        return dec.values[keep], dec.vectors[:, keep]

    def expectation(self, a: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ a))


def _pure_spectrum(psi: np.ndarray) -> SpectralDecomposition:
    # Householder completion: an orthonormal basis whose last column is psi,
    # giving the exact rank-one decomposition without an eigensolve.
    d = psi.shape[0]
    k = int(np.argmax(np.abs(psi)))
    phase = psi[k] / abs(psi[k])
    v = psi.astype(complex).copy()
    v[k] += phase
    basis = np.eye(d, dtype=complex) - 2.0 * np.outer(v, v.conj()) / (v.conj() @ v).real
    order = list(range(d))
    order.pop(k)
    order.append(k)
    basis = basis[:, order]
    values = np.zeros(d)
    values[-1] = 1.0
    return SpectralDecomposition(values=values, vectors=basis)


def _pure_state(psi: np.ndarray, n_qubits: int, spec=None) -> QuantumState:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = float(np.linalg.norm(psi))
    if nrm <= 0:
        raise ValidationError("state vector has zero norm")
    psi = psi / nrm
    psi.setflags(write=False)
    return QuantumState(np.outer(psi, psi.conj()), n_qubits, vector=psi, spec=spec)


def apply_local_unitary(psi: np.ndarray, u: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply the same 2x2 unitary to every qubit of a state vector."""
    t = psi.reshape((2,) * n_qubits)
    for axis in range(n_qubits):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def _rotate_vector(psi: np.ndarray, basis: str, n_qubits: int) -> np.ndarray:
    if basis == "z":
        return psi
    if basis not in BASIS_ROTATION:
        raise ValidationError(f"basis must be one of ('x', 'y', 'z'), got {basis!r}")
    return apply_local_unitary(psi, BASIS_ROTATION[basis], n_qubits)


@lru_cache(maxsize=64)
def _dicke_vector(n_qubits: int, m: int, basis: str) -> np.ndarray:
    dim = 2 ** n_qubits
    v = np.zeros(dim, dtype=complex)
    for idx in range(dim):
        if idx.bit_count() == m:
            v[idx] = 1.0
    v /= math.sqrt(math.comb(n_qubits, m))
    v = _rotate_vector(v, basis, n_qubits)
    v.setflags(write=False)
    return v


def _check_n(n_qubits: int, cap: int) -> None:
    if n_qubits < 1:
        raise ValidationError("n_qubits must be positive")
    check_dim(2 ** n_qubits, cap)


def ghz(n_qubits: int, basis: str = "z", cap: int = DIM_CAP) -> QuantumState:
    """(|0...0> + |1...1>)/sqrt(2), optionally rotated into the x or y basis."""
    _check_n(n_qubits, cap)
    v = np.zeros(2 ** n_qubits, dtype=complex)
    v[0] = v[-1] = 1.0 / math.sqrt(2)
    v = _rotate_vector(v, basis, n_qubits)
    return _pure_state(v, n_qubits, spec=StateSpec("ghz", n_qubits, basis))


def dicke(n_qubits: int, m: int, basis: str = "z", cap: int = DIM_CAP) -> QuantumState:
    """Symmetric state with m excitations, equal weight on all placements."""
    _check_n(n_qubits, cap)
    if not 0 <= m <= n_qubits:
        raise ValidationError(f"excitation count m={m} out of range 0..{n_qubits}")
    if basis != "z" and basis not in BASIS_ROTATION:
        raise ValidationError(f"basis must be one of ('x', 'y', 'z'), got {basis!r}")
    v = _dicke_vector(n_qubits, m, basis)
    return _pure_state(v, n_qubits, spec=StateSpec("dicke", n_qubits, basis, m=m))


def product_bloch(c, n_qubits: int, cap: int = DIM_CAP) -> QuantumState:
    """Half the qubits polarized along +c, half along -c (N even).

    c is a real Bloch vector with sum of squares 1.
    """
    _check_n(n_qubits, cap)
    if n_qubits % 2 != 0:
        raise ValidationError("product_bloch requires an even number of qubits")
    c = np.asarray(c, dtype=float).reshape(3)
    if abs(float(c @ c) - 1.0) > 1e-10:
        raise ValidationError("Bloch coefficients must satisfy sum(c**2) == 1")
    b = np.array([[c[2], c[0] - 1j * c[1]], [c[0] + 1j * c[1], -c[2]]])
    dec = eigh(b)
    minus, plus = dec.vectors[:, 0], dec.vectors[:, 1]
    v = np.ones(1, dtype=complex)
    for _ in range(n_qubits // 2):
        v = np.kron(v, plus)
    for _ in range(n_qubits // 2):
        v = np.kron(v, minus)
    return _pure_state(v, n_qubits, spec=StateSpec("product_bloch", n_qubits, c=tuple(map(float, c))))


def even_parity_indices(n_qubits: int) -> tuple:
    """Excitation numbers carrying a free coefficient: {0,2,...,N/2-2} + {N/2}."""
    if n_qubits < 2 or n_qubits % 2 != 0:
        raise ValidationError("even_parity requires an even number of qubits")
    return tuple(range(0, n_qubits // 2 - 1, 2)) + (n_qubits // 2,)


def even_parity(coeffs: Sequence[complex], n_qubits: int, cap: int = DIM_CAP) -> QuantumState:
    """Superposition of mirrored Dicke pairs plus the balanced Dicke term.

    coeffs follows even_parity_indices(n_qubits); each index n < N/2 weights
    the normalized pair (|n excitations> + |N-n excitations|)/sqrt(2).
    """
    _check_n(n_qubits, cap)
    idx = even_parity_indices(n_qubits)
    coeffs = tuple(complex(v) for v in coeffs)
    if len(coeffs) != len(idx):
        raise ValidationError(f"expected {len(idx)} coefficients for indices {idx}, got {len(coeffs)}")
    total = sum(abs(v) ** 2 for v in coeffs)
    if abs(total - 1.0) > 1e-10:
        raise ValidationError("even_parity coefficients must have unit square sum")
    v = np.zeros(2 ** n_qubits, dtype=complex)
    half = n_qubits // 2
    for cn, n in zip(coeffs, idx):
        if n == half:
            v = v + cn * _dicke_vector(n_qubits, half, "z")
        else:
            pair = (_dicke_vector(n_qubits, n, "z")
                    + _dicke_vector(n_qubits, n_qubits - n, "z")) / math.sqrt(2)
            v = v + cn * pair
    return _pure_state(v, n_qubits, spec=StateSpec("even_parity", n_qubits, coeffs=coeffs))


def dicke_superposition(alpha, n_qubits: int, cap: int = DIM_CAP) -> QuantumState:
    """Complex combination of the balanced Dicke state along x, y and z.

    The three kets are not pairwise orthogonal, so the sum is renormalized
    explicitly. Requires N divisible by 4.
    """
    _check_n(n_qubits, cap)
    if n_qubits % 4 != 0:
        raise ValidationError("dicke_superposition requires N divisible by 4")
    alpha = np.asarray(alpha, dtype=complex).reshape(3)
    if np.all(alpha == 0):
        raise ValidationError("alpha must not be all zero")
    half = n_qubits // 2
    v = (alpha[0] * _dicke_vector(n_qubits, half, "x")
         + alpha[1] * _dicke_vector(n_qubits, half, "y")
         + alpha[2] * _dicke_vector(n_qubits, half, "z"))
    return _pure_state(v, n_qubits,
                       spec=StateSpec("dicke_superposition", n_qubits,
                                      alpha=tuple(complex(a) for a in alpha)))


def normalized_amplitudes(alpha, n_qubits: int) -> np.ndarray:
    """Amplitudes rescaled by the true vector norm of the superposition."""
    alpha = np.asarray(alpha, dtype=complex).reshape(3)
    half = n_qubits // 2
    kets = [_dicke_vector(n_qubits, half, b) for b in ("x", "y", "z")]
    gram = np.array([[kets[i].conj() @ kets[j] for j in range(3)] for i in range(3)])
    nrm2 = float((alpha.conj() @ gram @ alpha).real)
    return alpha / math.sqrt(nrm2)


def excited_dicke(n_qubits: int, basis: str = "z", cap: int = DIM_CAP) -> QuantumState:
    """One excited qubit tensored with an (N-1)-qubit Dicke state of N/2-1
    excitations; the biseparable extremal candidate. N even, N >= 4."""
    _check_n(n_qubits, cap)
    if n_qubits % 2 != 0 or n_qubits < 4:
        raise ValidationError("excited_dicke requires even n_qubits >= 4")
    one = np.array([0.0, 1.0], dtype=complex)
    v = np.kron(one, _dicke_vector(n_qubits - 1, n_qubits // 2 - 1, "z"))
    v = _rotate_vector(v, basis, n_qubits)
    return _pure_state(v, n_qubits, spec=StateSpec("excited_dicke", n_qubits, basis))


def completely_mixed(n_qubits: int, cap: int = DIM_CAP) -> QuantumState:
    _check_n(n_qubits, cap)
    dim = 2 ** n_qubits
    rho = np.eye(dim, dtype=complex) / dim
    spectrum = SpectralDecomposition(values=np.full(dim, 1.0 / dim),
                                     vectors=np.eye(dim, dtype=complex))
    return QuantumState(rho, n_qubits, spectrum=spectrum,
                        spec=StateSpec("completely_mixed", n_qubits))


def white_noise_mix(state: QuantumState, p: float) -> QuantumState:
    """p * state + (1 - p) * identity / 2^N."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"noise weight p={p} out of [0, 1]")
    dim = state.dim
    rho = p * state.rho + (1.0 - p) * np.eye(dim) / dim

    def _spectrum():
        inner = state.spectrum
        return SpectralDecomposition(values=p * inner.values + (1.0 - p) / dim,
                                     vectors=inner.vectors)

    spec = None
    if state.spec is not None:
        spec = StateSpec("white_noise_mix", state.n_qubits, p=float(p), inner=state.spec)
    return QuantumState(rho, state.n_qubits, spectrum_fn=_spectrum, spec=spec)


def mix(states: Sequence[QuantumState], weights) -> QuantumState:
    """Convex mixture of states on the same register."""
    weights = np.asarray(weights, dtype=float)
    if len(states) != len(weights) or len(states) == 0:
        raise ValidationError("mix needs matching, nonempty states and weights")
    if np.any(weights < -1e-12) or abs(float(weights.sum()) - 1.0) > 1e-10:
        raise ValidationError("mixture weights must be nonnegative and sum to 1")
    n = states[0].n_qubits
    if any(s.n_qubits != n for s in states):
        raise ValidationError("all mixture components must share n_qubits")
    rho = sum(w * s.rho for w, s in zip(weights, states))
    return QuantumState(np.asarray(rho), n)


def from_matrix(matrix, n_qubits: Optional[int] = None, cap: int = DIM_CAP) -> QuantumState:
    """Validate and wrap an explicit density matrix.

    Collects every failed check (shape, hermiticity, trace, positivity) into
    one error message.
    """
    rho = np.asarray(matrix, dtype=complex)
    problems = []
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density matrix must be square, got shape {rho.shape}")
    dim = rho.shape[0]
    inferred = int(round(math.log2(dim))) if dim > 0 else 0
    if 2 ** inferred != dim:
        problems.append(f"dimension {dim} is not a power of 2")
    if n_qubits is None:
        n_qubits = inferred
    elif 2 ** n_qubits != dim:
        problems.append(f"dimension {dim} does not match n_qubits={n_qubits}")
    if not np.all(np.isfinite(rho)):
        problems.append("entries must be finite")
    if problems:
        raise ValidationError("invalid density matrix: " + "; ".join(problems))
    check_dim(dim, cap)

    residue = hermiticity_residue(rho)
    if residue > 1e-10:
        problems.append(f"not Hermitian (max asymmetry {residue:.3e})")
    else:
        rho = (rho + rho.conj().T) / 2.0
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-10:
        problems.append(f"trace {tr!r} differs from 1 by more than 1e-10")
    spectrum = None
    if not problems:
        rho = rho / tr
        spectrum = eigh(rho)
        if spectrum.values[0] < -1e-10:
            problems.append(f"negative eigenvalue {spectrum.values[0]:.3e}")
    if problems:
        raise ValidationError("invalid density matrix: " + "; ".join(problems))
    spec = StateSpec("raw_matrix", n_qubits,
                     matrix=tuple(tuple(complex(z) for z in row) for row in rho))
    return QuantumState(rho, n_qubits, spectrum=spectrum, spec=spec,
                        herm_residue=residue)


def from_spec(spec: StateSpec, cap: int = DIM_CAP) -> QuantumState:
    """Construct the state a StateSpec describes."""
    kind = spec.kind
    need_n = kind != "white_noise_mix"
    if need_n and spec.n_qubits is None:
        raise ValidationError(f"spec kind {kind!r} requires n_qubits")
    if kind == "ghz":
        return ghz(spec.n_qubits, spec.basis, cap)
    if kind == "dicke":
        if spec.m is None:
            raise ValidationError("dicke spec requires excitation count m")
        return dicke(spec.n_qubits, spec.m, spec.basis, cap)
    if kind == "product_bloch":
        if spec.c is None:
            raise ValidationError("product_bloch spec requires Bloch coefficients c")
        return product_bloch(spec.c, spec.n_qubits, cap)
    if kind == "even_parity":
        if spec.coeffs is None:
            raise ValidationError("even_parity spec requires coeffs")
        return even_parity(spec.coeffs, spec.n_qubits, cap)
    if kind == "dicke_superposition":
        if spec.alpha is None:
            raise ValidationError("dicke_superposition spec requires alpha")
        return dicke_superposition(spec.alpha, spec.n_qubits, cap)
    if kind == "excited_dicke":
        return excited_dicke(spec.n_qubits, spec.basis, cap)
    if kind == "completely_mixed":
        return completely_mixed(spec.n_qubits, cap)
    if kind == "white_noise_mix":
        if spec.p is None or spec.inner is None:
            raise ValidationError("white_noise_mix spec requires p and inner")
        return white_noise_mix(from_spec(spec.inner, cap), spec.p)
    if kind == "raw_matrix":
        if spec.matrix is None:
            raise ValidationError("raw_matrix spec requires matrix")
        return from_matrix(spec.matrix, spec.n_qubits, cap)
    raise ValidationError(f"unknown state kind {kind!r}")
