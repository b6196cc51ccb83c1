"""Entanglement bounds on collective-spin QFI and depth certification.

Bound families
--------------
* separable states:      sum_l F_Q <= 2N   and   F_Q[J_l] <= N
* any state:             sum_l F_Q <= N(N+2)
* k-producible states:   F_Q[J_l] <= n k^2 + (N - n k)^2,  n = floor(N/k),
                         sum_l F_Q <= n k (k+2) + r (r+2)  with r = N - n k,
                         where a single leftover qubit (r = 1) tightens the
                         tail term to 2
* biseparable states:    F_Q[J_l] <= (N-1)^2 + 1,  sum_l F_Q <= N^2 + 1
* >= M unentangled:      sum_l F_Q <= M + (N-M)(N-M+2)
* variance floor:        separable states keep sum_l (Delta J_l)^2 >= N/2,
                         so dropping below the floor flags entanglement

Violating a k-producible bound certifies (k+1)-particle entanglement; the
depth ladder walks k upward and reports 1 + the largest violated k. The
spectral forms replace the axis values with the trace and largest eigenvalue
of the QFI matrix, which makes them invariant under collective single-qubit
rotations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import ValidationError
from .qfi import QfiMatrix, qfi_matrix, variance
from .collective import collective_all
from .states import QuantumState

TOL_VIOLATION = 1e-9


@dataclass(frozen=True)
class CriterionReport:
    """One bound evaluated against one state.

    direction is "above" when exceeding the bound signals the violation and
    "below" for floor-type criteria; margin is oriented so that
    violated == (margin > tol) either way.
    """

    criterion_id: str
    bound: float
    value: float
    margin: float
    violated: bool
    implication: Optional[str] = None
    direction: str = "above"


@dataclass(frozen=True)
class DepthCertificate:
    depth_lower_bound: int
    witnessing_criterion: str
    witness_value: float


def _report(criterion_id: str, bound: float, value: float, implication: Optional[str],
            tol: float, direction: str = "above") -> CriterionReport:
    margin = (value - bound) if direction == "above" else (bound - value)
    violated = margin > tol
    return CriterionReport(
        criterion_id=criterion_id,
        bound=float(bound),
        value=float(value),
        margin=float(margin),
        violated=violated,
        implication=implication if violated else None,
        direction=direction,
    )


def _check_n(n_qubits: int) -> int:
    if n_qubits < 1:
        raise ValidationError("n_qubits must be positive")
    return int(n_qubits)


def bound_separable_sum(n_qubits: int) -> float:
    return 2.0 * _check_n(n_qubits)


def bound_separable_single(n_qubits: int) -> float:
    return float(_check_n(n_qubits))


def bound_max_sum(n_qubits: int) -> float:
    """Ceiling on the triple sum for arbitrary states."""
    n = _check_n(n_qubits)
    return float(n * (n + 2))


def bound_kprod_single(n_qubits: int, k: int) -> float:
    n = _check_n(n_qubits)
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} out of range 1..{n}")
    blocks = n // k
    rem = n - blocks * k
    return float(blocks * k * k + rem * rem)


def bound_kprod_sum(n_qubits: int, k: int) -> float:
    n = _check_n(n_qubits)
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} out of range 1..{n}")
    blocks = n // k
    rem = n - blocks * k
    tail = 2.0 if rem == 1 else float(rem * (rem + 2))
    return float(blocks * k * (k + 2)) + tail


def bounds_biseparable(n_qubits: int) -> Tuple[float, float]:
    """(per-component bound, sum bound) for biseparable states."""
    n = _check_n(n_qubits)
    if n < 2:
        raise ValidationError("biseparable bounds need n_qubits >= 2")
    return float((n - 1) ** 2 + 1), float(n * n + 1)


def bound_unentangled(n_qubits: int, m_unentangled: int) -> float:
    """Sum bound for states with at least M unentangled particles."""
    n = _check_n(n_qubits)
    m = int(m_unentangled)
    if not 0 <= m <= n:
        raise ValidationError(f"M={m} out of range 0..{n}")
    return float(m + (n - m) * (n - m + 2))


def variance_criterion(state: QuantumState, tol: float = TOL_VIOLATION) -> CriterionReport:
    """Flag entanglement when the collective variance sum drops below N/2."""
    total = sum(variance(state, j) for j in collective_all(state.n_qubits))
    return _report("variance_floor", state.n_qubits / 2.0, total,
                   "entangled", tol, direction="below")


def spectral_criteria(qmat: QfiMatrix, n_qubits: int, k: int,
                      tol: float = TOL_VIOLATION) -> List[CriterionReport]:
    """Rotation-invariant forms: trace and largest eigenvalue of the matrix."""
    n = _check_n(n_qubits)
    tr = qmat.trace
    top = float(qmat.eigenvalues[-1])
    if k == n - 1:
        implication = "genuine_multipartite"
    else:
        implication = f"not_{k}_producible"
    return [
        _report("spectral_trace_separable", bound_separable_sum(n), tr, "entangled", tol),
        _report("spectral_max_separable", bound_separable_single(n), top, "entangled", tol),
        _report(f"spectral_trace_kprod_k{k}", bound_kprod_sum(n, k), tr, implication, tol),
        _report(f"spectral_max_kprod_k{k}", bound_kprod_single(n, k), top, implication, tol),
    ]


def depth_lower_bound(state: QuantumState, tol: float = TOL_VIOLATION,
                      qmat: Optional[QfiMatrix] = None) -> DepthCertificate:
    """Certified entanglement depth from the k-producibility ladder.

    Uses the rotation-invariant trace and max-eigenvalue forms. The k=1 sum
    bound is the separable value 2N, which is tighter than the k-producible
    formula evaluated at k=1.
    """
    n = state.n_qubits
    if qmat is None:
        qmat = qfi_matrix(state)
    tr = qmat.trace
    top = float(qmat.eigenvalues[-1])
    best_k = 0
    witness = ("none", 0.0)
    for k in range(1, n):
        sum_bound = bound_separable_sum(n) if k == 1 else bound_kprod_sum(n, k)
        single_bound = bound_kprod_single(n, k)
        sum_hit = tr - sum_bound > tol
        single_hit = top - single_bound > tol
        if sum_hit or single_hit:
            best_k = k
            # prefer the larger margin when both forms fire
            if single_hit and (not sum_hit or top - single_bound >= tr - sum_bound):
                witness = (f"spectral_max_kprod_k{k}", top)
            else:
                witness = (f"spectral_trace_kprod_k{k}" if k > 1 else "spectral_trace_separable", tr)
    return DepthCertificate(depth_lower_bound=best_k + 1,
                            witnessing_criterion=witness[0],
                            witness_value=witness[1])


def evaluate_all(state: QuantumState, tol: float = TOL_VIOLATION,
                 qmat: Optional[QfiMatrix] = None
                 ) -> Tuple[List[CriterionReport], DepthCertificate]:
    """Every bound, in a deterministic order, plus the depth certificate."""
    n = state.n_qubits
    if qmat is None:
        qmat = qfi_matrix(state)
    triple = qmat.fisher_triple
    total = float(triple.sum())
    peak = float(triple.max())

    reports: List[CriterionReport] = [
        _report("separable_sum", bound_separable_sum(n), total, "entangled", tol),
        _report("separable_single", bound_separable_single(n), peak, "entangled", tol),
        _report("sum_ceiling", bound_max_sum(n), total, None, tol),
    ]
    for k in range(2, n):
        implication = f"not_{k}_producible"
        reports.append(_report(f"kprod_single_k{k}", bound_kprod_single(n, k),
                               peak, implication, tol))
        reports.append(_report(f"kprod_sum_k{k}", bound_kprod_sum(n, k),
                               total, implication, tol))
    if n >= 2:
        single_b, sum_b = bounds_biseparable(n)
        reports.append(_report("biseparable_single", single_b, peak,
                               "genuine_multipartite", tol))
        reports.append(_report("biseparable_sum", sum_b, total,
                               "genuine_multipartite", tol))
    for m in range(1, n + 1):
        reports.append(_report(f"unentangled_m{m}", bound_unentangled(n, m),
                               total, f"fewer_than_{m}_unentangled", tol))
    reports.append(variance_criterion(state, tol))
    top = float(qmat.eigenvalues[-1])
    reports.append(_report("spectral_trace_separable", bound_separable_sum(n),
                           qmat.trace, "entangled", tol))
    reports.append(_report("spectral_max_separable", bound_separable_single(n),
                           top, "entangled", tol))
    for k in range(2, n):
        reports.extend(spectral_criteria(qmat, n, k, tol)[2:])
    return reports, depth_lower_bound(state, tol, qmat)


def unentangled_summary(reports: List[CriterionReport]) -> Optional[dict]:
    """Smallest and largest violated M over the unentangled-particle sweep.

    The largest violated M gives the literal "fewer than M unentangled"
    reading; because the bound decreases with M the smallest violated M is
    the informative one, so both are reported.
    """
    violated = []
    for rep in reports:
        if rep.criterion_id.startswith("unentangled_m") and rep.violated:
            violated.append(int(rep.criterion_id[len("unentangled_m"):]))
    if not violated:
        return None
    return {"smallest_violated_m": min(violated), "largest_violated_m": max(violated)}
