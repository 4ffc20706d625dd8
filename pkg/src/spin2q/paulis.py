"""Two-qubit Pauli algebra: density matrices, Pauli transfer matrices, logs.

Conventions used throughout the package:

* Basis order of the two-qubit Hilbert space is ``|dd>, |du>, |ud>, |uu>``
  (qubit 1 is the left / most significant symbol, ``d`` = spin-down = |0>).
* ``Z|d> = +|d>``, so the blockade (even-parity) subspace is the ZZ = +1
  eigenspace.
* The 16 two-qubit Paulis are ordered lexicographically
  II, IX, IY, IZ, XI, XX, ..., ZZ.
* A Pauli transfer matrix (PTM) is the real 16 x 16 matrix
  ``M[i, j] = Tr(P_i L(P_j)) / 4`` for a channel ``L``; trace preservation
  means the first row is (1, 0, ..., 0).
* A state is carried either as a 4 x 4 density matrix or as its Pauli
  expectation vector ``r[j] = Tr(P_j rho)`` with ``r[0] = 1``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm, logm

__all__ = [
    "PAULI_1Q",
    "LABELS_1Q",
    "LABELS",
    "PAULIS",
    "pauli_index",
    "pauli_matrix",
    "dm_pure",
    "check_density_matrix",
    "ptm_of_unitary",
    "ptm_of_kraus",
    "pauli_vector",
    "state_from_pauli_vector",
    "apply_channel",
    "apply_channel_vec",
    "is_trace_preserving",
    "matrix_log_principal",
    "complex_matrix_to_json",
    "complex_matrix_from_json",
    "real_matrix_to_json",
    "real_matrix_from_json",
]

LABELS_1Q = ("I", "X", "Y", "Z")

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

LABELS: tuple[str, ...] = tuple(a + b for a in LABELS_1Q for b in LABELS_1Q)

# (16, 4, 4) stack in label order; PAULIS[0] is II.
PAULIS = np.stack([np.kron(PAULI_1Q[l[0]], PAULI_1Q[l[1]]) for l in LABELS])

_LABEL_TO_INDEX = {l: i for i, l in enumerate(LABELS)}


class BranchAmbiguityError(ValueError):
    """Matrix has an eigenvalue too close to the negative real axis."""


def pauli_index(label: str) -> int:
    return _LABEL_TO_INDEX[label]


def pauli_matrix(label: str) -> np.ndarray:
    return PAULIS[_LABEL_TO_INDEX[label]]


def dm_pure(ket: np.ndarray) -> np.ndarray:
    """Rank-1 projector |ket><ket| for a normalized 4-vector."""
    ket = np.asarray(ket, dtype=complex).reshape(4)
    norm = np.linalg.norm(ket)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"ket is not normalized: |ket| = {norm!r}")
    return np.outer(ket, ket.conj())


def check_density_matrix(rho: np.ndarray, *, herm_tol: float = 1e-12,
                         trace_tol: float = 1e-12, eig_tol: float = 1e-10) -> None:
    """Raise if rho is not Hermitian, unit-trace and PSD within tolerances."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected 4x4 matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValueError(f"density matrix trace is {np.trace(rho)!r}, not 1")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if evals.min() < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min()!r}")


def ptm_of_unitary(u: np.ndarray, *, unitary_tol: float = 1e-12) -> np.ndarray:
    """PTM of the unitary channel rho -> u rho u^dag."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError(f"expected 4x4 unitary, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(4))) > unitary_tol:
        raise ValueError("matrix is not unitary")
    conj = np.einsum("ab,jbc,dc->jad", u, PAULIS, u.conj())
    return np.real(np.einsum("iab,jba->ij", PAULIS, conj)) / 4.0


def ptm_of_kraus(kraus: list[np.ndarray] | np.ndarray) -> np.ndarray:
    """PTM of the channel rho -> sum_k K rho K^dag."""
    ks = np.asarray(kraus, dtype=complex).reshape(-1, 4, 4)
    conj = np.einsum("kab,jbc,kdc->jad", ks, PAULIS, ks.conj())
    return np.real(np.einsum("iab,jba->ij", PAULIS, conj)) / 4.0


def pauli_vector(rho: np.ndarray) -> np.ndarray:
    """Expectation vector r[j] = Tr(P_j rho); real for Hermitian rho."""
    return np.real(np.einsum("jab,ba->j", PAULIS, np.asarray(rho, dtype=complex)))


def state_from_pauli_vector(r: np.ndarray) -> np.ndarray:
    """Inverse of pauli_vector: rho = sum_j r_j P_j / 4."""
    return np.einsum("j,jab->ab", np.asarray(r, dtype=float), PAULIS) / 4.0


def is_trace_preserving(m: np.ndarray, tol: float = 1e-10) -> bool:
    first = np.zeros(16)
    first[0] = 1.0
    return bool(np.max(np.abs(np.asarray(m)[0] - first)) <= tol)


def apply_channel_vec(m: np.ndarray, r: np.ndarray) -> np.ndarray:
    return np.asarray(m) @ np.asarray(r)


def apply_channel(m: np.ndarray, rho: np.ndarray, *, check_tp: bool = True) -> np.ndarray:
    """Apply the PTM m to a density matrix."""
    m = np.asarray(m)
    if check_tp and not is_trace_preserving(m):
        raise ValueError("channel is not trace preserving")
    return state_from_pauli_vector(m @ pauli_vector(rho))


def matrix_log_principal(m: np.ndarray, *, tol: float = 1e-9,
                         axis_tol: float = 1e-6) -> np.ndarray:
    """Principal matrix logarithm of a real square matrix.

    Rejects inputs with an eigenvalue within ``axis_tol`` of the closed
    negative real axis, where the principal branch is ill-defined.
    """
    m = np.asarray(m, dtype=float)
    evals = np.linalg.eigvals(m)
    # distance of each eigenvalue to {x <= 0, y = 0}
    dist = np.where(evals.real <= 0, np.abs(evals.imag), np.abs(evals))
    if dist.min() < axis_tol:
        bad = evals[np.argmin(dist)]
        raise BranchAmbiguityError(
            f"eigenvalue {bad!r} lies within {axis_tol} of the negative real axis")
    log = logm(m)
    if np.max(np.abs(log.imag)) > 1e-8:
        raise BranchAmbiguityError("principal logarithm is not real")
    log = log.real
    if np.max(np.abs(expm(log) - m)) > tol:
        raise ArithmeticError("exp(log(m)) does not reproduce m within tolerance")
    return log


def complex_matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    """Row-major nested lists of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def complex_matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def real_matrix_to_json(m: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(m, dtype=float)]


def real_matrix_from_json(data) -> np.ndarray:
    return np.array(data, dtype=float)
