"""Dense complex-matrix primitives sharing one tolerance policy.

Every rank, kernel and positivity decision in the package goes through
:func:`_eigh`, so the threshold ``eps_rel * ||A||_2 + eps_abs`` is applied the
same way everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SymmetryError, ValidationError


@dataclass(frozen=True)
class Tolerance:
    eps_rel: float = 1e-9
    eps_abs: float = 1e-12

    def __post_init__(self):
        if self.eps_rel < 0 or self.eps_abs < 0:
            raise ValidationError("tolerances must be nonnegative")

    def threshold(self, scale: float = 1.0) -> float:
        """Absolute cutoff for a quantity whose natural size is ``scale``."""
        return self.eps_rel * scale + self.eps_abs


DEFAULT_TOL = Tolerance()


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValidationError(f"expected a 2-d matrix, got shape {A.shape}")
    return A


def op_norm(A) -> float:
    """Spectral norm; 0 for empty matrices."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def is_hermitian(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        return False
    return op_norm(A - A.conj().T) <= tol.threshold(op_norm(A))


def _eigh(A, tol: Tolerance):
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise SymmetryError(f"matrix is not square: {A.shape}")
    norm = op_norm(A)
    asym = op_norm(A - A.conj().T)
    if asym > tol.threshold(norm):
        raise SymmetryError(f"matrix is not Hermitian: ||A - A*|| = {asym:.3e}")
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    return w, V, tol.threshold(norm)


def eigenvalues(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    return _eigh(A, tol)[0]


def psd_check(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    w, _, thr = _eigh(A, tol)
    return bool(w.size == 0 or w[0] >= -thr)


def min_eigenvalue(A, tol: Tolerance = DEFAULT_TOL) -> float:
    w = _eigh(A, tol)[0]
    return float(w[0]) if w.size else 0.0


def kernel_basis(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of a Hermitian matrix."""
    w, V, thr = _eigh(A, tol)
    return V[:, np.abs(w) <= thr]


def rank(A, tol: Tolerance = DEFAULT_TOL) -> int:
    w, _, thr = _eigh(A, tol)
    return int(np.count_nonzero(np.abs(w) > thr))


def orthonormal_columns(C, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``C`` (rank-deficient allowed)."""
    C = as_matrix(C)
    if C.size == 0:
        return np.zeros((C.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(C, full_matrices=False)
    return U[:, s > tol.threshold(s[0])]


def projector_onto_columns(C, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    Q = orthonormal_columns(C, tol)
    P = Q @ Q.conj().T
    return (P + P.conj().T) / 2


def is_projector(P, tol: Tolerance = DEFAULT_TOL) -> bool:
    P = as_matrix(P)
    if P.shape[0] != P.shape[1]:
        return False
    thr = tol.threshold(max(1.0, op_norm(P)))
    return op_norm(P - P.conj().T) <= thr and op_norm(P @ P - P) <= thr


def is_unitary(U, tol: Tolerance = DEFAULT_TOL) -> bool:
    U = as_matrix(U)
    if U.shape[0] != U.shape[1]:
        return False
    eye = np.eye(U.shape[0])
    thr = tol.threshold(1.0)
    return op_norm(U.conj().T @ U - eye) <= thr and op_norm(U @ U.conj().T - eye) <= thr


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))
