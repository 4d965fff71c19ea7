"""Systems of subspaces ``(H; H_1, ..., H_n)`` stored as orthonormal bases.

Subspace indices are 0-based: index 0 is the hub of the star, leaves
``2k+1, 2k+2`` form the k-th commuting pair and leaves ``2m+1+j`` are rays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import ParameterError, ValidationError
from .numerics import DEFAULT_TOL, Tolerance, as_matrix, op_norm, projector_onto_columns

# Orthonormality is checked loosely: bases produced by the G-construction are
# exact only up to the eigenvalues dropped as numerical kernel.
ORTHONORMAL_TOL = 1e-7


@dataclass(frozen=True)
class SubspaceSystem:
    ambient_dim: int
    subspaces: tuple

    def __post_init__(self):
        if not self.subspaces:
            raise ValidationError("a system needs at least one subspace")
        bases = []
        for k, basis in enumerate(self.subspaces):
            basis = np.asarray(basis, dtype=complex)
            if basis.ndim == 1:
                basis = basis.reshape(-1, 1)
            if basis.size == 0:
                basis = np.zeros((self.ambient_dim, 0), dtype=complex)
            if basis.shape[0] != self.ambient_dim:
                raise ValidationError(
                    f"subspace {k}: basis has {basis.shape[0]} rows, ambient_dim is {self.ambient_dim}")
            gram = basis.conj().T @ basis
            dev = op_norm(gram - np.eye(basis.shape[1]))
            if dev > ORTHONORMAL_TOL:
                raise ValidationError(f"subspace {k}: basis is not orthonormal (deviation {dev:.2e})")
            basis.setflags(write=False)
            bases.append(basis)
        object.__setattr__(self, "subspaces", tuple(bases))

    @property
    def n(self) -> int:
        return len(self.subspaces)

    @cached_property
    def projectors(self) -> tuple:
        return tuple(projector_onto_columns(b) if b.shape[1] else
                     np.zeros((self.ambient_dim, self.ambient_dim), dtype=complex)
                     for b in self.subspaces)

    @classmethod
    def from_spanning_sets(cls, ambient_dim, spanning, tol: Tolerance = DEFAULT_TOL):
        """Build a system from arbitrary (possibly dependent) spanning columns."""
        from .numerics import orthonormal_columns
        return cls(ambient_dim, tuple(orthonormal_columns(np.asarray(c, dtype=complex).reshape(ambient_dim, -1), tol)
                                      for c in spanning))

    def direct_sum(self, other: "SubspaceSystem") -> "SubspaceSystem":
        if other.n != self.n:
            raise ValidationError("direct sum needs the same number of subspaces")
        d1, d2 = self.ambient_dim, other.ambient_dim
        bases = []
        for a, b in zip(self.subspaces, other.subspaces):
            top = np.hstack([a, np.zeros((d1, b.shape[1]))])
            bottom = np.hstack([np.zeros((d2, a.shape[1])), b])
            bases.append(np.vstack([top, bottom]))
        return SubspaceSystem(d1 + d2, tuple(bases))

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim,
                "subspaces": [_encode_columns(b) for b in self.subspaces]}

    @classmethod
    def from_json(cls, data: dict) -> "SubspaceSystem":
        d = int(data["ambient_dim"])
        return cls(d, tuple(_decode_columns(cols, d) for cols in data["subspaces"]))


@dataclass(frozen=True)
class GramOperator:
    block_dims: tuple
    matrix: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        off = np.concatenate([[0], np.cumsum(self.block_dims)])
        return self.matrix[off[i]:off[i + 1], off[j]:off[j + 1]]


@dataclass(frozen=True)
class GeneralizedDimension:
    ambient: int
    parts: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if any(p > self.ambient for p in self.parts):
            raise ValidationError("a part exceeds the ambient dimension")

    def collapsed(self) -> tuple:
        """``(dim H, dim H_1)`` when every part agrees, else the full tuple."""
        if self.parts and len(set(self.parts)) == 1:
            return (self.ambient, self.parts[0])
        return (self.ambient, *self.parts)

    def __str__(self):
        head, *rest = self.collapsed()
        return f"({head};{','.join(map(str, rest))})"


# -- complex JSON encoding ---------------------------------------------------

def encode_matrix(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def decode_matrix(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 0), dtype=complex)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValidationError("complex matrices are encoded as rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _encode_columns(basis) -> list:
    # column-major: one list entry per basis vector
    return [[[float(z.real), float(z.imag)] for z in col] for col in np.asarray(basis).T]


def _decode_columns(cols, ambient_dim) -> np.ndarray:
    if len(cols) == 0:
        return np.zeros((ambient_dim, 0), dtype=complex)
    return decode_matrix(cols).T


# -- operations ----------------------------------------------------------------

def gram(S: SubspaceSystem) -> GramOperator:
    dims = tuple(b.shape[1] for b in S.subspaces)
    stacked = np.hstack(S.subspaces)
    G = stacked.conj().T @ stacked
    return GramOperator(dims, (G + G.conj().T) / 2)


def _pair(S, i, j):
    if i == j:
        raise ParameterError("relations are defined for distinct subspaces")
    return S.projectors[i], S.projectors[j]


def _threshold(tol):
    # projectors have unit norm, so the scale is 1
    return tol.threshold(1.0)


def angle_residual(S, i, j, tau0) -> float:
    Pi, Pj = _pair(S, i, j)
    t2 = tau0 * tau0
    return max(op_norm(Pi @ Pj @ Pi - t2 * Pi), op_norm(Pj @ Pi @ Pj - t2 * Pj))


def commute_residual(S, i, j) -> float:
    Pi, Pj = _pair(S, i, j)
    return op_norm(Pi @ Pj - Pj @ Pi)


def orthogonal_residual(S, i, j) -> float:
    Pi, Pj = _pair(S, i, j)
    return op_norm(Pi @ Pj)


def check_angle(S, i, j, tau0, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not 0.0 < tau0 < 1.0:
        raise ParameterError(f"tau0 must lie in (0, 1), got {tau0}")
    return angle_residual(S, i, j, tau0) <= _threshold(tol)


def check_commute(S, i, j, tol: Tolerance = DEFAULT_TOL) -> bool:
    return commute_residual(S, i, j) <= _threshold(tol)


def check_orthogonal(S, i, j, tol: Tolerance = DEFAULT_TOL) -> bool:
    return orthogonal_residual(S, i, j) <= _threshold(tol)


def star_relations(m: int, r: int, tau) -> Iterator[tuple]:
    """Yield ``(i, j, kind, tau_ij)`` for every pair of the star with m commuting pairs.

    ``kind`` is ``"angle"`` for hub edges, ``"commute"`` for the dashed
    pairs and ``"orthogonal"`` for everything else.
    """
    n = 2 * m + r + 1
    for leaf in range(1, n):
        k = (leaf - 1) // 2 if leaf <= 2 * m else leaf - m - 1
        yield 0, leaf, "angle", tau[k]
    for i in range(1, n):
        for j in range(i + 1, n):
            if i <= 2 * m and i % 2 == 1 and j == i + 1:
                yield i, j, "commute", None
            else:
                yield i, j, "orthogonal", None


@dataclass
class Violation:
    i: int
    j: int
    relation: str
    residual: float


@dataclass
class RelationReport:
    violations: list
    max_residual: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "max_residual": self.max_residual,
                "violations": [vars(v) for v in self.violations]}


def verify_relations(S: SubspaceSystem, params, tol: Tolerance = DEFAULT_TOL,
                     threshold: float | None = None) -> RelationReport:
    """Check (Ang), (Com) and (Ort) on ``S`` for star parameters ``params``.

    ``params`` needs ``m``, ``r`` and the reduced ``tau`` vector of length m+r.
    """
    n = 2 * params.m + params.r + 1
    if S.n != n:
        raise ParameterError(f"expected {n} subspaces for m={params.m}, r={params.r}, got {S.n}")
    thr = _threshold(tol) if threshold is None else threshold
    violations, worst = [], 0.0
    for i, j, kind, t in star_relations(params.m, params.r, params.tau):
        if kind == "angle":
            res = angle_residual(S, i, j, t)
        elif kind == "commute":
            res = commute_residual(S, i, j)
        else:
            res = orthogonal_residual(S, i, j)
        worst = max(worst, res)
        if res > thr:
            violations.append(Violation(i, j, kind, res))
    return RelationReport(violations, worst)


def generalized_dimension(S: SubspaceSystem) -> GeneralizedDimension:
    return GeneralizedDimension(S.ambient_dim, tuple(b.shape[1] for b in S.subspaces))


def line_pair(phi: float) -> SubspaceSystem:
    """Two lines in C^2 spanned by e1 and cos(phi) e1 + sin(phi) e2."""
    return SubspaceSystem(2, (np.array([[1.0], [0.0]]),
                              np.array([[np.cos(phi)], [np.sin(phi)]])))


def random_system(ambient_dim, dims, rng: np.random.Generator) -> SubspaceSystem:
    bases = []
    for d in dims:
        Z = rng.standard_normal((ambient_dim, d)) + 1j * rng.standard_normal((ambient_dim, d))
        bases.append(np.linalg.qr(Z)[0] if d else np.zeros((ambient_dim, 0)))
    return SubspaceSystem(ambient_dim, tuple(bases))


__all__ = [
    "SubspaceSystem", "GramOperator", "GeneralizedDimension", "RelationReport", "Violation",
    "gram", "check_angle", "check_commute", "check_orthogonal", "verify_relations",
    "generalized_dimension", "star_relations", "line_pair", "random_system",
    "encode_matrix", "decode_matrix", "as_matrix",
]
