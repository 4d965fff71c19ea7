"""Building subspace systems from block operators with identity diagonal blocks.

Given a positive semidefinite ``B`` on ``H_01 + ... + H_0n`` with ``B_kk = I``,
the quotient of the direct sum by ``Ker B`` with inner product ``<Bx, y>`` is
realized concretely by ``rho = Lambda_+^{1/2} V_+^*`` from the eigendecomposition
of ``B``.  The k-th subspace is spanned by the columns of ``rho`` belonging to
block k; those columns are orthonormal because ``B_kk = I``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BlockStructureError, NotPositiveError, ValidationError
from .numerics import DEFAULT_TOL, Tolerance, _eigh, as_matrix, is_unitary, op_norm
from .subspace_system import SubspaceSystem, decode_matrix, encode_matrix, gram


@dataclass(frozen=True)
class BlockOperator:
    """Hermitian block matrix with identity diagonal blocks.

    Positivity is not enforced here: operators assembled from arbitrary
    projector families may fail it, and :func:`construct` reports that.
    """
    block_dims: tuple
    matrix: np.ndarray

    def __post_init__(self):
        tol = DEFAULT_TOL
        dims = tuple(int(d) for d in self.block_dims)
        if any(d < 0 for d in dims):
            raise BlockStructureError("block dimensions must be nonnegative")
        A = as_matrix(self.matrix)
        total = sum(dims)
        if A.shape != (total, total):
            raise BlockStructureError(f"matrix shape {A.shape} does not match block dims {dims}")
        norm = op_norm(A)
        if op_norm(A - A.conj().T) > tol.threshold(norm):
            raise BlockStructureError("block operator is not Hermitian")
        A = (A + A.conj().T) / 2
        off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
        for k, d in enumerate(dims):
            blk = A[off[k]:off[k + 1], off[k]:off[k + 1]]
            if op_norm(blk - np.eye(d)) > tol.threshold(max(1.0, norm)):
                raise BlockStructureError(f"diagonal block {k} is not the identity", block=k)
        A.setflags(write=False)
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "_offsets", off)

    @property
    def n(self) -> int:
        return len(self.block_dims)

    def block(self, i: int, j: int) -> np.ndarray:
        off = self._offsets
        return self.matrix[off[i]:off[i + 1], off[j]:off[j + 1]]

    def slice(self, k: int) -> slice:
        return slice(self._offsets[k], self._offsets[k + 1])

    def to_json(self) -> dict:
        return {"block_dims": list(self.block_dims), "matrix": encode_matrix(self.matrix)}

    @classmethod
    def from_json(cls, data: dict) -> "BlockOperator":
        return cls(tuple(data["block_dims"]), decode_matrix(data["matrix"]))

    @classmethod
    def from_blocks(cls, blocks) -> "BlockOperator":
        blocks = [[np.atleast_2d(np.asarray(b, dtype=complex)) for b in row] for row in blocks]
        return cls(tuple(row[i].shape[0] for i, row in enumerate(blocks)), np.block(blocks))


def line_pair_operator(phi: float) -> BlockOperator:
    c = np.cos(phi)
    return BlockOperator((1, 1), np.array([[1.0, c], [c, 1.0]]))


def construct(B: BlockOperator, tol: Tolerance = DEFAULT_TOL) -> SubspaceSystem:
    w, V, thr = _eigh(B.matrix, tol)
    if w.size and w[0] < -thr:
        raise NotPositiveError(
            f"block operator is not positive semidefinite: most negative eigenvalue {w[0]:.6e}",
            min_eigenvalue=float(w[0]))
    keep = w > thr
    rho = np.sqrt(w[keep])[:, None] * V[:, keep].conj().T
    return SubspaceSystem(int(keep.sum()), tuple(rho[:, B.slice(k)] for k in range(B.n)))


def gram_roundtrip(B: BlockOperator, tol: Tolerance = DEFAULT_TOL) -> float:
    return op_norm(gram(construct(B, tol)).matrix - B.matrix)


def _check_pair(B, alpha, beta):
    if alpha == beta:
        raise ValidationError("block conditions need two distinct indices")
    for x in (alpha, beta):
        if not 0 <= x < B.n:
            raise ValidationError(f"block index {x} out of range 0..{B.n - 1}")


def block_condition_orthogonal(B: BlockOperator, alpha: int, beta: int,
                               tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_pair(B, alpha, beta)
    return op_norm(B.block(alpha, beta)) <= tol.threshold(1.0)


def block_condition_angle(B: BlockOperator, alpha: int, beta: int, tau0: float,
                          tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_pair(B, alpha, beta)
    if not 0.0 < tau0 < 1.0:
        raise ValidationError(f"tau0 must lie in (0, 1), got {tau0}")
    blk = B.block(alpha, beta)
    return blk.shape[0] == blk.shape[1] and is_unitary(blk / tau0, tol)


def block_condition_commute(B: BlockOperator, alpha: int, beta: int,
                            tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_pair(B, alpha, beta)
    Bab, Bba = B.block(alpha, beta), B.block(beta, alpha)
    thr = tol.threshold(max(1.0, op_norm(B.matrix)))
    for i in range(B.n):
        lhs = Bab @ B.block(beta, i)
        rhs = Bab @ Bba @ B.block(alpha, i)
        if op_norm(lhs - rhs) > thr:
            return False
    return True


def path_product(B: BlockOperator, path) -> np.ndarray:
    """``B_{i1,i2} B_{i2,i3} ... B_{i(k-1),ik}``; a single index gives the identity."""
    path = list(path)
    if not path:
        raise ValidationError("a path needs at least one index")
    out = np.eye(B.block_dims[path[0]], dtype=complex)
    for a, b in zip(path, path[1:]):
        out = out @ B.block(a, b)
    return out


def _nonzero_adjacency(B, tol):
    thr = tol.threshold(1.0)
    return [[j for j in range(B.n) if j != i and op_norm(B.block(i, j)) > thr] for i in range(B.n)]


def iter_paths(B: BlockOperator, max_len: int, tol: Tolerance = DEFAULT_TOL, start=None):
    """Yield index paths with at most ``max_len`` steps that avoid zero blocks."""
    adj = _nonzero_adjacency(B, tol)
    starts = range(B.n) if start is None else [start]
    stack = [(s,) for s in starts]
    while stack:
        path = stack.pop()
        yield path
        if len(path) - 1 < max_len:
            stack.extend(path + (j,) for j in adj[path[-1]])


def equivalent_inputs(B: BlockOperator, B2: BlockOperator, tol: Tolerance = DEFAULT_TOL,
                      max_len: int = 4, sv_tol: float = 1e-8) -> bool:
    """Refute unitary equivalence by comparing singular values of path operators.

    ``False`` means the inputs are certainly inequivalent.  ``True`` only means
    no path of at most ``max_len`` steps tells them apart.
    """
    if B.block_dims != B2.block_dims:
        raise ValidationError(f"block dims differ: {B.block_dims} vs {B2.block_dims}")
    n = B.n
    # Zero blocks are themselves invariants; mismatched patterns decide at once.
    thr = tol.threshold(1.0)
    for i, j in itertools.product(range(n), repeat=2):
        if (op_norm(B.block(i, j)) > thr) != (op_norm(B2.block(i, j)) > thr):
            return False
    for path in iter_paths(B, max_len, tol):
        if len(path) < 2:
            continue
        s1 = np.linalg.svd(path_product(B, path), compute_uv=False)
        s2 = np.linalg.svd(path_product(B2, path), compute_uv=False)
        if s1.size and np.max(np.abs(s1 - s2)) > sv_tol:
            return False
    return True
