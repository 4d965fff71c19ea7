"""Irreducibility through commutant dimension, and the wildness embedding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisNotCertified, ParameterError, ValidationError
from .g_construction import BlockOperator, iter_paths, path_product
from .numerics import (DEFAULT_TOL, Tolerance, as_matrix, is_hermitian, op_norm,
                       orthonormal_columns, psd_check)
from .subspace_system import SubspaceSystem


@dataclass(frozen=True)
class PathOperator:
    path: tuple
    operator: np.ndarray


def _span_basis(generators, tol):
    """Matrices spanning the same linear space as ``generators`` (and their adjoints)."""
    n = generators[0].shape[0]
    mats = []
    for A in generators:
        mats.append(A)
        if not is_hermitian(A, tol):
            mats.append(A.conj().T)
    V = np.column_stack([A.reshape(-1) for A in mats])
    Q = orthonormal_columns(V, tol)
    return [Q[:, c].reshape(n, n) for c in range(Q.shape[1])]


def _null_directions(K, thr):
    """Orthonormal basis of {v : |K v| small}, via the right singular vectors."""
    if not np.all(np.isfinite(K)):
        raise ValidationError("non-finite entries in commutant computation")
    try:
        _, s, Vh = np.linalg.svd(K, full_matrices=True)
        V = Vh.conj().T
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge; the adjoint usually does not
        V, s, _ = np.linalg.svd(K.conj().T, full_matrices=True)
    return V[:, np.count_nonzero(s > thr):]


def commutant_dim(generators, tol: Tolerance = DEFAULT_TOL, n: int | None = None) -> int:
    """Dimension of {X : X A = A X and X A* = A* X for every generator A}.

    Equals 1 exactly when the *-family is irreducible.  ``n`` gives the space
    dimension when the family is empty.
    """
    gens = [as_matrix(A) for A in generators]
    if not gens:
        if n is None:
            raise ValidationError("an empty family needs its dimension")
        return n * n
    n = gens[0].shape[0]
    if any(A.shape != (n, n) for A in gens):
        raise ValidationError("generators must be square matrices of one size")
    if n == 0:
        return 0
    scale = max(1.0, max(op_norm(A) for A in gens))
    thr = tol.threshold(scale)
    basis = _span_basis(gens, tol)
    if not basis:  # all generators vanish
        return n * n
    # Null space of X -> AX - XA, refined one generator at a time.  Columns of
    # N are row-major vecs of an orthonormal basis of the current solution space.
    herm = next((A for A in gens if is_hermitian(A, tol)), None)
    if herm is not None:
        # exact start: X = w_i w_j^* with |lambda_i - lambda_j| <= thr
        w, W = np.linalg.eigh(herm)
        ii, jj = np.nonzero(np.abs(w[:, None] - w[None, :]) <= thr)
        N = np.einsum("ak,bk->abk", W[:, ii], W[:, jj].conj()).reshape(n * n, -1)
    else:
        N = np.eye(n * n, dtype=complex)
    for A in basis:
        if N.shape[1] == 0:
            break
        X = N.T.reshape(-1, n, n)
        K = (A @ X - X @ A).reshape(X.shape[0], n * n).T
        N = N @ _null_directions(K, thr)
    return int(N.shape[1])


def system_irreducible(S: SubspaceSystem, tol: Tolerance = DEFAULT_TOL) -> bool:
    return commutant_dim(S.projectors, tol, n=S.ambient_dim) == 1


def path_operator(B: BlockOperator, path) -> PathOperator:
    path = tuple(int(i) for i in path)
    return PathOperator(path, path_product(B, path))


def _invertible(A, tol):
    if A.shape[0] != A.shape[1]:
        return False
    if A.size == 0:
        return True
    s = np.linalg.svd(A, compute_uv=False)
    return s[-1] > tol.threshold(1.0)


def certify_paths(B: BlockOperator, alpha: int, max_len: int = 4,
                  tol: Tolerance = DEFAULT_TOL) -> dict:
    """For each block k, a path from ``alpha`` to k with invertible operator."""
    found = {}
    for path in iter_paths(B, max_len, tol, start=alpha):
        k = path[-1]
        if k not in found and _invertible(path_product(B, path), tol):
            found[k] = path
    missing = sorted(set(range(B.n)) - set(found))
    if missing:
        raise HypothesisNotCertified(
            f"no invertible path of length <= {max_len} from block {alpha} to blocks {missing}")
    return found


def loop_operators(B: BlockOperator, alpha: int, max_len: int = 4,
                   tol: Tolerance = DEFAULT_TOL) -> list:
    return [path_operator(B, p) for p in iter_paths(B, max_len, tol, start=alpha)
            if len(p) > 1 and p[-1] == alpha]


def loop_family_irreducible(B: BlockOperator, alpha: int = 0, max_len: int = 4,
                            tol: Tolerance = DEFAULT_TOL) -> bool:
    """Irreducibility of the constructed system read off the loops at ``alpha``.

    Raises :class:`HypothesisNotCertified` unless every block is reachable
    from ``alpha`` by a path with invertible operator.
    """
    certify_paths(B, alpha, max_len, tol)
    loops = [p.operator for p in loop_operators(B, alpha, max_len, tol)]
    return commutant_dim(loops, tol, n=B.block_dims[alpha]) == 1


def family_irreducible_Q(fam, tol: Tolerance = DEFAULT_TOL) -> bool:
    return commutant_dim(fam.projectors, tol, n=fam.dim0) == 1


# -- wildness embedding --------------------------------------------------------

def wild_embed(A, B, alpha: float, tol: Tolerance = DEFAULT_TOL) -> SubspaceSystem:
    """Three graph subspaces of L+L+L built from a self-adjoint pair (A, B).

    K1 = {(x,0,0)}, K2 = {(alpha x, x, 0)}, K3 = {((A+iB)x, alpha x, x)}.
    """
    A, B = as_matrix(A), as_matrix(B)
    L = A.shape[0]
    if A.shape != (L, L) or B.shape != (L, L):
        raise ParameterError("A and B must be square of the same size")
    if not (is_hermitian(A, tol) and is_hermitian(B, tol)):
        raise ParameterError("A and B must be self-adjoint")
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    bound = tol.threshold(alpha)
    if op_norm(A) > alpha + bound or op_norm(B) > alpha + bound:
        raise ParameterError(f"need ||A||, ||B|| <= alpha = {alpha}")
    eye, zero = np.eye(L), np.zeros((L, L))
    k1 = np.vstack([eye, zero, zero])
    k2 = np.vstack([alpha * eye, eye, zero])
    k3 = np.vstack([A + 1j * B, alpha * eye, eye])
    return SubspaceSystem.from_spanning_sets(3 * L, [k1, k2, k3], tol)


def wild_sum_excess(S: SubspaceSystem) -> float:
    """Largest eigenvalue of R_1 + R_2 + R_3 minus 1."""
    total = sum(S.projectors)
    return float(np.linalg.eigvalsh(total)[-1]) - 1.0


def wild_sum_bounded(S: SubspaceSystem, eps: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether R_1 + R_2 + R_3 <= (1 + eps) I."""
    total = sum(S.projectors)
    return psd_check((1 + eps) * np.eye(S.ambient_dim) - total, tol)


def random_admissible_pair(L: int, alpha: float, rng: np.random.Generator):
    """Random self-adjoint pair with spectral norms at most alpha, hitting the bound often."""
    out = []
    for _ in range(2):
        Z = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
        H = (Z + Z.conj().T) / 2
        H *= rng.uniform(0.5, 1.0) * alpha / op_norm(H)
        out.append(H)
    return out[0], out[1]


def _extreme_pairs(L, alpha):
    eye = np.eye(L)
    for sa in (1, -1):
        for sb in (1, -1):
            yield sa * alpha * eye, sb * alpha * eye


def find_wild_alpha(eps: float, L: int, trials: int = 200, seed: int = 0,
                    lo: float = 1e-4, hi: float = 1.0, iters: int = 40) -> float:
    """Bisect for the largest alpha keeping R_1+R_2+R_3 <= (1+eps) I on sampled pairs.

    Samples include the extreme pairs (+-alpha I, +-alpha I) besides random
    admissible ones.  The result is a sampled bound, not a proof.
    """
    def ok(alpha):
        rng = np.random.default_rng(seed)
        pairs = list(_extreme_pairs(L, alpha))
        pairs += [random_admissible_pair(L, alpha, rng) for _ in range(trials)]
        return all(wild_sum_excess(wild_embed(A, B, alpha)) <= eps for A, B in pairs)

    if not ok(lo):
        raise ValidationError(f"even alpha={lo} violates the bound for eps={eps}")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo

