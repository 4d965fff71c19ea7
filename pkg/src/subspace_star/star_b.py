"""The block operator B(Q_1, ..., Q_m) of the star K_{1,N} with m commuting pairs.

Block order (0-based): hub 0, then the pair blocks ``2k+1, 2k+2`` for
k = 0..m-1, then the ray blocks ``2m+1+j`` for j = 0..r-1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriterionError, ParameterError, ValidationError
from .g_construction import BlockOperator
from .numerics import (DEFAULT_TOL, Tolerance, as_matrix, is_projector, kernel_basis,
                       op_norm, orthonormal_columns, psd_check)
from .subspace_system import decode_matrix, encode_matrix


@dataclass(frozen=True)
class StarParams:
    """Star size and the reduced cosines tau_1..tau_{m+r} (pair values first)."""
    m: int
    r: int
    tau: tuple

    def __post_init__(self):
        tau = tuple(float(t) for t in self.tau)
        if self.m < 0 or self.r < 0:
            raise ParameterError("m and r must be nonnegative")
        if 2 * self.m + self.r < 1:
            raise ParameterError("the star needs at least one leaf (2m + r >= 1)")
        if len(tau) != self.m + self.r:
            raise ParameterError(f"expected {self.m + self.r} tau values, got {len(tau)}")
        bad = [t for t in tau if not 0.0 < t < 1.0]
        if bad:
            raise ParameterError(f"tau values must lie in (0, 1): {bad}")
        object.__setattr__(self, "tau", tau)

    @property
    def N(self) -> int:
        return 2 * self.m + self.r

    @property
    def n_blocks(self) -> int:
        return self.N + 1

    @property
    def xi(self) -> float:
        return 1.0 - float(np.sum(np.square(self.tau)))

    def to_json(self) -> dict:
        return {"m": self.m, "r": self.r, "tau": list(self.tau)}


@dataclass(frozen=True)
class ProjectorFamily:
    dim0: int
    projectors: tuple

    def __post_init__(self):
        mats = []
        for k, Q in enumerate(self.projectors):
            Q = as_matrix(Q)
            if Q.shape != (self.dim0, self.dim0):
                raise ValidationError(f"projector {k} has shape {Q.shape}, expected {(self.dim0, self.dim0)}")
            if not is_projector(Q):
                raise ValidationError(f"Q_{k} is not an orthogonal projector")
            Q = (Q + Q.conj().T) / 2
            Q.setflags(write=False)
            mats.append(Q)
        object.__setattr__(self, "projectors", tuple(mats))

    @property
    def m(self) -> int:
        return len(self.projectors)

    @property
    def complements(self) -> tuple:
        """The projectors R_k = I - Q_k."""
        eye = np.eye(self.dim0)
        return tuple(eye - Q for Q in self.projectors)

    @classmethod
    def from_complements(cls, dim0, complements) -> "ProjectorFamily":
        eye = np.eye(dim0)
        return cls(dim0, tuple(eye - as_matrix(R) for R in complements))


def load_star(data: dict):
    params = StarParams(int(data["m"]), int(data["r"]), tuple(data["tau"]))
    dim0 = int(data.get("dim0", 1))
    fam = ProjectorFamily(dim0, tuple(decode_matrix(P) for P in data.get("projectors", [])))
    return params, fam


def dump_star(params: StarParams, fam: ProjectorFamily) -> dict:
    return {**params.to_json(), "dim0": fam.dim0,
            "projectors": [encode_matrix(Q) for Q in fam.projectors]}


def _check(params, fam):
    if fam.m != params.m:
        raise ValidationError(f"expected {params.m} projectors, got {fam.m}")


def assemble(params: StarParams, fam: ProjectorFamily) -> BlockOperator:
    """B(Q_1..Q_m): tau-scaled identities on the hub row, Q_k between pair partners."""
    _check(params, fam)
    d, n = fam.dim0, params.n_blocks
    B = np.zeros((n * d, n * d), dtype=complex)
    eye = np.eye(d)

    def put(i, j, blk):
        B[i * d:(i + 1) * d, j * d:(j + 1) * d] = blk

    for i in range(n):
        put(i, i, eye)
    for k in range(params.m):
        a, b = 2 * k + 1, 2 * k + 2
        for leaf in (a, b):
            put(0, leaf, params.tau[k] * eye)
            put(leaf, 0, params.tau[k] * eye)
        put(a, b, fam.projectors[k])
        put(b, a, fam.projectors[k])
    for j in range(params.r):
        leaf = 2 * params.m + 1 + j
        t = params.tau[params.m + j]
        put(0, leaf, t * eye)
        put(leaf, 0, t * eye)
    return BlockOperator((d,) * n, B)


def criterion_matrix(params: StarParams, fam: ProjectorFamily) -> np.ndarray:
    """xi(tau) I - sum_k tau_k^2 R_k; B is PSD exactly when this is."""
    _check(params, fam)
    M = params.xi * np.eye(fam.dim0, dtype=complex)
    for t, R in zip(params.tau, fam.complements):
        M -= t * t * R
    return M


def nonneg_criterion(params: StarParams, fam: ProjectorFamily, tol: Tolerance = DEFAULT_TOL) -> bool:
    return psd_check(criterion_matrix(params, fam), tol)


def kernel_dim_formula(params: StarParams, fam: ProjectorFamily, tol: Tolerance = DEFAULT_TOL) -> int:
    """dim Ker B = sum_k dim Im Q_k + dim Ker(xi I - sum tau_k^2 R_k).

    Only valid when the positivity criterion holds; otherwise raises.
    """
    M = criterion_matrix(params, fam)
    if not psd_check(M, tol):
        raise CriterionError("kernel formula requires sum tau_k^2 R_k <= xi(tau) I, which fails here")
    im_q = sum(int(round(np.trace(Q).real)) for Q in fam.projectors)
    return im_q + kernel_basis(M, tol).shape[1]


def kernel_vector(params: StarParams, fam: ProjectorFamily, y, deltas,
                  tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Assemble the element of Ker B determined by ``y`` and the ``deltas``.

    ``y`` must lie in Ker(xi I - sum tau_k^2 R_k) and ``deltas[k]`` in Im Q_k.
    """
    _check(params, fam)
    d, m, r = fam.dim0, params.m, params.r
    y = np.asarray(y, dtype=complex).reshape(d)
    deltas = [np.asarray(dk, dtype=complex).reshape(d) for dk in deltas]
    if len(deltas) != m:
        raise ValidationError(f"expected {m} delta vectors, got {len(deltas)}")
    scale = max(1.0, float(np.linalg.norm(y)))
    problems = []
    res = np.linalg.norm(criterion_matrix(params, fam) @ y)
    if res > tol.threshold(scale):
        problems.append(f"y is not in the criterion kernel (residual {res:.2e})")
    R = fam.complements
    for k, dk in enumerate(deltas):
        res = np.linalg.norm(R[k] @ dk)
        if res > tol.threshold(max(1.0, float(np.linalg.norm(dk)))):
            problems.append(f"delta_{k} is not in Im Q_{k} (residual {res:.2e})")
    if problems:
        raise ValidationError("; ".join(problems))

    eye = np.eye(d)
    parts = [None] * params.n_blocks
    hub = np.zeros(d, dtype=complex)
    for k in range(m):
        zk = 0.5 * params.tau[k] * (eye + R[k]) @ y
        parts[2 * k + 1] = zk + deltas[k]
        parts[2 * k + 2] = zk - deltas[k]
        hub -= 2 * params.tau[k] * zk
    for j in range(r):
        vj = params.tau[m + j] * y
        parts[2 * m + 1 + j] = vj
        hub -= params.tau[m + j] * vj
    parts[0] = hub
    x = np.concatenate(parts)

    B = assemble(params, fam).matrix
    res = np.linalg.norm(B @ x)
    if res > tol.threshold(op_norm(B)) * max(1.0, float(np.linalg.norm(x))):
        raise ValidationError(f"assembled vector is not in Ker B (residual {res:.2e})")
    return x


def kernel_parametrization(params: StarParams, fam: ProjectorFamily,
                           tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Kernel vectors over a basis of admissible (y, delta), stacked as columns."""
    d, m = fam.dim0, params.m
    zeros = [np.zeros(d)] * m
    cols = []
    for y in kernel_basis(criterion_matrix(params, fam), tol).T:
        cols.append(kernel_vector(params, fam, y, zeros, tol))
    for k, Q in enumerate(fam.projectors):
        for dk in orthonormal_columns(Q, tol).T:
            deltas = list(zeros)
            deltas[k] = dk
            cols.append(kernel_vector(params, fam, np.zeros(d), deltas, tol))
    if not cols:
        return np.zeros((params.n_blocks * d, 0), dtype=complex)
    return np.column_stack(cols)


def constrained_min(A_list, mu_list, y):
    """Minimize sum_k <A_k u_k, u_k> subject to sum_k mu_k u_k = y.

    Returns ``(u, value)`` with ``u[k] = mu_k A_k^{-1} S^{-1} y`` and
    ``value = <S^{-1} y, y>``, where ``S = sum_j mu_j^2 A_j^{-1}``.
    """
    A_list = [as_matrix(np.atleast_2d(A)) for A in A_list]
    mu = np.asarray(mu_list, dtype=float)
    if len(A_list) != mu.size or not A_list:
        raise ValidationError("need one positive weight per operator")
    if np.any(mu <= 0):
        raise ValidationError("weights mu_k must be positive")
    y = np.asarray(y, dtype=complex).reshape(-1)
    inverses = []
    for k, A in enumerate(A_list):
        w = np.linalg.eigvalsh((A + A.conj().T) / 2)
        if op_norm(A - A.conj().T) > DEFAULT_TOL.threshold(op_norm(A)) or w[0] <= DEFAULT_TOL.threshold(w[-1]):
            raise ValidationError(f"A_{k} is not Hermitian positive definite")
        inverses.append(np.linalg.inv(A))
    S = sum(mk * mk * Ainv for mk, Ainv in zip(mu, inverses))
    x = np.linalg.solve(S, y)
    u = [mk * Ainv @ x for mk, Ainv in zip(mu, inverses)]
    return u, float(np.vdot(y, x).real)
