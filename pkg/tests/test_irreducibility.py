import math

import numpy as np
import pytest

from subspace_star.errors import HypothesisNotCertified, ParameterError, ValidationError
from subspace_star.g_construction import BlockOperator, construct, equivalent_inputs, line_pair_operator
from subspace_star.irreducibility import (certify_paths, commutant_dim, family_irreducible_Q,
                                          loop_family_irreducible, loop_operators, path_operator,
                                          system_irreducible, wild_embed, wild_sum_bounded,
                                          wild_sum_excess)
from subspace_star.numerics import random_unitary
from subspace_star.star_b import ProjectorFamily, StarParams, assemble
from subspace_star.subspace_system import SubspaceSystem, gram, line_pair

from conftest import random_hermitian, random_projector

SX = np.array([[0, 1], [1, 0]], dtype=float)
SZ = np.diag([1.0, -1.0])


def test_commutant_examples():
    assert commutant_dim([], n=2) == 4
    c = math.cos(math.pi / 4)
    assert commutant_dim([np.diag([1.0, 0.0]), np.array([[c * c, c * c], [c * c, c * c]])]) == 1
    assert commutant_dim([np.diag([1.0, 0.0])]) == 2
    assert commutant_dim([np.eye(3)]) == 9
    with pytest.raises(ValidationError):
        commutant_dim([])
    with pytest.raises(ValidationError):
        commutant_dim([np.eye(2), np.eye(3)])


def test_system_irreducible_examples():
    assert system_irreducible(line_pair(0.7))
    S = line_pair(0.7)
    twice = SubspaceSystem.direct_sum(S, S)
    assert not system_irreducible(twice)
    assert commutant_dim(twice.projectors, n=twice.ambient_dim) == 4
    zero = SubspaceSystem(1, (np.zeros((1, 0)),) * 3)
    assert system_irreducible(zero)


def test_path_operator_and_loops():
    phi = 0.9
    B = line_pair_operator(phi)
    op = path_operator(B, (0, 1, 0))
    np.testing.assert_allclose(op.operator, [[math.cos(phi) ** 2]])
    loops = loop_operators(B, 0, max_len=4)
    assert {p.path for p in loops} == {(0, 1, 0), (0, 1, 0, 1, 0)}
    assert loop_family_irreducible(B)


def test_loop_family_star_examples():
    params = StarParams(1, 0, (0.4,))
    irred = ProjectorFamily(2, (np.diag([1.0, 0.0]),))
    B = assemble(params, irred)
    # a single projector on C^2 is reducible, and so is the constructed system
    assert not family_irreducible_Q(irred)
    assert not loop_family_irreducible(B)
    assert not system_irreducible(construct(B))

    c = math.cos(0.6)
    params = StarParams(2, 0, (0.3, 0.4))
    fam = ProjectorFamily(2, (np.diag([1.0, 0.0]), np.array([[c * c, c * math.sin(0.6)],
                                                              [c * math.sin(0.6), math.sin(0.6) ** 2]])))
    B = assemble(params, fam)
    assert family_irreducible_Q(fam)
    assert loop_family_irreducible(B)
    assert system_irreducible(construct(B))


def test_hypothesis_not_certified():
    with pytest.raises(HypothesisNotCertified, match="block 0"):
        loop_family_irreducible(BlockOperator((1, 1), np.eye(2)))
    # rectangular connecting block is never invertible
    B = BlockOperator.from_blocks([[np.eye(1), [[0.3, 0.4]]], [[[0.3], [0.4]], np.eye(2)]])
    with pytest.raises(HypothesisNotCertified):
        certify_paths(B, 0)
    assert certify_paths(line_pair_operator(0.2), 0) == {0: (0,), 1: (0, 1)}


def test_wild_embed_zero_pair():
    L = 2
    S = wild_embed(np.zeros((L, L)), np.zeros((L, L)), 0.044)
    # each coordinate line gives the same irreducible triple in C^3, so the commutant is M_L
    assert commutant_dim(S.projectors, n=S.ambient_dim) == L * L
    assert not system_irreducible(S)


def test_wild_embed_irreducible_pair():
    alpha = 0.05
    S = wild_embed(alpha * SZ, alpha * SX, alpha)
    assert S.ambient_dim == 6 and [b.shape[1] for b in S.subspaces] == [2, 2, 2]
    assert system_irreducible(S)
    assert wild_sum_excess(S) > 0


def test_wild_embed_rejects():
    with pytest.raises(ParameterError, match="alpha"):
        wild_embed(0.1 * SZ, 0.01 * SX, 0.05)
    with pytest.raises(ParameterError):
        wild_embed(np.array([[0, 1], [0, 0]]), np.zeros((2, 2)), 1.0)
    with pytest.raises(ParameterError):
        wild_embed(np.zeros((2, 2)), np.zeros((3, 3)), 1.0)


def test_wild_inequivalent_pairs_give_inequivalent_systems():
    alpha = 0.044
    a = wild_embed(alpha * SZ, alpha * SX, alpha)
    b = wild_embed(0.5 * alpha * SZ, alpha * SX, alpha)
    Ga, Gb = gram(a), gram(b)
    assert not equivalent_inputs(BlockOperator(Ga.block_dims, Ga.matrix),
                                 BlockOperator(Gb.block_dims, Gb.matrix))


def test_wild_sum_bounded_small_alpha():
    S = wild_embed(np.zeros((1, 1)), np.zeros((1, 1)), 0.01)
    assert wild_sum_bounded(S, 0.1)
    S = wild_embed(np.eye(1), np.eye(1), 1.0)
    assert not wild_sum_bounded(S, 0.1)


def test_commutant_unitary_invariance(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        gens = [random_projector(n, rng) if rng.random() < 0.5 else random_hermitian(n, rng)
                for _ in range(int(rng.integers(1, 3)))]
        U = random_unitary(n, rng)
        moved = [U.conj().T @ G @ U for G in gens]
        assert commutant_dim(gens, n=n) == commutant_dim(moved, n=n)


def brute_commutant_dim(gens, thr=1e-9):
    n = gens[0].shape[0]
    eye = np.eye(n)
    mats = [G for A in gens for G in (A, A.conj().T)]
    L = np.vstack([np.kron(A, eye) - np.kron(eye, A.T) for A in mats])
    return int(n * n - np.count_nonzero(np.linalg.svd(L, compute_uv=False) > thr))


def test_commutant_matches_kronecker_oracle(rng):
    for _ in range(60):
        n = int(rng.integers(1, 6))
        gens = []
        for _ in range(int(rng.integers(1, 4))):
            kind = rng.integers(0, 3)
            if kind == 0:
                gens.append(random_projector(n, rng))
            elif kind == 1:
                gens.append(random_hermitian(n, rng))
            else:
                gens.append(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        if rng.random() < 0.4 and n > 1:  # force a block structure
            U = random_unitary(n, rng)
            k = int(rng.integers(1, n))
            mask = np.zeros((n, n))
            mask[:k, :k] = mask[k:, k:] = 1
            gens = [U @ (G * mask) @ U.conj().T for G in gens]
        assert commutant_dim(gens) == brute_commutant_dim(gens)
