import json
import math

import numpy as np
import pytest

from subspace_star.errors import ParameterError, ValidationError
from subspace_star.numerics import psd_check
from subspace_star.star_b import StarParams
from subspace_star.subspace_system import (GeneralizedDimension, SubspaceSystem, check_angle,
                                           check_commute, check_orthogonal, commute_residual,
                                           generalized_dimension, gram, line_pair,
                                           random_system, star_relations, verify_relations)

E1 = np.array([[1.0], [0.0]])
E2 = np.array([[0.0], [1.0]])
ORTH = SubspaceSystem(2, (E1, E2))
SAME = SubspaceSystem(2, (E1, E1))


def test_gram_examples():
    np.testing.assert_allclose(gram(ORTH).matrix, np.eye(2))
    phi = 0.9
    np.testing.assert_allclose(gram(line_pair(phi)).matrix,
                               [[1, math.cos(phi)], [math.cos(phi), 1]], atol=1e-15)
    np.testing.assert_allclose(gram(SAME).matrix, np.ones((2, 2)))


def test_angle_examples():
    phi = 0.6
    assert check_angle(line_pair(phi), 0, 1, math.cos(phi))
    assert not check_angle(ORTH, 0, 1, 0.3)
    assert not check_angle(SAME, 0, 1, 0.5)
    with pytest.raises(ParameterError):
        check_angle(ORTH, 0, 1, 1.0)
    with pytest.raises(ParameterError):
        check_angle(ORTH, 1, 1, 0.5)


def test_commute_and_orthogonal_examples():
    phi = 0.6
    assert check_commute(ORTH, 0, 1)
    assert check_commute(SubspaceSystem(3, (np.eye(3)[:, :2], np.eye(3)[:, 1:])), 0, 1)
    assert not check_commute(line_pair(phi), 0, 1)
    # commutator of the two rank-one projections has norm cos(phi) sin(phi)
    assert commute_residual(line_pair(phi), 0, 1) == pytest.approx(math.cos(phi) * math.sin(phi))
    assert check_orthogonal(ORTH, 0, 1)
    assert not check_orthogonal(line_pair(phi), 0, 1)
    assert not check_orthogonal(SAME, 0, 1)


def test_generalized_dimension():
    assert generalized_dimension(line_pair(0.3)).collapsed() == (2, 1)
    zero = SubspaceSystem(3, (np.zeros((3, 0)),) * 4)
    assert generalized_dimension(zero) == GeneralizedDimension(3, (0, 0, 0, 0))
    assert str(generalized_dimension(line_pair(0.3))) == "(2;1)"
    with pytest.raises(ValidationError):
        GeneralizedDimension(1, (2,))


def test_invalid_systems():
    with pytest.raises(ValidationError):
        SubspaceSystem(2, ())
    with pytest.raises(ValidationError):
        SubspaceSystem(2, (np.array([[1.0], [1.0]]),))
    with pytest.raises(ValidationError):
        SubspaceSystem(3, (E1,))


def test_star_relation_layout():
    rels = list(star_relations(1, 1, (0.3, 0.4)))
    assert (0, 1, "angle", 0.3) in rels and (0, 2, "angle", 0.3) in rels and (0, 3, "angle", 0.4) in rels
    assert (1, 2, "commute", None) in rels
    assert (1, 3, "orthogonal", None) in rels and (2, 3, "orthogonal", None) in rels
    assert len(rels) == 6


def test_verify_relations_zero_and_random(rng):
    params = StarParams(1, 1, (0.3, 0.4))
    zero = SubspaceSystem(2, (np.zeros((2, 0)),) * 4)
    assert verify_relations(zero, params).ok
    S = random_system(4, (1, 1, 1, 1), rng)
    report = verify_relations(S, params)
    assert not report.ok and report.max_residual > 1e-3
    with pytest.raises(ParameterError):
        verify_relations(random_system(4, (1, 1, 1), rng), params)


def test_json_roundtrip(rng):
    S = random_system(4, (2, 0, 1), rng)
    S2 = SubspaceSystem.from_json(json.loads(json.dumps(S.to_json())))
    assert S2.ambient_dim == 4
    for a, b in zip(S.subspaces, S2.subspaces):
        np.testing.assert_array_equal(a, b)


def test_gram_psd_identity_diagonal(rng):
    for _ in range(100):
        d = int(rng.integers(1, 13))
        n = int(rng.integers(1, 8))
        dims = rng.integers(0, d + 1, size=n)
        S = random_system(d, dims, rng)
        G = gram(S)
        assert psd_check(G.matrix)
        for k, dk in enumerate(G.block_dims):
            np.testing.assert_allclose(G.block(k, k), np.eye(dk), atol=1e-12)


def test_orthogonal_implies_commute(rng):
    for _ in range(200):
        d = int(rng.integers(1, 7))
        S = random_system(d, rng.integers(0, d + 1, size=2), rng)
        if check_orthogonal(S, 0, 1):
            assert check_commute(S, 0, 1)
    # genuinely orthogonal random pairs
    for _ in range(50):
        d = int(rng.integers(2, 8))
        Q = random_system(d, (d,), rng).subspaces[0]
        k = int(rng.integers(1, d))
        S = SubspaceSystem(d, (Q[:, :k], Q[:, k:]))
        assert check_orthogonal(S, 0, 1) and check_commute(S, 0, 1)
