import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conelab.errors import DefiniteSignatureError, DimensionError
from conelab.pseudo_linear import (QuadraticSpace, SubspaceBasis, gram_analysis, null_frame, null_frame_from,
                                   null_space, numerical_rank, range_basis, signature_of, skew_residual)


def test_gram_minkowski_null_line():
    r = gram_analysis(QuadraticSpace.standard(1, 1), SubspaceBasis(np.array([1.0, 1.0])))
    assert r.rank == 0 and r.is_totally_null and not r.is_nondegenerate


def test_gram_euclidean_line():
    r = gram_analysis(QuadraticSpace.standard(0, 2), SubspaceBasis(np.array([1.0, 0.0])))
    assert r.rank == 1 and r.is_nondegenerate and not r.is_totally_null


def test_gram_degenerate_plane_in_r13():
    space = QuadraticSpace.standard(1, 3)
    e_minus = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
    y = np.array([0.0, 0.0, 1.0, 0.0])
    r = gram_analysis(space, SubspaceBasis(np.column_stack([e_minus, y])))
    assert r.rank == 1 and not r.is_nondegenerate and not r.is_totally_null
    rad = r.radical.vectors[:, 0]
    assert abs(abs(rad @ e_minus) - 1.0) < 1e-12


def test_gram_dimension_mismatch():
    with pytest.raises(DimensionError):
        gram_analysis(QuadraticSpace.standard(0, 3), SubspaceBasis(np.array([1.0, 0.0])))


def test_null_frame_r11():
    space = QuadraticSpace.standard(1, 1)
    f = null_frame(space)
    assert f.n == 0
    g = space.metric
    assert abs(f.e_minus @ g @ f.e_minus) < 1e-14 and abs(f.e_plus @ g @ f.e_plus) < 1e-14
    assert abs(f.e_minus @ g @ f.e_plus - 1.0) < 1e-14


@pytest.mark.parametrize("t,s", [(1, 2), (2, 2), (1, 4), (3, 2)])
def test_null_frame_invariants(t, s):
    space = QuadraticSpace.standard(t, s)
    f = null_frame(space)
    assert f.residual(space) < 1e-10
    assert signature_of(f.v0_metric(space)) == (t - 1, s - 1)


def test_null_frame_definite_rejected():
    with pytest.raises(DefiniteSignatureError):
        null_frame(QuadraticSpace.standard(0, 3))


def test_null_frame_from_given_vector():
    g = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 4.0]])
    space = QuadraticSpace(g)
    f = null_frame_from(space, np.array([0.0, 1.0, 0.0]))
    assert f.residual(space) < 1e-12
    assert np.allclose(f.v0_metric(space), np.eye(1))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_null_frame_random_congruent_metric(t, s, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((t + s, t + s)) + 3 * np.eye(t + s)
    space = QuadraticSpace(a.T @ np.diag([-1.0] * t + [1.0] * s) @ a)
    assert null_frame(space).residual(space) < 1e-8


def test_rank_helpers():
    a = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])
    assert numerical_rank(a) == 1
    k = null_space(a)
    assert k.shape == (2, 1) and np.allclose(a @ k, 0)
    assert range_basis(a).shape == (3, 1)


def test_skew_residual():
    g = np.diag([-1.0, 1.0])
    boost = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert skew_residual(boost, g) == 0.0
    assert QuadraticSpace(g).is_skew(boost)
    assert skew_residual(np.eye(2), g) > 1
