import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conelab.errors import ConstructionError, StabiliserError
from conelab.holonomy import printed_plane_wave_matrices
from conelab.lie_matrix import (MatrixAlgebra, StabElement, bbi_type, bracket, centre, conjugate_by_translation,
                                decomposability_probe, derived_algebra, direct_sum, embed, lie_closure, linear_part,
                                lorentz_frame, so_algebra, stab_decompose, translational_ideal)
from conelab.pseudo_linear import QuadraticSpace


def _rot(n, i, j):
    m = np.zeros((n, n))
    m[i, j], m[j, i] = -1.0, 1.0
    return m


def _brute_closure_dim(gens, rounds=6):
    """Oracle: repeatedly add all brackets and count the rank of the flattened span."""
    mats = list(gens)
    for _ in range(rounds):
        mats = mats + [a @ b - b @ a for a in mats for b in mats]
        flat = np.array([m.ravel() for m in mats])
        _, s, vt = np.linalg.svd(flat)
        r = int(np.sum(s > 1e-9 * s[0]))
        mats = list(vt[:r].reshape(r, *gens[0].shape))
    return len(mats)


def test_closure_single_rotation():
    assert lie_closure([_rot(2, 0, 1)]).dim == 1


def test_closure_two_rotations_gives_so3():
    gens = [_rot(3, 0, 1), _rot(3, 1, 2)]
    assert lie_closure(gens).dim == 3 == _brute_closure_dim(gens)


def test_closure_printed_plane_wave_pair_is_abelian_dim2():
    a, b = printed_plane_wave_matrices()
    alg = lie_closure([a, b])
    assert alg.dim == 2 and alg.is_abelian()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_closure_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    gens = [rng.standard_normal((4, 4)) * (rng.random((4, 4)) < 0.3) for _ in range(2)]
    gens = [g for g in gens if np.linalg.norm(g) > 1e-6]
    if not gens:
        return
    alg = lie_closure(gens)
    assert alg.dim == _brute_closure_dim(gens)
    assert alg.closure_residual() < 1e-9


def test_stab_round_trips():
    space, frame = lorentz_frame(3)
    g0 = frame.v0_metric(space)
    assert stab_decompose(np.zeros((5, 5)), frame, space).a == 0.0
    e = stab_decompose(embed(StabElement(1.0, np.zeros((3, 3)), np.zeros(3)), frame, space), frame, space)
    assert e.a == 1.0 and np.all(e.X == 0) and np.all(e.v == 0)
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3))
    J, w = a - a.T, rng.standard_normal(3)
    e = stab_decompose(embed(StabElement(0.0, J, w), frame, space), frame, space)
    assert np.max(np.abs(e.X - J)) < 1e-12 and np.max(np.abs(e.v - w)) < 1e-12
    assert g0.shape == (3, 3)


def test_stab_rejects_non_stabiliser():
    space, frame = lorentz_frame(2)
    m = so_algebra(space.metric).basis
    moving = [x for x in m if np.max(np.abs(x @ frame.e_minus)) > 1e-9]
    with pytest.raises(StabiliserError):
        stab_decompose(moving[0], frame, space)


def test_translational_ideal_cases():
    space, frame = lorentz_frame(3)
    full, _, _ = bbi_type("type2", so_algebra(np.eye(3)))
    assert translational_ideal(full, frame, space).dim == 3
    only_x = MatrixAlgebra(np.array([embed(StabElement(0.0, x, np.zeros(3)), frame, space)
                                     for x in so_algebra(np.eye(3)).basis]))
    assert translational_ideal(only_x, frame, space).dim == 0
    assert linear_part(only_x, frame, space).dim == 3


def test_conjugation_by_translation():
    space, frame = lorentz_frame(3)
    so3 = so_algebra(np.eye(3))
    v0 = np.array([0.3, -1.0, 0.5])
    alg = MatrixAlgebra(np.array([embed(StabElement(0.0, x, x @ v0), frame, space) for x in so3.basis]))
    same = conjugate_by_translation(alg, np.zeros(3), frame, space)
    assert np.allclose(same.basis, alg.basis)
    moved = conjugate_by_translation(alg, v0, frame, space)
    vs = [stab_decompose(m, frame, space).v for m in moved.basis]
    ws = [stab_decompose(m, frame, space).v for m in
          conjugate_by_translation(alg, -v0, frame, space).basis]
    assert min(max(np.max(np.abs(v)) for v in vs), max(np.max(np.abs(w)) for w in ws)) < 1e-12
    trans = MatrixAlgebra(np.array([embed(StabElement(0.0, np.zeros((3, 3)), t), frame, space) for t in np.eye(3)]))
    assert np.allclose(conjugate_by_translation(trans, v0, frame, space).basis, trans.basis)


def test_decomposability_probe():
    so2 = so_algebra(np.eye(2))
    r = decomposability_probe(direct_sum(so2, so2), QuadraticSpace(np.eye(4)))
    assert r.subspace is not None and r.subspace.dim == 2
    assert decomposability_probe(so_algebra(np.eye(3)), QuadraticSpace(np.eye(3))).subspace is None


def test_invariant_null_line_search():
    from conelab.lie_matrix import invariant_null_line_search

    alg, space, frame = bbi_type("type1", so_algebra(np.eye(3)))
    line = invariant_null_line_search(alg, space)
    assert line is not None and abs(abs(line.vectors[0, 0]) - 1.0) < 1e-12
    g = np.diag([-1.0, 1.0, 1.0])
    assert invariant_null_line_search(so_algebra(g), QuadraticSpace(g)) is None


def test_bbi_dimensions():
    so2, so3 = so_algebra(np.eye(2)), so_algebra(np.eye(3))
    assert bbi_type("type2", so2)[0].dim == 3
    assert bbi_type("type1", so3)[0].dim == 7
    assert bbi_type("type3", so2, {"f": lambda z: 1.0})[0].dim == 3


def test_bbi_type4_and_errors():
    so2 = so_algebra(np.eye(2))
    g0 = MatrixAlgebra(np.array([np.pad(so2.basis[0], ((0, 1), (0, 1)))]))
    t0 = np.eye(3)[:, :2]
    alg, space, frame = bbi_type("type4", g0, {"T0": t0, "f": lambda z: np.array([0.0, 0.0, 1.0])})
    assert alg.dim == 3 and translational_ideal(alg, frame, space).dim == 2
    with pytest.raises(ConstructionError):
        bbi_type("type3", so2, {"f": lambda z: 0.0})
    with pytest.raises(ConstructionError):
        bbi_type("type3", so_algebra(np.eye(3)), {"f": lambda z: 1.0})
    with pytest.raises(ConstructionError):
        bbi_type("type5", so2)


def test_centre_and_derived():
    so2, so3 = so_algebra(np.eye(2)), so_algebra(np.eye(3))
    s = direct_sum(so2, so3)
    assert len(centre(s)) == 1 and derived_algebra(s).dim == 3
    assert bracket(so2.basis[0], so2.basis[0]).any() == False  # noqa: E712
