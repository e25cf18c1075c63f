from math import factorial

import numpy as np
import pytest
import sympy as sp

from conelab import jets
from conelab.charts import cahen_wallach, curvature_jet, flat, hyperbolic, pp_wave, sphere
from conelab.cones import (c_factor, cone, cone_curvature_norm, cone_identity_grid, cone_identity_residuals,
                           delup_factor, double_warped, doubled_derivative_residuals, exponential_extension,
                           lift_field, lift_parallel_vector, parallel_plane_residual, parallel_residual,
                           psi_residual, recurrent_candidate_search)
from conelab.errors import FrameError
from sympy_oracle import evaluate, riemann


def test_cone_signatures():
    assert cone(sphere(2)).signature == (1, 2)
    assert double_warped(sphere(2)).signature == (1, 3)
    assert exponential_extension(flat(0, 1)).signature == (0, 2)


def test_cone_identities_catalog():
    assert cone_identity_grid(sphere(2)).max() < 1e-9
    assert cone_identity_grid(cahen_wallach(np.eye(2))).max() < 1e-8
    assert cone_identity_residuals(flat(0, 2), [0.3, 0.4], r=1.7).max() < 1e-10


def test_flat_cone_theorem():
    assert cone_curvature_norm(hyperbolic(2)) < 1e-9
    assert cone_curvature_norm(flat(0, 2)) > 0.1  # flat base has kappa = 0 != -1


def test_exponential_extension_of_line_is_hyperbolic():
    e = exponential_extension(flat(0, 1))
    s, x = sp.symbols("s x")
    oracle = evaluate(riemann(sp.diag(1, sp.exp(2 * s)), [s, x]), [s, x], [0.3, 0.1])
    got = curvature_jet(e, [0.3, 0.1]).curvature
    assert np.max(np.abs(got - oracle)) < 1e-13
    assert got[0, 1, 1, 0] == pytest.approx(-1.8221188003905089, abs=1e-13)  # -e^{0.6}


@pytest.mark.parametrize("base", [flat(0, 1), sphere(2)])
def test_psi_isometry(base):
    target = cone(exponential_extension(base))
    assert max(psi_residual(base, p) for p in target.grid) < 1e-12


def test_psi_detector():
    base = sphere(2)
    p = cone(exponential_extension(base)).grid[0]
    assert 1e-3 < psi_residual(base, p, u_scale=1.01) < 1.0


def test_c_factor():
    assert c_factor(3, 0) == 1.0
    assert c_factor(0, 2) == 6.0  # (-1)^2 * 2 * 3
    assert c_factor(1, 3) == -60.0  # -(3 * 4 * 5)


def test_doubled_derivatives_sphere():
    assert doubled_derivative_residuals(sphere(2), [1.0, 0.3], 1, 2, u=1.0) < 1e-8
    assert doubled_derivative_residuals(sphere(2), [0.8, -0.2], 2, 2, u=0.5) < 1e-8


def test_doubled_derivatives_flat_base_vanish():
    cj = curvature_jet(double_warped(flat(0, 2)), [1.3, 0.2, 0.1, 0.4], 2)
    assert np.max(np.abs(cj.curvature)) < 1e-13 and max(np.max(np.abs(d)) for d in cj.derivs) < 1e-12


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("q", [0, 1, 2, 3])
def test_delup_factor(u, q):
    assert delup_factor(sphere(2), [1.0, 0.3], q, u) == pytest.approx((-1) ** q * factorial(q + 1) / u ** q, rel=1e-10)


def test_doubled_sympy_oracle():
    u, v, th, ph = xs = sp.symbols("u v th ph")
    g = sp.zeros(4)
    g[0, 1] = g[1, 0] = 1
    g[2, 2] = u ** 2
    g[3, 3] = u ** 2 * sp.sin(th) ** 2
    pt = [1.5, 0.2, 1.0, 0.3]
    oracle = evaluate(riemann(g, list(xs)), list(xs), pt)
    assert np.max(np.abs(curvature_jet(double_warped(sphere(2)), pt).curvature - oracle)) < 1e-13


def test_lift_parallel_vector_flat_line():
    res = lift_parallel_vector(flat(0, 1), lambda x: [1.0], lambda x: x[0], 0.0)
    assert res.residual < 1e-10


def test_lift_homothetic_vector():
    res = lift_parallel_vector(flat(0, 1), lambda x: [x[0]], lambda x: 0.5 * x[0] ** 2, 1.0)
    assert res.residual < 1e-9


def test_lift_precondition_reported():
    with pytest.raises(FrameError):
        lift_parallel_vector(sphere(2), lambda x: [1.0, 0.0], lambda x: x[0], 0.0)


def test_pp_wave_lift_and_parallel_plane():
    base = pp_wave("y1^2 + y2^2", 2)
    lifted = lift_parallel_vector(base, lambda x: [1.0, 0.0, 0.0, 0.0], lambda x: x[3], 0.0)
    assert lifted.residual < 1e-10
    dw = double_warped(base)

    def dv(x):
        return [0.0, 1.0] + [0.0] * 4

    for q in dw.grid[:8]:
        assert parallel_residual(dw, dv, q) < 1e-12
        assert parallel_plane_residual(dw, [dv, lifted.total_field], q) < 1e-9


def test_parallel_plane_flat_and_dependent():
    f = flat(0, 2)
    e1, e2 = (lambda x: [1.0, 0.0]), (lambda x: [0.0, 1.0])
    assert parallel_plane_residual(f, [e1, e2], [0.1, 0.2]) == 0.0
    with pytest.raises(FrameError):
        parallel_plane_residual(f, [e1, e1], [0.1, 0.2])


def test_recurrent_search_finds_parallel_lift():
    # xi = d_x on flat R: the parallel lift x d_v + d_x / u is recurrent with h = 0
    res, coef = recurrent_candidate_search(flat(0, 1), lambda x: [1.0], lambda x: x[0], degree=1)
    assert res < 1e-8


def test_lift_field_formula():
    total = lift_field(lambda x: [2.0], lambda x: 3.0 * x[0], 0.5)
    vals = total([2.0, 0.0, 1.5])
    assert vals == [-0.5, 4.5, 1.0]
