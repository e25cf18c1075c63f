import numpy as np
import pytest
import sympy as sp

from conelab.charts import (cahen_wallach, chart_catalog, constant_curvature_residual, curvature_jet, custom, flat,
                            homothety_residual, hyperbolic, plane_wave_exp, pp_wave, ricci, sample_grid, sphere)
from conelab.cones import cone, double_warped, euler_field
from conelab.errors import ConfigurationError, SingularMetricError
from sympy_oracle import evaluate, riemann

# frozen symbolic values (independent sympy computation, same conventions)
S2_R_THPHPHTH_AT_1 = 0.7080734182735712  # sin^2(1)
PW_R_YZZY_AT_Z03 = -1.3498588075760032  # -e^{0.3}
CONE_S2_R_AT_R2 = 1.4161468365471424


def test_flat_is_flat():
    cj = curvature_jet(flat(1, 2), [0.1, 0.2, 0.3], 2)
    assert np.max(np.abs(cj.christoffel)) == 0 and np.max(np.abs(cj.curvature)) == 0
    assert all(np.max(np.abs(d)) == 0 for d in cj.derivs)
    assert np.max(np.abs(ricci(flat(0, 3), [0.0, 0.0, 0.0]))) == 0


def test_sphere_frozen_entries():
    r = curvature_jet(sphere(2), [1.0, 0.3]).curvature
    assert r[0, 1, 1, 0] == pytest.approx(S2_R_THPHPHTH_AT_1, abs=1e-14)
    assert r[0, 1, 0, 1] == pytest.approx(-1.0, abs=1e-14)


@pytest.mark.parametrize("name,point", [("sphere3", [1.0, 0.7, 0.2]), ("plane_wave", [0.2, 0.5, 0.3]),
                                        ("cone_sphere", [2.0, 1.0, 0.3])])
def test_curvature_against_sympy(name, point):
    if name == "sphere3":
        a, b, c = xs = sp.symbols("a b c")
        g = sp.diag(1, sp.sin(a) ** 2, sp.sin(a) ** 2 * sp.sin(b) ** 2)
        chart = sphere(3)
    elif name == "plane_wave":
        x, y, z = xs = sp.symbols("x y z")
        g = sp.Matrix([[0, 0, 1], [0, 1, 0], [1, 0, sp.exp(z) * y ** 2]])
        chart = plane_wave_exp()
    else:
        r, th, ph = xs = sp.symbols("r th ph")
        g = sp.diag(-1, r ** 2, r ** 2 * sp.sin(th) ** 2)
        chart = cone(sphere(2))
    oracle = evaluate(riemann(g, list(xs)), list(xs), point)
    got = curvature_jet(chart, point).curvature
    assert np.max(np.abs(got - oracle)) < 1e-12
    if name == "plane_wave":
        assert got[1, 2, 2, 1] == pytest.approx(PW_R_YZZY_AT_Z03, abs=1e-13)
    if name == "cone_sphere":
        assert got[1, 2, 2, 1] == pytest.approx(CONE_S2_R_AT_R2, abs=1e-13)


def test_covariant_derivative_vanishes_on_symmetric_spaces():
    for chart, p in [(sphere(2), [1.0, 0.3]), (hyperbolic(2), [0.2, 1.1]), (cahen_wallach(np.eye(2)), [0.1] * 4)]:
        cj = curvature_jet(chart, p, 2)
        assert max(np.max(np.abs(d)) for d in cj.derivs) < 1e-12


def test_second_bianchi_on_plane_wave():
    cj = curvature_jet(plane_wave_exp(), [0.1, 0.4, -0.2], 1)
    d = cj.derivs[0]  # (c, i, j, k, l)
    cyc = d + np.transpose(d, (1, 2, 0, 3, 4)) + np.transpose(d, (2, 0, 1, 3, 4))
    assert np.max(np.abs(cyc)) < 1e-12


def test_ricci_einstein_sphere_and_ricci_flat_cone():
    p = [1.1, -0.4]
    assert np.max(np.abs(ricci(sphere(2), p) - sphere(2).metric(p))) < 1e-12
    # H^3 has Ric = -2 g = (1 - n) g, so its cone is Ricci-flat
    q = [1.3, 0.2, 0.5, 0.9]
    assert np.max(np.abs(ricci(cone(hyperbolic(3)), q))) < 1e-8


def test_constant_curvature_residuals():
    assert constant_curvature_residual(sphere(2), [1.0, 0.3], 1.0) < 1e-9
    assert constant_curvature_residual(hyperbolic(2), [0.2, 1.1], -1.0) < 1e-9
    assert constant_curvature_residual(sphere(2), [1.0, 0.3], 0.0) > 0.5


def test_homothety_residuals():
    assert homothety_residual(cone(sphere(2)), euler_field, [1.4, 1.0, 0.3], 1.0) < 1e-9

    def U(x):
        return [x[0], x[1]] + [0.0] * (len(x) - 2)

    assert homothety_residual(double_warped(sphere(2)), U, [1.2, 0.3, 1.0, 0.3], 1.0) < 1e-9

    def dx(x):
        return [1.0, 0.0]

    assert homothety_residual(flat(0, 2), dx, [0.3, 0.1], 0.0) == 0.0


def test_catalog_signatures():
    cw = chart_catalog("cahen_wallach", {"S": np.diag([1.0, 1.0])})
    assert cw.signature == (1, 3) and cw.dim == 4
    pw = chart_catalog("plane_wave_exp")
    assert pw.signature == (1, 2)
    g = pw.metric([0.0, 0.5, 0.3])
    assert g[2, 2] == pytest.approx(np.exp(0.3) * 0.25) and g[0, 2] == 1.0 and g[1, 1] == 1.0
    assert chart_catalog("sphere", {"n": 2}).signature == (0, 2)
    for c in (cw, pw, sphere(2), hyperbolic(2)):
        assert c.check_signature()


def test_catalog_rejections():
    with pytest.raises(ConfigurationError):
        cahen_wallach(np.diag([1.0, 0.0]))
    with pytest.raises(ConfigurationError):
        chart_catalog("klein_bottle")


def test_custom_chart_matches_catalog():
    c = custom({"coords": ["x", "y", "z"], "signature": [1, 2],
                "metric": {"x,z": "1", "y,y": "1", "z,z": "exp(z)*y^2"}})
    p = [0.2, 0.5, 0.3]
    assert np.allclose(curvature_jet(c, p, 1).derivs[0], curvature_jet(plane_wave_exp(), p, 1).derivs[0], atol=1e-13)


def test_custom_chart_bad_signature():
    with pytest.raises(SingularMetricError):
        custom({"coords": ["x", "y"], "signature": [0, 2], "metric": [["1", "0"], ["0", "-1"]]})


def test_sample_grid_deterministic_and_inside_box():
    a = sample_grid(sphere(2))
    b = sample_grid(sphere(2))
    assert a.shape == (32, 2) and np.array_equal(a, b)
    assert np.all(a[:, 0] > 0.4) and np.all(a[:, 0] < np.pi - 0.4)


def test_pp_wave_string_profile():
    c = pp_wave("y1^2 + y2^2", 2)
    assert c.signature == (1, 3)
    r = curvature_jet(c, [0.0, 0.1, 0.2, 0.3]).curvature
    # R(d_y1, d_z) d_z = -f_{y1 y1} d_y1 with metric coefficient 2 f
    assert r[1, 3, 3, 1] == pytest.approx(-2.0, abs=1e-12)
