import math

import numpy as np
import pytest
import sympy as sp

from conelab import jets
from conelab.errors import ConfigurationError
from conelab.expressions import parse


def _taylor_oracle(expr, syms, point, order):
    """Coefficients of the Taylor polynomial as {exponent tuple: value}, via sympy."""
    out = {}
    space = jets.jet_space(len(syms), order)
    for ex in space.exponents:
        d = expr
        for s, k in zip(syms, ex):
            d = sp.diff(d, s, int(k))
        val = float(d.subs(dict(zip(syms, point))))
        out[tuple(int(k) for k in ex)] = val / math.prod(math.factorial(int(k)) for k in ex)
    return out


def test_jet_arithmetic_matches_sympy_taylor():
    x, y = sp.symbols("x y")
    expr = sp.exp(x) * sp.sin(y) / (1 + x ** 2 + y ** 2) + sp.sqrt(2 + x * y) * sp.log(3 + y)
    point = (0.3, -0.7)
    order = 4
    space = jets.jet_space(2, order)
    X = jets.variables(space, point)
    j = jets.exp(X[0]) * jets.sin(X[1]) / (1 + X[0] ** 2 + X[1] ** 2) + jets.sqrt(2 + X[0] * X[1]) * jets.log(3 + X[1])
    oracle = _taylor_oracle(expr, (x, y), point, order)
    for i, ex in enumerate(space.exponents):
        assert j.c[i] == pytest.approx(oracle[tuple(int(k) for k in ex)], abs=1e-12)


def test_truncation_is_prefix():
    space = jets.jet_space(3, 4)
    assert space.count(2) == 10 and space.count(4) == 35


def test_tensor_product_multiply_matches_scalar_jets():
    space = jets.jet_space(2, 3)
    X = jets.variables(space, [0.2, 0.5])
    a = jets.as_tp(space, [[X[0], X[1]], [X[0] * X[1], jets.cos(X[0])]])
    b = jets.as_tp(space, [jets.exp(X[1]), X[0] ** 2])
    prod = jets.tp_mul(space, "ij,j->i", a, b)
    ref = [X[0] * jets.exp(X[1]) + X[1] * X[0] ** 2, X[0] * X[1] * jets.exp(X[1]) + jets.cos(X[0]) * X[0] ** 2]
    for i in range(2):
        assert np.allclose(prod[:, i], ref[i].c, atol=1e-14)


def test_expression_parser_values_and_jets():
    e = parse("exp(z)*y^2 + 2*sin(pi*x) - y/2 + sqrt(4) + log(e)", ("x", "y", "z"))
    assert e(0.5, 2.0, 0.0) == pytest.approx(4 + 2 - 1 + 2 + 1)
    space = jets.jet_space(3, 2)
    X = jets.variables(space, [0.5, 2.0, 0.0])
    j = e(*X)
    assert jets.value(j) == pytest.approx(8.0)
    assert j.c[1 + 2] == pytest.approx(4.0)  # d/dz exp(z) y^2 at z=0, y=2
    assert np.allclose(e(np.zeros(3), np.ones(3), np.zeros(3)), [1 - 0.5 + 2 + 1] * 3)


@pytest.mark.parametrize("bad", ["import os", "x.__class__", "y + ", "q + 1", "abs(x)", "x if y else 1"])
def test_expression_parser_rejects(bad):
    with pytest.raises(ConfigurationError):
        parse(bad, ("x", "y"))


def test_power_synonym():
    assert parse("x**3", ("x",))(2.0) == parse("x^3", ("x",))(2.0) == 8.0
