"""Cone, double warped and exponential extensions, plus residual checks of their identities.

Coordinate layouts of the constructed charts:

* ``cone(base)``: (r, base coords), metric -dr^2 + r^2 g, r >= 0.1;
* ``double_warped(base)``: (u, v, base coords), metric 2 du dv + u^2 g, u >= 0.1;
* ``exponential_extension(base)``: (s, base coords), metric ds^2 + e^{2s} g.

Every residual function returns a single max-norm so that grid sweeps reduce
with ``max``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from . import jets
from .charts import (MetricChart, cov_deriv, curvature_jet, field_tp, geometry_jet,
                     homothety_residual, nabla_field)
from .errors import FrameError
from .pseudo_linear import numerical_rank

R_MIN = 0.1
U_MIN = 0.1


def _fresh_name(name, taken):
    while name in taken:
        name = name + "_"
    return name


def cone(base):
    """Time-like cone -dr^2 + r^2 g over ``base``."""
    n = base.dim + 1

    def comps(x):
        r = x[0]
        inner = base.components(x[1:])
        r2 = r * r
        rows = [[0.0] * n for _ in range(n)]
        rows[0][0] = -1.0
        for i in range(base.dim):
            for j in range(base.dim):
                e = inner[i][j]
                rows[i + 1][j + 1] = r2 * e if not (np.isscalar(e) and e == 0.0) else 0.0
        return rows

    t, s = base.signature
    return MetricChart(
        f"cone:{base.label}", (_fresh_name("r", base.coords),) + tuple(base.coords), (t + 1, s), comps,
        ((R_MIN, None),) + tuple(base.domain), ((0.5, 2.0),) + tuple(base.sample_box),
        {"construction": "cone", "base": base.label},
    )


def double_warped(base):
    """Double warped extension 2 du dv + u^2 g over ``base``."""
    n = base.dim + 2

    def comps(x):
        u = x[0]
        inner = base.components(x[2:])
        u2 = u * u
        rows = [[0.0] * n for _ in range(n)]
        rows[0][1] = rows[1][0] = 1.0
        for i in range(base.dim):
            for j in range(base.dim):
                e = inner[i][j]
                rows[i + 2][j + 2] = u2 * e if not (np.isscalar(e) and e == 0.0) else 0.0
        return rows

    t, s = base.signature
    names = (_fresh_name("u", base.coords), _fresh_name("v", base.coords)) + tuple(base.coords)
    return MetricChart(
        f"doubled:{base.label}", names, (t + 1, s + 1), comps,
        ((U_MIN, None), (None, None)) + tuple(base.domain),
        ((0.5, 2.0), (-1.0, 1.0)) + tuple(base.sample_box),
        {"construction": "double_warped", "base": base.label},
    )


def exponential_extension(base):
    """Exponential extension ds^2 + e^{2s} g over ``base``."""
    n = base.dim + 1

    def comps(x):
        w = jets.exp(2.0 * x[0])
        inner = base.components(x[1:])
        rows = [[0.0] * n for _ in range(n)]
        rows[0][0] = 1.0
        for i in range(base.dim):
            for j in range(base.dim):
                e = inner[i][j]
                rows[i + 1][j + 1] = w * e if not (np.isscalar(e) and e == 0.0) else 0.0
        return rows

    t, s = base.signature
    return MetricChart(
        f"expext:{base.label}", (_fresh_name("s", base.coords),) + tuple(base.coords), (t, s + 1), comps,
        ((None, None),) + tuple(base.domain), ((-1.0, 1.0),) + tuple(base.sample_box),
        {"construction": "exponential_extension", "base": base.label},
    )


def psi(x, u_scale=1.0):
    """psi(r, s, p) = (r e^s, -r e^{-s} / 2, p); ``u_scale`` perturbs u for detector tests."""
    r, s = x[0], x[1]
    return [u_scale * r * jets.exp(s), -0.5 * r * jets.exp(-s)] + list(x[2:])


def psi_residual(base, p, u_scale=1.0):
    """Max-norm of psi^* (2 du dv + u^2 g) - (-dr^2 + r^2 (ds^2 + e^{2s} g)) at ``p``.

    ``p`` lies in the chart of cone(exponential_extension(base)).
    """
    target = cone(exponential_extension(base))
    doubled = double_warped(base)
    p = np.asarray(p, dtype=float)
    target.require_domain(p)
    space = jets.jet_space(target.dim, 1)
    x = jets.variables(space, p)
    image = psi(x, u_scale)
    jac = np.array([[e.c[1 + b] for b in range(target.dim)] for e in image])  # jac[a, b] = d psi^a / d x^b
    gt = doubled.metric(np.array([jets.value(e) for e in image]))
    pulled = jac.T @ gt @ jac
    return float(np.max(np.abs(pulled - target.metric(p))))


# ----------------------------------------------------------------------------
# cone identities

@dataclass(frozen=True)
class ConeResiduals:
    lc: float
    curv: float
    ric: float

    def max(self):
        return max(self.lc, self.curv, self.ric)


def euler_field(x):
    """xi = r d_r on a cone chart."""
    return [x[0]] + [0.0] * (len(x) - 1)


def cone_identity_residuals(base, p, r=1.0):
    """Residuals of the cone connection, curvature and Ricci identities at (r, p).

    lc:   nabla^_X Y = nabla_X Y + g(X, Y) xi and nabla^ xi = Id;
    curv: R^(X, Y) Z = R(X, Y) Z + g(Y, Z) X - g(X, Z) Y and xi inserted into R^ vanishes;
    ric:  Ric^ = Ric + (n - 1) g on base vectors and xi inserted into Ric^ vanishes.
    """
    c = cone(base)
    n = base.dim
    q = np.r_[r, np.asarray(p, dtype=float)]
    base_cj = curvature_jet(base, p, 0)
    cone_cj = curvature_jet(c, q, 0)
    g = base_cj.metric_at_point

    # connection: gam^[i, j, :] for base i, j; xi = r d_r so g(X, Y) xi has r-component r g_ij
    gh = cone_cj.christoffel
    expected = np.zeros((n, n, n + 1))
    expected[:, :, 1:] = base_cj.christoffel
    expected[:, :, 0] = r * g
    lc = np.max(np.abs(gh[1:, 1:, :] - expected))
    lc = max(lc, homothety_residual(c, euler_field, q, 1.0))

    rh = cone_cj.curvature
    eye = np.eye(n)
    model = base_cj.curvature + np.einsum("jk,il->ijkl", g, eye) - np.einsum("ik,jl->ijkl", g, eye)
    curv = np.max(np.abs(rh[1:, 1:, 1:, 1:] - model))
    curv = max(curv, np.max(np.abs(rh[1:, 1:, 1:, 0])))  # R^(X, Y) Z has no d_r part
    # xi = r d_r inserted into the first, third and (lowered) fourth slot
    rlow = cone_cj.lowered
    curv = max(curv, r * np.max(np.abs(rh[0])), r * np.max(np.abs(rh[:, :, 0, :])),
               r * np.max(np.abs(rlow[..., 0])))
    xi = np.zeros(n + 1)
    xi[0] = r

    rich = cone_cj.ricci()
    ric = np.max(np.abs(rich[1:, 1:] - (base_cj.ricci() + (n - 1) * g)))
    ric = max(ric, np.max(np.abs(rich @ xi)))
    return ConeResiduals(float(lc), float(curv), float(ric))


def cone_identity_grid(base, points=None):
    """Maximum of :func:`cone_identity_residuals` over the base sample grid."""
    pts = base.grid if points is None else points
    res = [cone_identity_residuals(base, p) for p in pts]
    return ConeResiduals(max(x.lc for x in res), max(x.curv for x in res), max(x.ric for x in res))


def cone_curvature_norm(base, points=None):
    """Max |R^| over the cone sample grid (zero for a flat cone)."""
    c = cone(base)
    pts = c.grid if points is None else points
    return max(float(np.max(np.abs(curvature_jet(c, p, 0).curvature))) for p in pts)


# ----------------------------------------------------------------------------
# doubled-cone curvature derivatives

def c_factor(p, q):
    """c(p, 0) = 1 and c(p, q) = (-1)^q (p+2)(p+3)...(p+q+1)."""
    out = 1.0
    for j in range(q):
        out *= -(p + 2 + j)
    return out


def doubled_derivative_residuals(base, p, pmax, qmax, u=1.0, v=0.0, order=None, detail=False):
    """Compare jet-computed derivatives of the doubled curvature with their closed form.

    For every q <= qmax and p' <= pmax, with q d_u-derivatives outermost and
    base coordinate vectors elsewhere, the derivative must equal

        c(p', q) / u^q [ (nabla^{p'} R)(X, Y) Z
                         - u sum_i (nabla^{p'-1}_{omit i} R)(X, Y, Z, X_i) d_v ].

    Also checked: inserting d_v into any slot gives zero, and a d_u slot
    commutes with the adjacent base slot.  Returns the max residual, or a
    dict of per-(p, q) residuals when ``detail`` is set.
    """
    p = np.asarray(p, dtype=float)
    dw = double_warped(base)
    k = pmax + qmax
    q_pt = np.r_[u, v, p]
    tcj = curvature_jet(dw, q_pt, k, order)
    bcj = curvature_jet(base, p, pmax)
    g = bcj.metric_at_point
    nb = base.dim
    base_ders = [bcj.curvature] + bcj.derivs
    til = [tcj.curvature] + tcj.derivs
    sl = slice(2, None)
    table = {}
    worst = 0.0
    for pp in range(pmax + 1):
        for qq in range(qmax + 1):
            tensor = til[pp + qq]
            idx = (0,) * qq + (sl,) * (pp + 3)
            got = tensor[idx]  # shape (nb,)*(pp+3) + (nb+2,)
            expected = np.zeros_like(got)
            cf = c_factor(pp, qq) / u ** qq
            expected[..., 2:] = cf * base_ders[pp]
            if pp >= 1:
                lowered = np.einsum("...m,ml->...l", base_ders[pp - 1], g)  # (c.., X, Y, Z, W)
                total = np.zeros((nb,) * (pp + 3))
                for i in range(pp):
                    # move W into position i of the derivative slots
                    moved = np.moveaxis(lowered, -1, i)
                    total = total + moved
                expected[..., 1] = -cf * u * total
            res = float(np.max(np.abs(got - expected)))
            table[(pp, qq)] = res
            worst = max(worst, res)
    # d_v inserted anywhere vanishes
    for kk, tensor in enumerate(til):
        for slot in range(kk + 3):
            worst = max(worst, float(np.max(np.abs(np.take(tensor, 1, axis=slot)))))
    # d_u commutes with an adjacent base derivative slot
    for kk in range(2, k + 1):
        tensor = til[kk]
        a = tensor[(0,) + (sl,) + (slice(None),) * (kk + 2)]
        b = tensor[(sl,) + (0,) + (slice(None),) * (kk + 2)]
        worst = max(worst, float(np.max(np.abs(a - b))))
    table["max"] = worst
    return table if detail else worst


def delup_factor(base, p, q, u=1.0):
    """Observed ratio (nabla_{d_u}^q R~)(X,Y)Z / R(X,Y)Z, to compare with (-1)^q (q+1)!/u^q."""
    dw = double_warped(base)
    tcj = curvature_jet(dw, np.r_[u, 0.0, p], q)
    bcj = curvature_jet(base, p, 0)
    t = tcj.curvature if q == 0 else tcj.derivs[q - 1]
    got = t[(0,) * q + (slice(2, None),) * 3][..., 2:]
    ref = bcj.curvature
    i = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    return float(got[i] / ref[i])


# ----------------------------------------------------------------------------
# parallel objects and their lifts

def parallel_residual(chart, field_fn, p):
    """Max-norm of nabla of a vector field at ``p``."""
    return float(np.max(np.abs(nabla_field(chart, field_fn, p))))


@dataclass(frozen=True)
class LiftedField:
    base_field: Callable
    total_field: Callable
    kind: str
    residual: float


def lift_field(xi, f, a):
    """xi~ = f d_v + xi / u - a d_u as a field on the doubled chart."""

    def total(x):
        u = x[0]
        comps = xi(x[2:])
        inv_u = u ** -1 if isinstance(u, jets.Jet) else 1.0 / u
        return [-float(a), f(x[2:])] + [c * inv_u for c in comps]

    return total


def lift_parallel_vector(base, xi, f, a, points=None, tol=1e-8):
    """Lift a homothetic gradient field and report the parallelness residual on the doubled grid.

    Preconditions checked on the base grid: nabla xi = a Id and df = xi^flat,
    each to ``tol``.  A violation raises :class:`FrameError` naming the point.
    """
    for p in base.grid:
        h = homothety_residual(base, xi, p, a)
        if h > tol:
            raise FrameError(f"xi is not homothetic with factor {a} at {p.tolist()}: residual {h:.3g}")
        space = jets.jet_space(base.dim, 1)
        x = jets.variables(space, p)
        fj = f(x)
        df = np.array([fj.c[1 + i] for i in range(base.dim)]) if isinstance(fj, jets.Jet) else np.zeros(base.dim)
        flat = base.metric(p) @ np.array([jets.value(c) for c in xi(list(p))], dtype=float)
        if np.max(np.abs(df - flat)) > tol:
            raise FrameError(f"df != xi^flat at {p.tolist()}")
    dw = double_warped(base)
    total = lift_field(xi, f, a)
    pts = dw.grid if points is None else points
    res = max(parallel_residual(dw, total, q) for q in pts)
    return LiftedField(xi, total, "parallel_vector", res)


def parallel_plane_residual(chart, fields, p):
    """Largest component of nabla_X F_i outside span{F_1, F_2}, over coordinate directions X.

    "Outside" is measured with the Euclidean projector of the coordinate
    components, since the span is typically totally null.
    """
    p = np.asarray(p, dtype=float)
    geo = geometry_jet(chart, p, 2)
    vals, nabs = [], []
    for fn in fields:
        t = field_tp(geo.space, fn, p)
        vals.append(t[0])
        nabs.append(cov_deriv(geo.space, geo.gam, t, "u")[0])
    frame = np.column_stack(vals)
    if numerical_rank(frame, 1e-8) < frame.shape[1]:
        raise FrameError(f"fields are dependent at {p.tolist()}")
    q, _ = np.linalg.qr(frame)
    proj = np.eye(chart.dim) - q @ q.T
    return float(max(np.max(np.abs(nab @ proj.T)) for nab in nabs))


def recurrence_residual(chart, field_fn, p):
    """Fit nabla chi = alpha (x) chi by least squares; return (residual, alpha)."""
    nab = nabla_field(chart, field_fn, p)  # nab[c, l]
    chi = np.array([jets.value(c) for c in field_fn(list(np.asarray(p, float)))], dtype=float)
    alpha = nab @ chi / (chi @ chi)
    return float(np.max(np.abs(nab - np.outer(alpha, chi)))), alpha


def proportionality_residual(a, b):
    """Distance of ``a`` from the line through ``b``, relative to |a|."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    lam = (a @ b) / (b @ b)
    return float(np.linalg.norm(a - lam * b) / max(np.linalg.norm(a), 1e-300))


def _monomials(nvars, degree):
    space = jets.jet_space(nvars, degree)
    return space.exponents


def recurrent_candidate_search(base, xi, f, degree=2, points=None):
    """Minimal recurrence residual of zeta = (f + h) d_v + xi / u over polynomial h.

    ``h`` ranges over polynomials of the given degree in all doubled
    coordinates.  The recurrence form is eliminated pointwise by Euclidean
    projection, and the coefficients of h are fitted with
    :func:`scipy.optimize.least_squares`.  A clearly positive minimum is
    evidence that no recurrent field of this form exists.
    """
    dw = double_warped(base)
    pts = dw.grid if points is None else np.asarray(points)
    n = dw.dim
    exps = _monomials(n, degree)
    zeta0 = lift_field(xi, f, 0.0)
    nab0, val0, mono, dmono = [], [], [], []
    for q in pts:
        nab0.append(nabla_field(dw, zeta0, q))
        val0.append(np.array([jets.value(c) for c in zeta0(list(q))], dtype=float))
        mono.append(np.prod(q[None, :] ** exps, axis=1))
        d = np.zeros((n, len(exps)))
        for c in range(n):
            e = exps.copy()
            fac = e[:, c].astype(float)
            e[:, c] = np.maximum(e[:, c] - 1, 0)
            d[c] = fac * np.prod(q[None, :] ** e, axis=1)
        dmono.append(d)
    nab0, val0 = np.array(nab0), np.array(val0)
    mono, dmono = np.array(mono), np.array(dmono)

    def residual(coef):
        # nabla (h d_v) = dh (x) d_v since d_v is parallel
        nab = nab0.copy()
        nab[:, :, 1] += dmono @ coef
        val = val0.copy()
        val[:, 1] += mono @ coef
        unit = val / np.linalg.norm(val, axis=1, keepdims=True)
        perp = nab - np.einsum("pcl,pl,pk->pck", nab, unit, unit)
        return perp.ravel()

    fit = least_squares(residual, np.zeros(len(exps)), method="lm", xtol=1e-14, ftol=1e-14)
    return float(np.max(np.abs(residual(fit.x)))), fit.x
