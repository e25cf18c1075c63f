"""Metrics whose time-like cone carries a parallel totally null 2-plane.

On M = M0 x R^3 with coordinates (x^1..x^m, t, s, u) the metric is

    g = ds^2 + e^{-2s} g0(u) + 2 du eta,

so g_ua = eta_a for a != u and g_uu = 2 eta_u.  The general solution of the
first-order system for eta is built from three pieces of data:

    eta_t = f1(u),   eta_s = 2 t f1(u) + f2(x, s, u),
    eta_i = h_i = e^{-2s} (c_i(x, u) + int_0^s e^{2 sigma} d_i f2(x, sigma, u) d sigma).

The integral is evaluated by Gauss-Legendre quadrature on s tau, tau in
[0, 1], so it works unchanged on jets.  V = d_t and Z = d_s then satisfy the
fundamental equations with

    alpha = Z^flat + f_alpha V^flat,  f_alpha = d_t eta_u / eta_t^2 - 2 eta_s / eta_t,
    beta(V) = 2,  beta(Z) = d_s eta_s / eta_t,
    beta(d_i) = (d_i eta_s + d_s eta_i + 2 eta_i) / (2 eta_t),
    beta(d_u) = (d_s eta_u - eta_s^2 + 2 eta_u) / eta_t,

and the cone over M has the parallel totally null plane span{V, xi + Z}.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import jets
from .charts import MetricChart, cov_deriv, field_tp, geometry_jet, nabla_field
from .cones import cone, parallel_plane_residual
from .errors import ConfigurationError, ConstructionError, FrameError, SingularMetricError
from .expressions import parse
from .pseudo_linear import signature_of

NODES_PER_UNIT = 32
F_MIN = 1e-6
DEFAULT_DOMAIN = {"x": (-1.0, 1.0), "t": (-1.0, 1.0), "s": (-1.0, 1.0), "u": (0.1, 2.0)}


def _zero(*args):
    return 0.0


@dataclass(frozen=True)
class NullPlaneData:
    """Free data of the local form: g0(u), f1(u), f2(x, s, u), c(x, u) and optionally eta_u.

    Callables take coordinates as separate arguments, with ``x`` a list of
    the m0 coordinates of M0: ``g0(x, u)`` returns an m0 x m0 nested list,
    ``f1(u)``, ``f2(x, s, u)``, ``c(x, u)`` a list of m0 entries and
    ``eta_u(x, t, s, u)``.  All must accept floats, arrays and jets.
    """

    m0_dim: int
    g0: Callable
    f1: Callable
    f2: Callable = _zero
    c: Optional[Callable] = None
    eta_u: Callable = _zero
    domain: dict = field(default_factory=lambda: dict(DEFAULT_DOMAIN))
    label: str = "null_plane"
    x_names: tuple = ()

    def __post_init__(self):
        if self.m0_dim < 0:
            raise ConstructionError("m0_dim must be non-negative")
        dom = dict(DEFAULT_DOMAIN)
        dom.update(self.domain or {})
        object.__setattr__(self, "domain", dom)
        if not self.x_names:
            object.__setattr__(self, "x_names", tuple(f"x{i + 1}" for i in range(self.m0_dim)))
        if len(self.x_names) != self.m0_dim:
            raise ConstructionError("x_names must have m0_dim entries")
        lo, hi = dom["u"]
        us = np.linspace(lo, hi, 257)
        vals = np.broadcast_to(np.asarray(jets.value(self.f1(us)), float), us.shape)
        # a sign change means a zero between samples even when no sample is small
        if not np.all(np.isfinite(vals)) or np.min(np.abs(vals)) < F_MIN or np.ptp(np.sign(vals)) > 0:
            k = int(np.argmin(np.abs(vals)))
            raise ConstructionError(
                f"f1 must be nowhere vanishing on u in [{lo}, {hi}]; |f1({us[k]:.4g})| = {abs(vals[k]):.3g}")

    def c_values(self, x, u):
        if self.c is None:
            return [0.0] * self.m0_dim
        out = list(self.c(x, u))
        if len(out) != self.m0_dim:
            raise ConstructionError(f"c must return {self.m0_dim} entries")
        return out


# ----------------------------------------------------------------------------
# eta

def _coordinate_layout(x):
    """Jet space, values and variable index of each coordinate argument.

    Jet arguments must be plain coordinate jets (value plus one unit linear
    term, or constants); floats and arrays get a private jet space.
    """
    if any(isinstance(xi, jets.Jet) for xi in x):
        space = next(xi.space for xi in x if isinstance(xi, jets.Jet))
        vals, idx = [], []
        for xi in x:
            if not isinstance(xi, jets.Jet):
                vals.append(np.asarray(xi, float))
                idx.append(None)
                continue
            lin = xi.c[1:1 + space.nvars] if space.order >= 1 else np.zeros((0,))
            rest = xi.c[space.count(1):] if space.order >= 1 else np.zeros((0,))
            nz = [k for k in range(lin.shape[0]) if np.any(lin[k])]
            if np.any(rest) or len(nz) > 1 or any(np.any(lin[k] != 1.0) for k in nz):
                raise ConfigurationError("eta components need coordinate jets, not composite ones")
            vals.append(xi.c[0])
            idx.append(nz[0] if nz else None)
        return space.nvars, space.order, vals, idx, True
    vals = [np.asarray(xi, float) for xi in x]
    return len(vals), 0, vals, list(range(len(vals))), False


@dataclass(frozen=True)
class EtaField:
    """The 1-form eta of the local form, evaluated from :class:`NullPlaneData`.

    ``components(x, t, s, u)`` returns (eta_t, eta_s, [eta_i], eta_u) for
    floats, arrays or coordinate jets.  ``perturb_t`` adds a term to eta_t and
    exists only to build negative controls.
    """

    data: NullPlaneData
    nodes: int
    perturb_t: Optional[Callable] = None

    def _quadrature(self):
        t, w = np.polynomial.legendre.leggauss(self.nodes)
        return 0.5 * (t + 1.0), 0.5 * w

    def components(self, x, t, s, u):
        d = self.data
        m = d.m0_dim
        coords = list(x) + [t, s, u]
        nv, order, vals, idx, is_jet = _coordinate_layout(coords)
        vals = np.broadcast_arrays(*vals)
        hi = jets.jet_space(nv, order + 1)
        big = [jets.Jet.variable(hi, k, v) if k is not None else jets.Jet.constant(hi, v)
               for k, v in zip(idx, vals)]
        lo = jets.jet_space(nv, order)
        keep = lo.ncoef

        def down(j):
            if isinstance(j, jets.Jet):
                return jets.Jet(lo, j.c[:keep])
            return jets.Jet.constant(lo, np.broadcast_to(np.asarray(j, float), big[0].batch_shape))

        xs_hi, s_hi, u_hi = big[:m], big[m + 1], big[m + 2]
        X = [down(v) for v in big]
        xs, tt, ss, uu = X[:m], X[m], X[m + 1], X[m + 2]
        f1 = down(d.f1(u_hi))
        eta_t = f1
        if self.perturb_t is not None:
            eta_t = eta_t + self.perturb_t(xs, tt, ss, uu)
        eta_s = 2.0 * tt * f1 + down(d.f2(xs_hi, s_hi, u_hi))
        h = []
        if m:
            taus, ws = self._quadrature()
            integrals = [0.0] * m
            for tau, w in zip(taus, ws):
                f2n = d.f2(xs_hi, s_hi * tau, u_hi)
                if not isinstance(f2n, jets.Jet):
                    continue  # constant in x: no contribution
                grad = jets.tp_deriv(hi, f2n.c)  # (count(order), nvars) + batch
                weight = w * ss * jets.exp(2.0 * tau * ss)
                for i in range(m):
                    if idx[i] is not None:
                        integrals[i] = integrals[i] + weight * jets.Jet(lo, grad[:, idx[i]])
            cs = d.c_values(xs, uu)
            decay = jets.exp(-2.0 * ss)
            h = [decay * (cs[i] + integrals[i]) for i in range(m)]
        eta_u = down(d.eta_u(xs_hi, big[m], s_hi, u_hi))
        out = (eta_t, eta_s, h, eta_u)
        if not is_jet:
            return (jets.value(out[0]), jets.value(out[1]), [jets.value(v) for v in out[2]],
                    jets.value(out[3]))
        return out


def solve_eta(data):
    """Solution of the eta system with quadrature sized for the s-range of the domain."""
    s_lo, s_hi = data.domain["s"]
    reach = max(abs(s_lo), abs(s_hi), 1.0)
    return EtaField(data, NODES_PER_UNIT * int(math.ceil(reach)))


def corrupt_eta(eta, amount=0.1):
    """Negative control: eta_t -> eta_t + amount * t, which breaks d_t eta_t = 0."""
    return replace(eta, perturb_t=lambda xs, t, s, u: amount * t)


def system_residual(eta, points):
    """Max violation of the six first-order equations for eta over ``points`` (x.., t, s, u)."""
    pts = np.asarray(points, float)
    m = eta.data.m0_dim
    space = jets.jet_space(m + 3, 1)
    X = jets.variables(space, pts)
    et, es, h, _ = eta.components(X[:m], X[m], X[m + 1], X[m + 2])
    T, S = m, m + 1

    def d(j, k):
        return j.c[1 + k] if isinstance(j, jets.Jet) else 0.0

    res = [np.abs(d(et, T)), np.abs(d(et, S)), np.abs(d(es, T) - 2.0 * jets.value(et))]
    for i in range(m):
        res.append(np.abs(d(et, i)))
        res.append(np.abs(d(h[i], T)))
        res.append(np.abs(d(h[i], S) - d(es, i) + 2.0 * jets.value(h[i])))
    return float(max(np.max(r) for r in res))


# ----------------------------------------------------------------------------
# metric

def _g0_signature(data):
    m = data.m0_dim
    if m == 0:
        return (0, 0)
    lo, hi = data.domain["u"]
    xs = [0.5 * sum(data.domain.get(n, data.domain["x"])) for n in data.x_names]
    g = np.array([[float(jets.value(e)) for e in row] for row in data.g0(xs, 0.5 * (lo + hi))])
    sig = signature_of(g)
    if sum(sig) != m:
        raise ConstructionError(f"g0 is degenerate at the domain centre (x = {xs}, u = {0.5 * (lo + hi)})")
    return sig


def build_metric(data, eta=None):
    """Chart on (x.., t, s, u) carrying ds^2 + e^{-2s} g0(u) + 2 du eta."""
    eta = solve_eta(data) if eta is None else eta
    m = data.m0_dim
    n = m + 3
    T, S, U = m, m + 1, m + 2

    def comps(x):
        xs = list(x[:m])
        et, es, h, eu = eta.components(xs, x[T], x[S], x[U])
        rows = [[0.0] * n for _ in range(n)]
        rows[S][S] = 1.0
        if m:
            w = jets.exp(-2.0 * x[S])
            g0 = data.g0(xs, x[U])
            for i in range(m):
                for j in range(m):
                    e = g0[i][j]
                    if not (np.isscalar(e) and e == 0.0):
                        rows[i][j] = w * e
        for a, val in [(T, et), (S, es)] + [(i, h[i]) for i in range(m)]:
            rows[U][a] = rows[a][U] = val
        rows[U][U] = 2.0 * eu
        return rows

    names = tuple(data.x_names) + ("t", "s", "u")
    dom = tuple(tuple(data.domain.get(nm, data.domain["x"])) for nm in data.x_names)
    dom = dom + (tuple(data.domain["t"]), tuple(data.domain["s"]), tuple(data.domain["u"]))
    t0, s0 = _g0_signature(data)
    chart = MetricChart(data.label, names, (t0 + 1, s0 + 2), comps, dom, dom,
                        {"construction": "null_plane", "m0_dim": m})
    try:
        chart.check_signature()
    except SingularMetricError as exc:
        raise ConstructionError(f"degenerate or wrong-signature metric: {exc}") from None
    return chart


# ----------------------------------------------------------------------------
# alpha, beta and the fundamental equations

def _coordinate_field(n, k):
    def fn(x):
        return [1.0 if i == k else 0.0 for i in range(n)]
    return fn


@dataclass(frozen=True)
class AlphaBeta:
    alpha: np.ndarray
    beta: np.ndarray
    f_alpha: float
    residual: float


def alpha_beta(data, eta, p, chart=None):
    """alpha and beta at ``p`` from the closed-form expressions, with the residual of
    nabla V = alpha (x) V + V^flat (x) Z and nabla Z = -Id + beta (x) V + Z^flat (x) Z."""
    chart = build_metric(data, eta) if chart is None else chart
    p = np.asarray(p, float)
    m = data.m0_dim
    n = m + 3
    T, S, U = m, m + 1, m + 2
    space = jets.jet_space(n, 1)
    X = jets.variables(space, p)
    et, es, h, eu = eta.components(X[:m], X[T], X[S], X[U])

    def val(j):
        return float(jets.value(j))

    def d(j, k):
        return float(j.c[1 + k]) if isinstance(j, jets.Jet) else 0.0

    g = chart.metric(p)
    eta_t, eta_s, eta_u = val(et), val(es), val(eu)
    f_alpha = d(eu, T) / eta_t ** 2 - 2.0 * eta_s / eta_t
    alpha = g[S] + f_alpha * g[T]
    beta = np.zeros(n)
    beta[T] = 2.0
    beta[S] = d(es, S) / eta_t
    for i in range(m):
        beta[i] = (d(es, i) + d(h[i], S) + 2.0 * val(h[i])) / (2.0 * eta_t)
    beta[U] = (d(eu, S) - eta_s ** 2 + 2.0 * eta_u) / eta_t
    res = nab_residual(chart, _coordinate_field(n, T), _coordinate_field(n, S), alpha, beta, p)
    return AlphaBeta(alpha, beta, f_alpha, res)


def _field_values(chart, fn, p, order):
    geo = geometry_jet(chart, p, max(order, 2))
    t = field_tp(geo.space, fn, p)
    return geo, t


def nab_residual(chart, V, Z, alpha, beta, p):
    """Max violation of nabla V = alpha V + g(., V) Z and nabla Z = -Id + beta V + g(., Z) Z at p."""
    p = np.asarray(p, float)
    g = chart.metric(p)
    v = np.array([float(jets.value(c)) for c in V(list(p))])
    z = np.array([float(jets.value(c)) for c in Z(list(p))])
    nv = nabla_field(chart, V, p)
    nz = nabla_field(chart, Z, p)
    vf, zf = g @ v, g @ z
    ev = np.outer(alpha, v) + np.outer(vf, z)
    ez = -np.eye(len(p)) + np.outer(beta, v) + np.outer(zf, z)
    return float(max(np.max(np.abs(nv - ev)), np.max(np.abs(nz - ez))))


@dataclass(frozen=True)
class FundamentalResiduals:
    nabV_nabZ: float
    dV: float
    dZ: float
    bracket: float
    LVg: float
    LZg: float
    ab_identity: Optional[float] = None  # only defined for commuting V, Z

    def max(self):
        return max(v for v in self.as_dict().values())

    def as_dict(self):
        out = {"nabV_nabZ": self.nabV_nabZ, "dV": self.dV, "dZ": self.dZ, "bracket": self.bracket,
               "LVg": self.LVg, "LZg": self.LZg}
        if self.ab_identity is not None:
            out["ab_identity"] = self.ab_identity
        return out


def fundamental_residuals(chart, V, Z, alpha, beta, p, tol=1e-9, commuting=True):
    """Residuals of the fundamental equations and their consequences at ``p``.

    Checked: nabla V and nabla Z, dV^flat = (alpha - Z^flat) ^ V^flat,
    dZ^flat = beta ^ V^flat, [Z, V] = (alpha(Z) - beta(V) + 1) V,
    L_V g = 2 (alpha + Z^flat) V^flat and L_Z g = -2 g + 2 (Z^flat)^2 + 2 beta V^flat
    (symmetric products).  With ``commuting`` (V and Z coordinate fields, as
    for d_t and d_s) also beta(V) - alpha(Z) - 1 = 0, which is the bracket
    identity for [Z, V] = 0; after a general frame change it does not hold.
    """
    p = np.asarray(p, float)
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    geo = geometry_jet(chart, p, 2)
    sp = geo.space
    vt = field_tp(sp, V, p)
    zt = field_tp(sp, Z, p)
    v, z = vt[0], zt[0]
    g = geo.g[0]
    gvv, gzz, gvz = v @ g @ v, z @ g @ z, v @ g @ z
    bad = max(abs(gvv), abs(gzz - 1.0), abs(gvz))
    if bad > tol:
        raise FrameError(f"V, Z violate g(V,V)=0, g(Z,Z)=1, g(V,Z)=0 at {p.tolist()} (residual {bad:.3g})")
    vflat_tp = jets.tp_mul(sp, "ab,b->a", geo.g, vt)
    zflat_tp = jets.tp_mul(sp, "ab,b->a", geo.g, zt)
    dvf = jets.tp_deriv(sp, vflat_tp)[0]  # [c, a] = d_c V_a
    dzf = jets.tp_deriv(sp, zflat_tp)[0]
    vf, zf = vflat_tp[0], zflat_tp[0]

    def wedge(a, b):
        return np.outer(a, b) - np.outer(b, a)

    res_dv = np.max(np.abs((dvf - dvf.T) - wedge(alpha - zf, vf)))
    res_dz = np.max(np.abs((dzf - dzf.T) - wedge(beta, vf)))
    dv = jets.tp_deriv(sp, vt)[0]  # [c, l] = d_c V^l
    dz = jets.tp_deriv(sp, zt)[0]
    br = z @ dv - v @ dz
    res_br = np.max(np.abs(br - (alpha @ z - beta @ v + 1.0) * v))
    nv = cov_deriv(sp, geo.gam, vt, "u")[0]  # [c, l]
    nz = cov_deriv(sp, geo.gam, zt, "u")[0]
    lv = nv @ g
    lz = nz @ g
    lvg = lv + lv.T
    lzg = lz + lz.T
    res_lv = np.max(np.abs(lvg - (np.outer(alpha + zf, vf) + np.outer(vf, alpha + zf))))
    res_lz = np.max(np.abs(lzg - (-2.0 * g + 2.0 * np.outer(zf, zf) + np.outer(beta, vf) + np.outer(vf, beta))))
    res_ab = float(abs(beta @ v - alpha @ z - 1.0)) if commuting else None
    return FundamentalResiduals(nab_residual(chart, V, Z, alpha, beta, p), float(res_dv), float(res_dz),
                                float(res_br), float(res_lv), float(res_lz), res_ab)


def frame_change(chart, V, Z, alpha, beta, f, h, p):
    """(V, Z) -> (e^f V, Z + h V) with alpha' = alpha + df - h V^flat and
    beta' = e^{-f} (beta + h alpha + dh - h Z^flat - h^2 V^flat) at ``p``."""
    p = np.asarray(p, float)
    n = chart.dim
    space = jets.jet_space(n, 1)
    X = jets.variables(space, p)

    def value_and_grad(fn):
        j = fn(X)
        if isinstance(j, jets.Jet):
            return float(j.c[0]), np.asarray(j.c[1:], float)
        return float(j), np.zeros(n)

    f0, df = value_and_grad(f)
    h0, dh = value_and_grad(h)
    g = chart.metric(p)
    v = np.array([float(jets.value(c)) for c in V(list(p))])
    z = np.array([float(jets.value(c)) for c in Z(list(p))])
    vf, zf = g @ v, g @ z

    def V2(x):
        e = jets.exp(f(x))
        return [e * c for c in V(x)]

    def Z2(x):
        hv = h(x)
        return [zc + hv * vc for zc, vc in zip(Z(x), V(x))]

    a2 = np.asarray(alpha, float) + df - h0 * vf
    b2 = math.exp(-f0) * (np.asarray(beta, float) + h0 * np.asarray(alpha, float) + dh - h0 * zf - h0 ** 2 * vf)
    return V2, Z2, a2, b2


# ----------------------------------------------------------------------------
# the cone

@dataclass(frozen=True)
class ConeCheck:
    plane_residual: float
    null_residual: float

    def max(self):
        return max(self.plane_residual, self.null_residual)


def cone_null_plane_check(data, eta=None, points=None, chart=None):
    """Parallelness of span{V, xi + Z} on the cone over the built metric, over the cone's grid."""
    eta = solve_eta(data) if eta is None else eta
    base = build_metric(data, eta) if chart is None else chart
    hat = cone(base)
    n = hat.dim
    T, S = data.m0_dim + 1, data.m0_dim + 2  # shifted by the r coordinate

    def vhat(x):
        return [1.0 if i == T else 0.0 for i in range(n)]

    def zeta(x):
        return [x[0]] + [1.0 if i == S else 0.0 for i in range(1, n)]

    pts = hat.grid if points is None else np.asarray(points, float)
    plane = 0.0
    null = 0.0
    for q in pts:
        plane = max(plane, parallel_plane_residual(hat, [vhat, zeta], q))
        g = hat.metric(q)
        a = np.array(vhat(list(q)), float)
        b = np.array(zeta(list(q)), float)
        null = max(null, abs(a @ g @ a), abs(b @ g @ b), abs(a @ g @ b))
    return ConeCheck(plane, null)


# ----------------------------------------------------------------------------
# configuration documents

def _expr(src, names, what):
    try:
        return parse(src, names)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{what}: {exc}") from None


def data_from_config(config):
    """NullPlaneData from a mapping with slots f1, f2, c (or c_1..c_m), g0, eta_u, domain.

    Expressions use the grammar of ``docs/grammar.md``: f1 over ``u``; f2
    over the M0 coordinates, ``s`` and ``u``; c_i and g0 entries over the M0
    coordinates and ``u``; eta_u over all coordinates.
    """
    if not isinstance(config, dict):
        raise ConfigurationError("null-plane config must be a mapping")
    try:
        m = int(config.get("m0_dim", len(config.get("coords", []))))
    except (TypeError, ValueError):
        raise ConfigurationError("m0_dim must be an integer") from None
    xn = tuple(config.get("coords", [f"x{i + 1}" for i in range(m)]))
    if len(xn) != m:
        raise ConfigurationError("coords must list m0_dim names")
    for reserved in ("t", "s", "u"):
        if reserved in xn:
            raise ConfigurationError(f"M0 coordinate name {reserved!r} is reserved")
    if "f1" not in config:
        raise ConfigurationError("null-plane config needs f1")
    f1e = _expr(config["f1"], ("u",), "f1")
    f2e = _expr(config.get("f2", "0"), xn + ("s", "u"), "f2")
    eue = _expr(config.get("eta_u", "0"), xn + ("t", "s", "u"), "eta_u")
    if "c" in config:
        csrc = list(config["c"])
    else:
        csrc = [config.get(f"c_{i + 1}", "0") for i in range(m)]
    if len(csrc) != m:
        raise ConfigurationError(f"c must have {m} entries")
    ces = [_expr(src, xn + ("u",), f"c_{i + 1}") for i, src in enumerate(csrc)]
    g0src = config.get("g0")
    entries = {}
    if m:
        if g0src is None:
            raise ConfigurationError("null-plane config with m0_dim > 0 needs g0")
        if isinstance(g0src, dict):
            for key, src in g0src.items():
                parts = [k.strip() for k in str(key).split(",")]
                try:
                    i, j = (xn.index(k) if k in xn else int(k) for k in parts)
                except ValueError:
                    raise ConfigurationError(f"bad g0 key {key!r}") from None
                entries[(i, j)] = entries[(j, i)] = _expr(src, xn + ("u",), f"g0[{key}]")
        else:
            if len(g0src) != m or any(len(row) != m for row in g0src):
                raise ConfigurationError(f"g0 must be an {m}x{m} matrix")
            for i in range(m):
                for j in range(m):
                    if str(g0src[i][j]).strip() not in ("0", "0.0"):
                        entries[(i, j)] = _expr(g0src[i][j], xn + ("u",), f"g0[{i}][{j}]")

    def g0(x, u):
        return [[entries[(i, j)](*x, u) if (i, j) in entries else 0.0 for j in range(m)] for i in range(m)]

    dom = dict(DEFAULT_DOMAIN)
    for key, val in (config.get("domain") or {}).items():
        if key not in ("x", "t", "s", "u") + xn:
            raise ConfigurationError(f"unknown domain key {key!r}")
        lo, hi = (float(v) for v in val)
        if not lo < hi:
            raise ConfigurationError(f"empty domain for {key}")
        dom[key] = (lo, hi)
    return NullPlaneData(
        m0_dim=m,
        g0=g0,
        f1=lambda u: f1e(u),
        f2=lambda x, s, u: f2e(*x, s, u),
        c=(lambda x, u: [ce(*x, u) for ce in ces]) if m else None,
        eta_u=lambda x, t, s, u: eue(*x, t, s, u),
        domain=dom,
        label=str(config.get("label", "null_plane")),
        x_names=xn,
    )
