"""Metric charts, jet-based curvature, and the catalog of example metrics.

Index conventions (also recorded in ``docs/conventions.md``):

* ``gam[i, j, k]`` is the k-th component of nabla_{d_i} d_j.
* ``R[i, j, k, l]`` is the l-th component of R(d_i, d_j) d_k with
  R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X, Y].
* ``derivs[k-1][c_1, ..., c_k, i, j, k, l]`` is nabla^k R with ``c_1`` the
  outermost derivative, i.e. (nabla_{c_1} (nabla^{k-1} R))(c_2, ...).
* Ric[j, k] = sum_i R[i, j, k, i], and the lowered tensor is
  R(X, Y, Z, W) = g(R(X, Y) Z, W).
* An endomorphism matrix ``M`` acts on components: M[l, k] is the l-th
  component of M(d_k).

Everything is computed from exact truncated Taylor jets of the metric
components, so derivatives of polynomial metrics carry no truncation error.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from . import jets
from .errors import ConfigurationError, DomainError, SingularMetricError
from .expressions import parse
from .pseudo_linear import signature_of

DEFAULT_JET_ORDER = 6
GRID_POINTS = 32
GRID_SEED = 20240611


@dataclass(frozen=True)
class MetricChart:
    """A single coordinate chart with analytic metric components.

    ``components`` maps a list of coordinates (floats, arrays or jets) to the
    nested ``dim x dim`` list of metric components.  It must not mutate any
    state, so that one chart can be evaluated from several threads.
    """

    label: str
    coords: tuple
    signature: tuple
    components: Callable
    domain: tuple  # per coordinate: (lo, hi), either may be None
    sample_box: tuple  # finite (lo, hi) per coordinate, inside the domain
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.coords)
        if len(self.domain) != n or len(self.sample_box) != n:
            raise ConfigurationError(f"chart {self.label}: domain/sample box must have {n} entries")
        if sum(self.signature) != n:
            raise ConfigurationError(f"chart {self.label}: signature {self.signature} does not match dim {n}")

    @property
    def dim(self):
        return len(self.coords)

    def in_domain(self, p, slack=1e-12):
        p = np.asarray(p, dtype=float)
        for x, (lo, hi) in zip(p, self.domain):
            if lo is not None and x < lo - slack:
                return False
            if hi is not None and x > hi + slack:
                return False
        return True

    def require_domain(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise DomainError(f"chart {self.label} expects a point with {self.dim} coordinates, got {p.shape}")
        if not self.in_domain(p):
            raise DomainError(f"point {p.tolist()} lies outside the domain of chart {self.label}")

    def metric(self, p):
        """Metric matrix at ``p``; batched when ``p`` has leading axes."""
        p = np.asarray(p, dtype=float)
        x = [p[..., i] for i in range(self.dim)]
        rows = self.components(x)
        batch = p.shape[:-1]
        return np.stack([np.stack([np.broadcast_to(np.asarray(jets.value(e), float), batch)
                                   for e in row], axis=-1) for row in rows], axis=-2)

    def metric_jet(self, p, order):
        """Tensor polynomial of the metric at ``p``: shape (ncoef, dim, dim)."""
        space = jets.jet_space(self.dim, order)
        x = jets.variables(space, p)
        return space, jets.as_tp(space, self.components(x))

    @cached_property
    def grid(self):
        return sample_grid(self)

    def check_signature(self, points=None):
        """Signature at every grid point; raise if it differs from the declared one."""
        pts = self.grid if points is None else np.asarray(points)
        g = self.metric(pts)
        for p, gp in zip(pts, g):
            sig = signature_of(gp)
            if sig != tuple(self.signature):
                raise SingularMetricError(
                    f"chart {self.label}: signature {sig} at {p.tolist()} differs from declared {self.signature}")
        return True


def sample_grid(chart, n=GRID_POINTS, seed=GRID_SEED):
    """Deterministic scrambled Sobol points in the chart's sample box."""
    lo = np.array([b[0] for b in chart.sample_box], dtype=float)
    hi = np.array([b[1] for b in chart.sample_box], dtype=float)
    sampler = qmc.Sobol(d=chart.dim, scramble=True, seed=seed)
    u = sampler.random(n)
    return qmc.scale(u, lo, hi) if np.all(hi > lo) else lo + u * (hi - lo)


# ----------------------------------------------------------------------------
# geometry from jets

def _letters(k, skip=""):
    pool = [ch for ch in "abcdefghijklnopqrstvwxyzABCDEFGHIJ" if ch not in skip]
    return pool[:k]


def christoffel_tp(space, g):
    """Christoffel symbols gam[i, j, k] as a tensor polynomial (one degree lower than g)."""
    ginv = jets.tp_inv(space, g)
    dg = jets.tp_deriv(space, g)  # dg[c, a, b] = d_c g_ab
    lowered = dg + np.swapaxes(dg, 1, 2) - np.moveaxis(dg, 1, 3)
    # lowered[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    return 0.5 * jets.tp_mul(space, "ijl,lk->ijk", lowered, ginv), ginv


def riemann_tp(space, gam):
    """R[i, j, k, l] from Christoffel symbols."""
    dgam = jets.tp_deriv(space, gam)  # dgam[i, j, k, l] = d_i gam[j, k, l]
    quad = jets.tp_mul(space, "jkm,iml->ijkl", gam, gam)
    lin = dgam - np.swapaxes(dgam, 1, 2)
    d = space.degree_of(lin.shape[0])
    quad = quad[: space.count(d)]
    return lin + quad - np.swapaxes(quad, 1, 2)


def cov_deriv(space, gam, t, kinds):
    """Covariant derivative of a tensor polynomial with index kinds ('l' lower, 'u' upper).

    The new derivative index is placed first.
    """
    rank = len(kinds)
    if t.ndim - 1 != rank:
        raise ValueError("index kinds do not match tensor rank")
    out = jets.tp_deriv(space, t)
    d = space.degree_of(out.shape[0])
    out = out[: space.count(d)]
    idx = _letters(rank, skip="cmP")
    for s, kind in enumerate(kinds):
        t_idx = idx.copy()
        t_idx[s] = "m"
        res = idx.copy()
        if kind == "l":
            sub = f"c{idx[s]}m,{''.join(t_idx)}->c{''.join(res)}"
            out = out - jets.tp_mul(space, sub, gam, t)[: space.count(d)]
        else:
            sub = f"cm{idx[s]},{''.join(t_idx)}->c{''.join(res)}"
            out = out + jets.tp_mul(space, sub, gam, t)[: space.count(d)]
    return out


@dataclass
class GeometryJet:
    """Jets of the metric and its connection at a point."""

    space: object
    point: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    gam: np.ndarray
    riemann: np.ndarray

    def derivs(self, k):
        """Tensor polynomials of R, nabla R, ..., nabla^k R."""
        out = [self.riemann]
        kinds = "lllu"
        for _ in range(k):
            out.append(cov_deriv(self.space, self.gam, out[-1], kinds))
            kinds = "l" + kinds
        return out


def geometry_jet(chart, p, order):
    p = np.asarray(p, dtype=float)
    chart.require_domain(p)
    if order < 2:
        raise ConfigurationError("curvature needs jet order >= 2")
    space, g = chart.metric_jet(p, order)
    if abs(np.linalg.det(g[0])) < 1e-14 * max(1.0, np.max(np.abs(g[0]))) ** chart.dim:
        raise SingularMetricError(f"metric of {chart.label} is singular at {p.tolist()}")
    gam, ginv = christoffel_tp(space, g)
    return GeometryJet(space, p, g, ginv, gam, riemann_tp(space, gam))


@dataclass(frozen=True)
class CurvatureJet:
    """Values at a point of the metric, connection, curvature and its covariant derivatives."""

    point: np.ndarray
    metric_at_point: np.ndarray
    christoffel: np.ndarray
    curvature: np.ndarray
    derivs: list  # derivs[k-1] = nabla^k R

    @property
    def lowered(self):
        return np.einsum("ijkm,ml->ijkl", self.curvature, self.metric_at_point)

    def ricci(self):
        return np.einsum("ijki->jk", self.curvature)

    def bianchi_residual(self):
        r = self.curvature
        return float(np.max(np.abs(r + np.transpose(r, (1, 2, 0, 3)) + np.transpose(r, (2, 0, 1, 3)))))

    def second_bianchi_residual(self):
        if not self.derivs:
            return 0.0
        d = self.derivs[0]  # d[c, i, j, k, l]
        cyc = d + np.transpose(d, (1, 2, 0, 3, 4)) + np.transpose(d, (2, 0, 1, 3, 4))
        return float(np.max(np.abs(cyc)))

    def endomorphism(self, k, slots):
        """(nabla^k R)(c_1..c_k; d_i, d_j) as a matrix M[l, kk], slots = (c_1..c_k, i, j)."""
        t = self.curvature if k == 0 else self.derivs[k - 1]
        return np.asarray(t[tuple(slots)]).T


def _needed_order(k, order):
    need = k + 2
    if order is None:
        return max(need, 2)
    if order < need:
        raise ConfigurationError(f"nabla^{k} R needs jet order >= {need}, got {order}")
    return order


def curvature_jet(chart, p, k=0, order=None):
    """Curvature data at ``p`` up to the k-th covariant derivative.

    ``order`` is the truncation order of the metric jet.  When omitted the
    smallest sufficient order k + 2 is used; an explicit order below that is
    a configuration error.
    """
    order = _needed_order(k, order)
    geo = geometry_jet(chart, p, order)
    ders = geo.derivs(k)
    return CurvatureJet(
        point=np.asarray(p, dtype=float),
        metric_at_point=geo.g[0].copy(),
        christoffel=geo.gam[0].copy(),
        curvature=ders[0][0].copy(),
        derivs=[t[0].copy() for t in ders[1:]],
    )


def ricci(chart, p, order=None):
    """Ricci tensor Ric[j, k] = sum_i R[i, j, k, i] at ``p``."""
    return curvature_jet(chart, p, 0, order).ricci()


def constant_curvature_residual(chart, p, kappa, order=None):
    """Max-norm of R(X,Y)Z - kappa (g(Y,Z) X - g(X,Z) Y) over coordinate vectors."""
    cj = curvature_jet(chart, p, 0, order)
    g = cj.metric_at_point
    eye = np.eye(chart.dim)
    model = kappa * (np.einsum("jk,il->ijkl", g, eye) - np.einsum("ik,jl->ijkl", g, eye))
    return float(np.max(np.abs(cj.curvature - model)))


def field_tp(space, field_fn, p, batch_shape=()):
    """Tensor polynomial of a vector field given as a callable on coordinates."""
    x = jets.variables(space, p)
    return jets.as_tp(space, list(field_fn(x)), batch_shape)


def nabla_field(chart, field_fn, p, order=2):
    """Matrix N[c, l]: l-th component of nabla_{d_c} of the field at ``p``."""
    geo = geometry_jet(chart, p, order)
    xi = field_tp(geo.space, field_fn, p)
    return cov_deriv(geo.space, geo.gam, xi, "u")[0]


def homothety_residual(chart, field_fn, p, a):
    """Max-norm of nabla xi - a Id at ``p``."""
    nab = nabla_field(chart, field_fn, p)
    return float(np.max(np.abs(nab - a * np.eye(chart.dim))))


# ----------------------------------------------------------------------------
# catalog

def flat(t, s):
    n = t + s
    diag = [-1.0] * t + [1.0] * s

    def comps(x):
        return [[diag[i] if i == j else 0.0 for j in range(n)] for i in range(n)]

    box = tuple((-1.0, 1.0) for _ in range(n))
    return MetricChart(f"flat({t},{s})", tuple(f"x{i}" for i in range(n)), (t, s), comps,
                       tuple((None, None) for _ in range(n)), box, {"t": t, "s": s})


def sphere(n):
    """Round unit sphere S^n in hyperspherical coordinates (theta_1, ..., theta_{n-1}, phi)."""
    if n < 1:
        raise ConfigurationError("sphere dimension must be positive")

    def comps(x):
        diag = [1.0]
        w = 1.0
        for i in range(n - 1):
            w = w * jets.sin(x[i]) ** 2
            diag.append(w)
        return [[diag[i] if i == j else 0.0 for j in range(n)] for i in range(n)]

    names = tuple(f"theta{i + 1}" for i in range(n - 1)) + ("phi",)
    if n == 2:
        names = ("theta", "phi")
    dom = tuple((0.0, np.pi) for _ in range(n - 1)) + ((None, None),)
    box = tuple((0.4, np.pi - 0.4) for _ in range(n - 1)) + ((-1.0, 1.0),)
    return MetricChart(f"sphere({n})", names, (0, n), comps, dom, box, {"n": n})


def hyperbolic(n):
    """Upper half-space model (x_1, ..., x_{n-1}, y), g = (dx^2 + dy^2) / y^2."""

    def comps(x):
        w = x[-1] ** -2 if isinstance(x[-1], jets.Jet) else 1.0 / np.asarray(x[-1]) ** 2
        return [[w if i == j else 0.0 for j in range(n)] for i in range(n)]

    names = tuple(f"x{i + 1}" for i in range(n - 1)) + ("y",)
    if n == 2:
        names = ("x", "y")
    dom = tuple((None, None) for _ in range(n - 1)) + ((0.0, None),)
    box = tuple((-1.0, 1.0) for _ in range(n - 1)) + ((0.5, 2.0),)
    return MetricChart(f"hyperbolic({n})", names, (0, n), comps, dom, box, {"n": n})


def pp_wave(f, m, label=None):
    """pp-wave 2 dx dz + 2 f(y, z) dz^2 + sum dy_i^2 in coordinates (x, y_1..y_m, z).

    ``f`` is either a callable ``f(ys, z)`` or an expression string over
    ``y1..ym`` and ``z``.
    """
    names = ("x",) + tuple(f"y{i + 1}" for i in range(m)) + ("z",)
    if isinstance(f, str):
        expr = parse(f, names[1:])
        source = f

        def f(ys, z, _e=expr):
            return _e(*ys, z)
    else:
        source = getattr(f, "__name__", "f")
    n = m + 2

    def comps(x):
        rows = [[0.0] * n for _ in range(n)]
        rows[0][n - 1] = rows[n - 1][0] = 1.0
        for i in range(1, m + 1):
            rows[i][i] = 1.0
        rows[n - 1][n - 1] = 2.0 * f(x[1:m + 1], x[m + 1])
        return rows

    box = tuple((-1.0, 1.0) for _ in range(n))
    return MetricChart(label or f"pp_wave({source})", names, (1, m + 1), comps,
                       tuple((None, None) for _ in range(n)), box, {"f": source, "m": m})


def cahen_wallach(S):
    """Cahen-Wallach space 2 dx dz + sum S_ij y^i y^j dz^2 + sum dy_i^2."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if not np.allclose(S, S.T):
        raise ConfigurationError("Cahen-Wallach matrix must be symmetric")
    if abs(np.linalg.det(S)) < 1e-12:
        raise ConfigurationError("Cahen-Wallach matrix must be invertible (det S != 0)")
    m = S.shape[0]

    def f(ys, z):
        total = 0.0
        for i in range(m):
            for j in range(m):
                if S[i, j] != 0.0:
                    total = total + 0.5 * S[i, j] * ys[i] * ys[j]
        return total

    chart = pp_wave(f, m, label=f"cahen_wallach({np.diag(S).tolist() if np.allclose(S, np.diag(np.diag(S))) else S.tolist()})")
    return chart


def plane_wave_exp():
    """The plane wave 2 dx dz + e^z y^2 dz^2 + dy^2 in coordinates (x, y, z)."""

    def comps(x):
        return [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, jets.exp(x[2]) * x[1] ** 2]]

    box = ((-1.0, 1.0),) * 3
    return MetricChart("plane_wave_exp", ("x", "y", "z"), (1, 2), comps, ((None, None),) * 3, box, {})


def custom(config):
    """Chart from a configuration mapping (see ``docs/grammar.md``).

    Required keys: ``coords`` (list of names), ``signature`` ([t, s]) and
    ``metric``, either a full matrix of expressions or a mapping
    ``"i,j" -> expression`` over coordinate names (unlisted entries are 0 and
    symmetry is implied).  Optional: ``label``, ``domain`` and ``sample_box``
    as lists of [lo, hi] pairs (``null`` for unbounded).
    """
    try:
        names = tuple(config["coords"])
        sig = tuple(int(v) for v in config["signature"])
        metric = config["metric"]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"custom chart config missing field: {exc}") from None
    n = len(names)
    entries = {}
    if isinstance(metric, dict):
        for key, src in metric.items():
            try:
                i, j = (names.index(k.strip()) if k.strip() in names else int(k) for k in str(key).split(","))
            except ValueError:
                raise ConfigurationError(f"bad metric key {key!r}") from None
            if (j, i) in entries and entries[(j, i)].source != str(src):
                raise ConfigurationError(f"metric entries ({i},{j}) and ({j},{i}) disagree")
            entries[(i, j)] = entries[(j, i)] = parse(src, names)
    else:
        if len(metric) != n or any(len(row) != n for row in metric):
            raise ConfigurationError(f"metric must be a {n}x{n} matrix")
        for i in range(n):
            for j in range(n):
                src = metric[i][j]
                if str(src).strip() in ("0", "0.0"):
                    continue
                entries[(i, j)] = parse(src, names)

    def comps(x):
        return [[entries[(i, j)](*x) if (i, j) in entries else 0.0 for j in range(n)] for i in range(n)]

    def pairs(key, default):
        val = config.get(key)
        if val is None:
            return default
        if len(val) != n:
            raise ConfigurationError(f"{key} must have {n} entries")
        return tuple((None if a is None else float(a), None if b is None else float(b)) for a, b in val)

    dom = pairs("domain", tuple((None, None) for _ in range(n)))
    default_box = tuple(((-1.0 if lo is None else lo + 0.1), (1.0 if hi is None else hi - 0.1))
                        for lo, hi in dom)
    box = pairs("sample_box", default_box)
    chart = MetricChart(config.get("label", "custom"), names, sig, comps, dom, box,
                        {"config": dict(config)})
    chart.check_signature()
    return chart


def chart_catalog(name, params=None):
    """Look up a catalog chart by name.

    Names: ``flat`` (t, s), ``sphere`` (n), ``hyperbolic`` (n), ``pp_wave``
    (f, m), ``cahen_wallach`` (S), ``plane_wave_exp``, ``exponential_extension``
    (base: chart) and ``custom`` (config).
    """
    params = dict(params or {})
    if name == "flat":
        return flat(int(params.get("t", 0)), int(params.get("s", 2)))
    if name == "sphere":
        return sphere(int(params.get("n", 2)))
    if name == "hyperbolic":
        return hyperbolic(int(params.get("n", 2)))
    if name == "pp_wave":
        return pp_wave(params["f"], int(params.get("m", 1)))
    if name == "cahen_wallach":
        return cahen_wallach(params.get("S", np.eye(2)))
    if name == "plane_wave_exp":
        return plane_wave_exp()
    if name == "exponential_extension":
        from .cones import exponential_extension
        return exponential_extension(params["base"])
    if name == "custom":
        return custom(params["config"] if "config" in params else params)
    raise ConfigurationError(f"unknown chart {name!r}")
