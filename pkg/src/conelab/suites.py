"""Verification suites: each is a list of independent check functions.

A check function takes the run :class:`Settings` and returns a list of
:class:`~conelab.reports.Check` records.  Suites fan the functions out over a
thread pool and the report sorts records by id, so output does not depend on
scheduling.  Thresholds are fixed per check; ``Settings`` only controls the
numerics (rank tolerance, jet order, grid size and seed).
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from math import factorial
from typing import Optional

import numpy as np
import yaml

from . import charts, reports
from .charts import sample_grid
from .cohomology import LieModule, cohomology, quotient_module, remark_h1_dimension
from .cones import (cone, cone_curvature_norm, cone_identity_residuals, delup_factor, double_warped,
                    doubled_derivative_residuals, exponential_extension, psi_residual)
from .errors import ConfigurationError, ConstructionError
from .holonomy import (ambrose_singer_span, convergence_ratio, doubled_frame, loop_battery, loop_span,
                       orthogonality_residual, printed_plane_wave_matrices, printed_to_chart,
                       projection_distance, projection_formula_residual, span_compare, stabilizer_analysis)
from .lie_matrix import bbi_type, direct_sum, so_algebra
from .null_plane import (alpha_beta, build_metric, cone_null_plane_check, corrupt_eta, data_from_config,
                         fundamental_residuals, solve_eta, system_residual)
from .pseudo_linear import DEFAULT_TOL, SubspaceBasis
from .references import resolve_chart


@dataclass(frozen=True)
class Settings:
    tol: float = DEFAULT_TOL
    jet_order: Optional[int] = None
    grid: int = charts.GRID_POINTS
    seed: int = charts.GRID_SEED
    workers: int = 1
    timing: bool = False

    def echo(self):
        """The settings that influence results; echoed in every report."""
        d = asdict(self)
        d.pop("workers")
        d.pop("timing")
        return d


# catalog points: bases, and the doubled charts at u = 1, v = 0
BASE_POINTS = {
    "flat2": [0.1, 0.2],
    "sphere2": [1.0, 0.3],
    "hyperbolic2": [0.2, 1.1],
    "cw2": [0.1, 0.2, 0.3, 0.1],
    "ppwave2": [0.1, 0.2, 0.3, 0.1],
    "plane_wave_exp": [0.0, 0.0, 0.0],
}
CONE_POINTS = {"sphere2": [1.0, np.pi / 3, 0.0], "hyperbolic2": [1.0, 0.3, 1.2]}
NULL_PLANE_CONFIGS = ("null_plane_default", "null_plane_f2_x1", "null_plane_g0_u")
BAD_NULL_PLANE_CONFIG = "null_plane_f1_crossing"


def packaged_config(name):
    """A configuration document shipped in ``conelab/configs``."""
    try:
        text = resources.files("conelab").joinpath("configs", f"{name}.yaml").read_text()
    except FileNotFoundError:
        raise ConfigurationError(f"no packaged config named {name!r}") from None
    return yaml.safe_load(text)


def _base(name):
    return resolve_chart(name)[0]


def _grid(chart, settings, cap=None):
    n = settings.grid if cap is None else min(settings.grid, cap)
    return sample_grid(chart, n, settings.seed)


def _guard(fn, id, anchor):
    """Run ``fn`` and turn an unexpected numerical exception into a failed check."""

    def run(settings):
        try:
            return fn(settings)
        except ConfigurationError:
            raise
        except Exception as exc:  # numerical failure is reported, not raised
            return [reports.failure(id, anchor, exc)]

    return run


# ----------------------------------------------------------------------------
# cone identities

def _cone_identities(name):
    def fn(s):
        base = _base(name)
        res = [cone_identity_residuals(base, p) for p in _grid(base, s)]
        anchor = "cone connection, curvature and Ricci identities"
        return [reports.residual(f"cone-identities/{name}/{part}", anchor,
                                 max(getattr(r, part) for r in res), 1e-8, points=len(res))
                for part in ("lc", "curv", "ric")]
    return fn


def _flat_cone(s):
    c = cone(_base("hyperbolic2"))
    norm = cone_curvature_norm(_base("hyperbolic2"), _grid(c, s))
    return [reports.residual("cone-identities/hyperbolic2/cone-curvature-norm",
                             "cone over constant curvature -1 is flat", norm, 1e-9)]


def _cone_sphere_dim(s):
    span = ambrose_singer_span(cone(_base("sphere2")), CONE_POINTS["sphere2"], 1, s.tol, s.jet_order)
    return [reports.dimension("cone-identities/sphere2/as-dim", "cone over S^2 has holonomy so(1,2)",
                              span.dim, 3, converged=span.converged)]


CONE_SUITE = [(f"cone-identities/{b}", _cone_identities(b)) for b in ("flat2", "sphere2", "hyperbolic2", "cw2")]
CONE_SUITE += [("cone-identities/flat-cone", _flat_cone), ("cone-identities/sphere2-dim", _cone_sphere_dim)]


# ----------------------------------------------------------------------------
# doubled derivatives

def _doubled_derivatives(u):
    def fn(s):
        base = _base("sphere2")
        pts = _grid(base, s, cap=2)
        worst = max(doubled_derivative_residuals(base, p, 2, 2, u=u, order=s.jet_order) for p in pts)
        return [reports.residual(f"doubled-derivatives/sphere2/u={u:g}/mixed", "closed forms of mixed derivatives "
                                 "of the doubled curvature, p <= 2, q <= 2", worst, 1e-8, points=len(pts))]
    return fn


def _delup(u):
    def fn(s):
        base = _base("sphere2")
        out = []
        for q in range(4):
            got = delup_factor(base, BASE_POINTS["sphere2"], q, u)
            want = (-1) ** q * factorial(q + 1) / u ** q
            out.append(reports.residual(f"doubled-derivatives/sphere2/u={u:g}/delup-q{q}",
                                        "pure d_u derivatives scale by (-1)^q (q+1)!/u^q",
                                        abs(got - want) / abs(want), 1e-8, observed=got, expected=want))
        return out
    return fn


def _stab_blocks(s):
    base = _base("sphere2")
    worst = max(projection_formula_residual(base, BASE_POINTS["sphere2"], 2, 2, u) for u in (0.5, 1.0, 2.0))
    return [reports.residual("doubled-derivatives/sphere2/stabiliser-blocks",
                             "linear and translational parts of doubled curvature generators", worst, 1e-8)]


DOUBLED_SUITE = [(f"doubled/{u}", _doubled_derivatives(u)) for u in (0.5, 1.0, 2.0)]
DOUBLED_SUITE += [(f"delup/{u}", _delup(u)) for u in (0.5, 1.0, 2.0)]
DOUBLED_SUITE += [("stab-blocks", _stab_blocks)]


# ----------------------------------------------------------------------------
# psi isometry

def _psi(name):
    def fn(s):
        base = _base(name)
        target = cone(exponential_extension(base))
        pts = _grid(target, s)
        worst = max(psi_residual(base, p) for p in pts)
        return [reports.residual(f"psi-isometry/{name}", "psi pulls the doubled metric back to the cone "
                                 "over the exponential extension", worst, 1e-10, points=len(pts))]
    return fn


def _psi_control(s):
    base = _base("sphere2")
    target = cone(exponential_extension(base))
    worst = min(psi_residual(base, p, u_scale=1.01) for p in _grid(target, s))
    return [reports.control("psi-isometry/sphere2/control-corrupted-psi", "perturbed psi is detected",
                            worst, 1e-3, u_scale=1.01)]


PSI_SUITE = [("psi/flat1", _psi("flat1")), ("psi/sphere2", _psi("sphere2")), ("psi/control", _psi_control)]


# ----------------------------------------------------------------------------
# holonomy catalog

def _cone_hol(name, expected):
    def fn(s):
        span = ambrose_singer_span(cone(_base(name)), CONE_POINTS[name], 1, s.tol, s.jet_order)
        return [reports.dimension(f"holonomy-catalog/cone:{name}/dim", "holonomy of cones over constant "
                                  "curvature bases", span.dim, expected, converged=span.converged)]
    return fn


def _doubled_span(name, s, max_order=3):
    dw = double_warped(_base(name))
    q = np.r_[1.0, 0.0, BASE_POINTS[name]]
    span = ambrose_singer_span(dw, q, max_order, s.tol, s.jet_order)
    space, frame = doubled_frame(dw, q)
    return dw, q, span, frame, stabilizer_analysis(span, frame, s.tol, probes=False)


def _doubled_cw(s):
    _, _, span, _, rep = _doubled_span("cw2", s)
    anchor = "doubled Cahen-Wallach, m = 2"
    return [reports.dimension("holonomy-catalog/doubled:cw2/dim", anchor, span.dim, 5, converged=span.converged),
            reports.dimension("holonomy-catalog/doubled:cw2/translations", anchor, rep.translations.dim, 3)]


def _doubled_sphere(s):
    _, _, span, _, _ = _doubled_span("sphere2", s)
    return [reports.dimension("holonomy-catalog/doubled:sphere2/dim", "doubled symmetric base",
                              span.dim, 3, converged=span.converged)]


def _doubled_pp(s):
    _, _, span, frame, rep = _doubled_span("ppwave2", s)
    anchor = "z-independent pp-wave with invertible Hessian: translations = d_x^perp"
    x = np.zeros(frame.n)
    x[0] = 1.0
    return [reports.dimension("holonomy-catalog/doubled:ppwave2/translations", anchor, rep.translations.dim, 3),
            reports.residual("holonomy-catalog/doubled:ppwave2/translations-orthogonal", anchor,
                             orthogonality_residual(span, frame, x), 1e-8)]


def _doubled_pwexp(s):
    _, _, span, _, _ = _doubled_span("plane_wave_exp", s)
    printed = np.array(printed_to_chart(printed_plane_wave_matrices()))
    anchor = "doubled e^z y^2 plane wave, printed two-generator holonomy"
    cmp_ = span_compare(span, printed)
    return [reports.dimension("holonomy-catalog/doubled:plane_wave_exp/dim", anchor, span.dim, 2,
                              converged=span.converged, dim_next=span.dim_next),
            reports.residual("holonomy-catalog/doubled:plane_wave_exp/printed-distance", anchor,
                             cmp_.principal_distance, 1e-8, b_in_a=cmp_.b_in_a, a_in_b=cmp_.a_in_b),
            reports.residual("holonomy-catalog/doubled:plane_wave_exp/printed-contained",
                             "printed generators lie in the computed span",
                             0.0 if cmp_.b_in_a else 1.0, 1e-8)]


def _projection(name):
    def fn(s):
        d = projection_distance(_base(name), BASE_POINTS[name], tol=s.tol)
        return [reports.residual(f"holonomy-catalog/projection/{name}", "pr_so of the doubled holonomy is the "
                                 "base holonomy", d, 1e-6)]
    return fn


LOOP_CASES = {
    "sphere2": BASE_POINTS["sphere2"],
    "cone:sphere2": CONE_POINTS["sphere2"],
    "cone:hyperbolic2": CONE_POINTS["hyperbolic2"],
    "doubled:sphere2": [1.0, 0.0] + BASE_POINTS["sphere2"],
    "doubled:cw2": [1.0, 0.0] + BASE_POINTS["cw2"],
    "doubled:plane_wave_exp": [1.0, 0.0] + BASE_POINTS["plane_wave_exp"],
}


def _loops(ref):
    def fn(s):
        chart = resolve_chart(ref)[0]
        p = np.asarray(LOOP_CASES[ref], float)
        a = ambrose_singer_span(chart, p, 3, s.tol, s.jet_order)
        b = loop_span(chart, p)
        d = span_compare(a, b).principal_distance
        return [reports.residual(f"holonomy-catalog/loops/{ref}", "loop-generated span equals the Ambrose-Singer "
                                 "span", d, 1e-5, as_dim=a.dim, loop_dim=b.dim)]
    return fn


def _sphere_loops(s):
    recs = loop_battery(_base("sphere2"), BASE_POINTS["sphere2"], planes=[(0, 1)])
    ratio = convergence_ratio(recs, (0, 1))
    by_h = {r.h: r.curvature_residual for r in recs}
    metric = max(r.metric_residual for r in recs)
    anchor = "log(parallelogram transport)/h^2 -> -R(X, Y)"
    return [reports.interval("holonomy-catalog/loops/sphere2/convergence-ratio", anchor, ratio, 1.5, 4.5,
                             residuals={f"{h:g}": v for h, v in sorted(by_h.items())}),
            reports.residual("holonomy-catalog/loops/sphere2/metric-preserved", "transport is an isometry",
                             metric, 1e-10)]


HOLONOMY_SUITE = [("cone:sphere2", _cone_hol("sphere2", 3)), ("cone:hyperbolic2", _cone_hol("hyperbolic2", 0)),
                  ("doubled:cw2", _doubled_cw), ("doubled:sphere2", _doubled_sphere),
                  ("doubled:ppwave2", _doubled_pp), ("doubled:plane_wave_exp", _doubled_pwexp),
                  ("sphere2-loops", _sphere_loops)]
HOLONOMY_SUITE += [(f"projection/{b}", _projection(b)) for b in BASE_POINTS]
HOLONOMY_SUITE += [(f"loops/{ref}", _loops(ref)) for ref in LOOP_CASES]


# ----------------------------------------------------------------------------
# cohomology

def g0_battery():
    """so(2) on R^2, so(3) on R^3 and so(2) + so(3) on R^5."""
    so2 = so_algebra(np.eye(2), "so(2)")
    so3 = so_algebra(np.eye(3), "so(3)")
    return {"so2": so2, "so3": so3, "so2+so3": direct_sum(so2, so3)}


def _type_params(kind):
    return {"f": lambda z: 1.0} if kind == "type3" else None


def _whitehead(s):
    so3 = so_algebra(np.eye(3), "so(3)")
    h1 = cohomology(LieModule.from_algebra(so3), s.tol).h1_dim
    return [reports.dimension("cohomology/so3-R3/h1", "semisimple algebras have vanishing H^1", h1, 0)]


def _bbi_checks(gname, g0):
    def fn(s):
        out = []
        n = g0.ambient_dim
        for kind in ("type1", "type2", "type3"):
            if kind == "type3" and gname == "so3":
                continue  # so(3) has trivial centre, so type 3 does not exist over it
            alg, space, frame = bbi_type(kind, g0, _type_params(kind))
            mod = LieModule.from_algebra(alg)
            h1 = cohomology(mod, s.tol).h1_dim
            cid = f"cohomology/{kind}/{gname}"
            if kind == "type2":
                out.append(reports.dimension(f"{cid}/h1", "H^1 of g0 x V0 equals dim S0 + dim z + dim ker",
                                             h1, remark_h1_dimension(g0, n)))
            else:
                out.append(reports.dimension(f"{cid}/h1", "H^1 vanishes for types 1 and 3", h1, 0))
                lperp = SubspaceBasis(np.eye(n + 2)[:, :n + 1])
                hq = cohomology(quotient_module(mod, lperp), s.tol).h1_dim
                out.append(reports.dimension(f"{cid}/h1-quotient", "H^1(g, V/L^perp) vanishes for types 1 and 3",
                                             hq, 0))
        return out
    return fn


COHOMOLOGY_SUITE = [("whitehead", _whitehead)] + [(f"bbi/{k}", _bbi_checks(k, g)) for k, g in g0_battery().items()]


# ----------------------------------------------------------------------------
# null plane

def null_plane_checks(config, settings, prefix):
    """System, alpha/beta, fundamental-equation and cone checks for one configuration."""
    data = data_from_config(config)
    eta = solve_eta(data)
    chart = build_metric(data, eta)
    pts = _grid(chart, settings)
    m = data.m0_dim
    n = chart.dim
    T, S = m, m + 1

    def unit(k):
        return lambda x: [1.0 if i == k else 0.0 for i in range(n)]

    ab_res, fund = 0.0, {}
    for p in pts:
        ab = alpha_beta(data, eta, p, chart)
        ab_res = max(ab_res, ab.residual)
        fr = fundamental_residuals(chart, unit(T), unit(S), ab.alpha, ab.beta, p)
        for k, v in fr.as_dict().items():
            fund[k] = max(fund.get(k, 0.0), v)
    hat = cone(chart)
    cc = cone_null_plane_check(data, eta, _grid(hat, settings), chart)
    out = [reports.residual(f"{prefix}/system", "first-order system for eta", system_residual(eta, pts), 1e-9),
           reports.residual(f"{prefix}/alpha-beta", "nabla V and nabla Z with the closed-form alpha, beta",
                            ab_res, 1e-8)]
    out += [reports.residual(f"{prefix}/fundamental/{k}", "fundamental equations and their consequences", v, 1e-8)
            for k, v in sorted(fund.items())]
    out += [reports.residual(f"{prefix}/cone-plane", "span{V, xi + Z} is parallel on the cone", cc.plane_residual,
                             1e-8),
            reports.residual(f"{prefix}/cone-null", "span{V, xi + Z} is totally null", cc.null_residual, 1e-8)]
    return out, chart


def _null_plane(name):
    def fn(s):
        return null_plane_checks(packaged_config(name), s, f"null-plane/{name}")[0]
    return fn


def _beta_control(s):
    data = data_from_config(packaged_config("null_plane_default"))
    eta = solve_eta(data)
    chart = build_metric(data, eta)
    n = chart.dim
    T, S = data.m0_dim, data.m0_dim + 1
    worst = np.inf
    for p in _grid(chart, s, cap=8):
        ab = alpha_beta(data, eta, p, chart)
        beta = ab.beta.copy()
        beta[S] += 0.1
        fr = fundamental_residuals(chart, lambda x: [1.0 if i == T else 0.0 for i in range(n)],
                                   lambda x: [1.0 if i == S else 0.0 for i in range(n)], ab.alpha, beta, p)
        worst = min(worst, fr.max())
    return [reports.control("null-plane/control-corrupted-beta", "beta(Z) + 0.1 violates the fundamental equations",
                            worst, 1e-3)]


def _eta_control(s):
    data = data_from_config(packaged_config("null_plane_default"))
    eta = solve_eta(data)
    chart = build_metric(data, eta)
    cc = cone_null_plane_check(data, corrupt_eta(eta), _grid(cone(chart), s))
    return [reports.control("null-plane/control-corrupted-eta", "eta_t + 0.1 t breaks parallelness on the cone",
                            cc.plane_residual, 1e-3)]


def _bad_f1(s):
    try:
        data_from_config(packaged_config(BAD_NULL_PLANE_CONFIG))
    except ConstructionError as exc:
        return [reports.control("null-plane/control-vanishing-f1", "f1 crossing zero is rejected", 1.0, 0.5,
                                diagnosis=str(exc))]
    return [reports.control("null-plane/control-vanishing-f1", "f1 crossing zero is rejected", 0.0, 0.5)]


NULL_PLANE_SUITE = [(f"config/{c}", _null_plane(c)) for c in NULL_PLANE_CONFIGS]
NULL_PLANE_SUITE += [("beta", _beta_control), ("eta", _eta_control), ("f1", _bad_f1)]


# ----------------------------------------------------------------------------

SUITES = {
    "cone-identities": CONE_SUITE,
    "doubled-derivatives": DOUBLED_SUITE,
    "psi-isometry": PSI_SUITE,
    "holonomy-catalog": HOLONOMY_SUITE,
    "cohomology": COHOMOLOGY_SUITE,
    "null-plane": NULL_PLANE_SUITE,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name, settings=None):
    """Run one suite (or ``all``) and return its :class:`~conelab.reports.SuiteReport`."""
    settings = settings or Settings()
    if name == "all":
        return reports.merge([run_suite(k, settings) for k in SUITES], "all")
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}")
    jobs = [(key, _guard(fn, f"{name}/{key}", "")) for key, fn in SUITES[name]]

    def timed(job):
        t0 = time.perf_counter()
        out = job[1](settings)
        return job[0], out, time.perf_counter() - t0

    workers = max(1, int(settings.workers))
    if workers == 1:
        results = [timed(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(timed, jobs))
    checks = [c for _, out, _ in results for c in out]
    timing = {key: round(dt, 3) for key, _, dt in results} if settings.timing else None
    return reports.SuiteReport(name, tuple(checks), settings.echo(), timing)
