"""Holonomy algebras from curvature jets and from numerical parallel transport.

Two independent pipelines estimate the holonomy algebra at a point:

* :func:`ambrose_singer_span` closes the span of the curvature endomorphisms
  (nabla^k R)(c_1, ..., c_k; d_i, d_j) over coordinate slots, k <= max_order.
  For analytic metrics this is the holonomy algebra once the dimension has
  stabilised, which is reported as a convergence flag.
* :func:`loop_span` transports frames around small coordinate parallelograms
  with RK4 and takes matrix logarithms; each logarithm lies in the holonomy
  algebra exactly, up to integration error.

:func:`stabilizer_analysis` splits a span that fixes a null vector into its
linear part and its translational ideal.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

import numpy as np
from scipy.linalg import sqrtm

from . import jets
from .charts import curvature_jet
from .errors import ConfigurationError, DomainError, IntegrationError, StabiliserError
from .lie_matrix import (MatrixAlgebra, _orthonormal_rows, decomposability_probe,
                         invariant_null_line_search, lie_closure, linear_part,
                         stab_decompose, translational_ideal)
from .pseudo_linear import (DEFAULT_TOL, NullFrame, QuadraticSpace, SubspaceBasis,
                            skew_residual)

DEFAULT_MAX_ORDER = 3
STEPS_PER_UNIT = 4096
LOOP_SIDES = (0.05, 0.1, 0.2)
TAIL_SIDES = (0.1,)  # lassos only need to reach derivative directions, one size suffices
TAIL_LENGTH = 0.1
GENERATOR_FLOOR = 1e-10  # absolute size below which a curvature generator counts as zero
LOOP_TOL = 1e-7  # rank tolerance for spans of loop logarithms


@dataclass(frozen=True)
class EndoSpan:
    """A bracket-closed span of endomorphisms of T_pM, skew for the metric at p."""

    point: np.ndarray
    metric_at_point: np.ndarray
    basis: np.ndarray  # (dim, n, n), orthonormal under the Frobenius pairing
    generation_order: int
    tol: float = DEFAULT_TOL
    converged: Optional[bool] = None
    label: str = ""
    dim_next: Optional[int] = None

    def __post_init__(self):
        g = np.asarray(self.metric_at_point, float)
        for m in self.basis:
            res = skew_residual(m, g)
            if res > 1e-8 * max(1.0, float(np.max(np.abs(g)))):
                raise StabiliserError(f"span element is not skew for the metric (residual {res:.3g})", res)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def ambient_dim(self):
        return len(self.metric_at_point)

    def algebra(self):
        if self.dim == 0:
            return MatrixAlgebra.zero(self.ambient_dim, self.label)
        return MatrixAlgebra(np.asarray(self.basis), self.tol, self.label)

    def space(self):
        return QuadraticSpace(np.asarray(self.metric_at_point, float))


def _closure(mats, n, tol, label):
    mats = [m for m in mats if np.linalg.norm(m) > GENERATOR_FLOOR]
    if not mats:
        return MatrixAlgebra.zero(n, label)
    flat = np.array([m.ravel() for m in mats])
    # reduce to a spanning set first; the closure then brackets few matrices
    norms = np.linalg.norm(flat, axis=1)
    rows = _orthonormal_rows(flat / norms[:, None], tol)
    return lie_closure(list(rows.reshape(-1, n, n)), tol, label)


def curvature_generators(cj, k):
    """All (nabla^k R)(c_1..c_k; d_i, d_j) with i < j, in a fixed slot order."""
    n = len(cj.metric_at_point)
    out = []
    for cs in product(range(n), repeat=k):
        for i in range(n):
            for j in range(i + 1, n):
                out.append(cj.endomorphism(k, cs + (i, j)))
    return out


def ambrose_singer_span(chart, p, max_order=DEFAULT_MAX_ORDER, tol=DEFAULT_TOL, jet_order=None,
                        check_convergence=True):
    """Lie closure of the curvature endomorphisms and their covariant derivatives up to ``max_order``.

    With ``check_convergence`` the span is recomputed with one more derivative
    and ``converged`` records whether the dimension stayed the same.  The jet
    order must be at least ``max_order + 3`` in that case (``max_order + 2``
    otherwise); the minimal order is used when ``jet_order`` is omitted.
    """
    if max_order < 0:
        raise ConfigurationError("max_order must be non-negative")
    top = max_order + 1 if check_convergence else max_order
    need = top + 2
    if jet_order is not None and jet_order < need:
        raise ConfigurationError(f"max_order {max_order} needs jet order >= {need}, got {jet_order}")
    p = np.asarray(p, dtype=float)
    cj = curvature_jet(chart, p, top, jet_order if jet_order is not None else need)
    n = chart.dim
    gens = []
    for k in range(max_order + 1):
        gens.extend(curvature_generators(cj, k))
    alg = _closure(gens, n, tol, f"hol({chart.label})")
    converged, dim_next = None, None
    if check_convergence:
        more = _closure(gens + curvature_generators(cj, top), n, tol, "")
        dim_next = more.dim
        converged = dim_next == alg.dim
    return EndoSpan(p, cj.metric_at_point, alg.basis, max_order, tol, converged, alg.label, dim_next)


def span_from_algebra(alg, point, metric, label="", order=0):
    return EndoSpan(np.asarray(point, float), np.asarray(metric, float), alg.basis, order,
                    alg.tol, None, label or alg.label)


# ----------------------------------------------------------------------------
# comparison of spans

@dataclass(frozen=True)
class SpanComparison:
    dim_a: int
    dim_b: int
    principal_distance: float
    a_in_b: bool
    b_in_a: bool


def _flat_basis(x):
    basis = x.basis if hasattr(x, "basis") else np.asarray(x)
    basis = np.asarray(basis, float)
    if basis.size == 0:
        return np.zeros((0, 1))
    flat = basis.reshape(len(basis), -1)
    return _orthonormal_rows(flat, DEFAULT_TOL)


def span_compare(a, b, tol=1e-6):
    """Principal-angle comparison of two spans (EndoSpan, MatrixAlgebra or stacked matrices).

    ``principal_distance`` is the sine of the largest principal angle, where
    a dimension mismatch contributes angles of 90 degrees; it is 0 exactly for
    equal subspaces.  The containment flags use the sines of the
    min(dim_a, dim_b) smallest angles.
    """
    qa, qb = _flat_basis(a), _flat_basis(b)
    da, db = len(qa), len(qb)
    if da and db and qa.shape[1] != qb.shape[1]:
        raise ValueError("spans live in different ambient spaces")
    if da == 0 or db == 0:
        dist = 0.0 if da == db else 1.0
        return SpanComparison(da, db, dist, da == 0, db == 0)
    # sines of the principal angles directly, which stay accurate near zero
    small, large = (qa, qb) if da <= db else (qb, qa)
    resid = small - (small @ large.T) @ large
    common = float(np.linalg.norm(resid, 2))
    dist = common if da == db else 1.0
    a_in_b = da <= db and common <= tol
    b_in_a = db <= da and common <= tol
    return SpanComparison(da, db, dist, a_in_b, b_in_a)


# ----------------------------------------------------------------------------
# paths and parallel transport

@dataclass(frozen=True)
class Segment:
    """A coordinate curve t -> position(t), t in [0, 1], with its velocity."""

    position: Callable
    velocity: Callable
    length: float

    @classmethod
    def line(cls, a, b):
        a, b = np.asarray(a, float), np.asarray(b, float)
        d = b - a
        return cls(lambda t: a + np.multiply.outer(np.asarray(t, float), d),
                   lambda t: np.broadcast_to(d, np.shape(t) + d.shape),
                   float(np.linalg.norm(d)))


@dataclass(frozen=True)
class PathSpec:
    segments: tuple
    closed: bool = False

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ConfigurationError("a path needs at least one segment")
        for s, t in zip(segs, segs[1:]):
            if np.max(np.abs(s.position(1.0) - t.position(0.0))) > 1e-12:
                raise ConfigurationError("consecutive path segments do not meet")
        if self.closed and np.max(np.abs(segs[-1].position(1.0) - segs[0].position(0.0))) > 1e-12:
            raise ConfigurationError("closed path does not return to its start")
        object.__setattr__(self, "segments", segs)

    @property
    def start(self):
        return self.segments[0].position(0.0)

    @property
    def end(self):
        return self.segments[-1].position(1.0)

    @classmethod
    def polygon(cls, vertices, closed=True):
        vs = [np.asarray(v, float) for v in vertices]
        if closed:
            vs = vs + [vs[0]]
        return cls(tuple(Segment.line(a, b) for a, b in zip(vs, vs[1:])), closed)


def parallelogram(p, i, j, h, dim=None):
    """Closed coordinate square p -> p + h e_i -> p + h e_i + h e_j -> p + h e_j -> p."""
    p = np.asarray(p, float)
    e = np.eye(len(p) if dim is None else dim)
    return PathSpec.polygon([p, p + h * e[i], p + h * (e[i] + e[j]), p + h * e[j]])


def christoffel_batch(chart, pts):
    """Christoffel symbols gam[..., i, j, k] at a batch of points, from order-1 jets."""
    pts = np.asarray(pts, float)
    batch = pts.shape[:-1]
    space = jets.jet_space(chart.dim, 1)
    x = jets.variables(space, pts)
    g = jets.as_tp(space, chart.components(x), batch)
    g0 = g[0]
    dg = g[1:]  # dg[c, ..., a, b] = d_c g_ab
    dg = np.moveaxis(dg, 0, -3)  # (..., c, a, b)
    lowered = dg + np.swapaxes(dg, -3, -2) - np.moveaxis(dg, -3, -1)
    # lowered[..., i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    ginv = np.linalg.inv(g0)
    return 0.5 * np.matmul(lowered, ginv[..., None, :, :])


def _steps_for(seg, steps):
    if steps is not None:
        return int(steps)
    return max(16, int(math.ceil(STEPS_PER_UNIT * seg.length)))


def _transport_segments(chart, segs, steps, x):
    """RK4 along one segment per batch entry, all with the same step count; x has shape (B, n, n)."""
    t = np.linspace(0.0, 1.0, 2 * steps + 1)
    pos = np.stack([seg.position(t) for seg in segs])  # (B, 2N+1, n)
    for q in pos.reshape(-1, chart.dim)[:: max(1, steps // 8)]:
        if not chart.in_domain(q):
            raise DomainError(f"path leaves the domain of {chart.label} near {q.tolist()}")
    vel = np.stack([seg.velocity(t) for seg in segs])
    gam = christoffel_batch(chart, pos)
    n = chart.dim
    a = -np.matmul(vel[..., None, :], gam.reshape(gam.shape[:-3] + (n, n * n)))
    a = np.swapaxes(a.reshape(a.shape[:-2] + (n, n)), -1, -2)  # a[.., k, j]: dX/dt = A X
    if not np.all(np.isfinite(a)):
        raise IntegrationError("non-finite connection coefficients along the path")
    h = 1.0 / steps
    for s in range(steps):
        a0, am, a1 = a[:, 2 * s], a[:, 2 * s + 1], a[:, 2 * s + 2]
        k1 = a0 @ x
        k2 = am @ (x + 0.5 * h * k1)
        k3 = am @ (x + 0.5 * h * k2)
        k4 = a1 @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(x)):
        raise IntegrationError("parallel transport diverged")
    return x


def _step_counts(path, steps):
    counts = tuple(_steps_for(seg, steps) for seg in path.segments)
    if min(counts) < 1:
        raise IntegrationError("step count must be positive")
    return counts


def parallel_transport_many(chart, paths, steps=None):
    """Transport matrices for several paths; paths with equal step counts are integrated together."""
    groups = {}
    for idx, path in enumerate(paths):
        groups.setdefault(_step_counts(path, steps), []).append(idx)
    out = [None] * len(paths)
    for counts, idxs in groups.items():
        x = np.broadcast_to(np.eye(chart.dim), (len(idxs), chart.dim, chart.dim)).copy()
        for s, n_steps in enumerate(counts):
            x = _transport_segments(chart, [paths[i].segments[s] for i in idxs], n_steps, x)
        for b, i in enumerate(idxs):
            out[i] = x[b]
    return out


def parallel_transport(chart, path, steps=None):
    """Matrix P with P[:, k] = components of the transport of d_k along ``path``.

    ``steps`` is the RK4 step count per segment; by default 4096 steps per
    unit of coordinate length.
    """
    return parallel_transport_many(chart, [path], steps)[0]


def transport_metric_residual(chart, path, transport):
    """Max-norm of P^T g(end) P - g(start)."""
    g0 = chart.metric(path.start)
    g1 = chart.metric(path.end)
    return float(np.max(np.abs(transport.T @ g1 @ transport - g0)))


def logm_near_identity(m, max_norm=0.05, terms=30):
    """Matrix logarithm by inverse scaling and squaring with a Taylor series for log(I + E)."""
    m = np.asarray(m, float)
    n = len(m)
    eye = np.eye(n)
    squarings = 0
    x = m
    while np.linalg.norm(x - eye, 2) > max_norm:
        if squarings > 40:
            raise IntegrationError("matrix logarithm: too many square roots")
        x = np.real(sqrtm(x))
        squarings += 1
    e = x - eye
    term = eye
    total = np.zeros_like(x)
    for k in range(1, terms + 1):
        term = term @ e
        total = total + ((-1.0) ** (k + 1) / k) * term
    return (2.0 ** squarings) * total


# ----------------------------------------------------------------------------
# loop battery

@dataclass(frozen=True)
class LoopRecord:
    plane: tuple
    h: float
    log: np.ndarray
    curvature_residual: float  # max |log(P)/h^2 + R(d_i, d_j)|, only meaningful without a tail
    metric_residual: float
    tail: tuple = ()  # (k, delta): the square sits at p + delta e_k, reached along e_k


def lasso(p, i, j, h, tail=()):
    """Square in plane (i, j) at p, or at p + delta e_k reached by a straight tail and returned from."""
    p = np.asarray(p, float)
    if not tail:
        return parallelogram(p, i, j, h)
    k, delta = tail
    e = np.eye(len(p))
    q = p + delta * e[k]
    square = parallelogram(q, i, j, h).segments
    return PathSpec((Segment.line(p, q),) + square + (Segment.line(q, p),), closed=True)


def loop_battery(chart, p, sides=LOOP_SIDES, planes=None, tails=(), steps=None, workers=None,
                 tail_sides=TAIL_SIDES):
    """Transport around coordinate squares at ``p`` (sides ``sides``) and at the ends of ``tails``
    (sides ``tail_sides``).

    Each record holds log(P); for squares at p itself it also holds the
    residual of log(P)/h^2 against -R(d_i, d_j).
    """
    p = np.asarray(p, float)
    chart.require_domain(p)
    n = chart.dim
    planes = [(i, j) for i in range(n) for j in range(i + 1, n)] if planes is None else list(planes)
    curv = curvature_jet(chart, p, 0).curvature
    jobs = [(pl, h, ()) for pl in planes for h in sides]
    jobs += [(pl, h, tl) for tl in tails for pl in planes for h in tail_sides]
    paths = [lasso(p, i, j, h, tl) for (i, j), h, tl in jobs]
    groups = {}
    for idx, path in enumerate(paths):
        groups.setdefault(_step_counts(path, steps), []).append(idx)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda idxs: parallel_transport_many(chart, [paths[i] for i in idxs], steps),
                                groups.values()))
    transports = [None] * len(paths)
    for idxs, mats in zip(groups.values(), results):
        for i, pm in zip(idxs, mats):
            transports[i] = pm
    records = []
    for ((i, j), h, tl), path, pm in zip(jobs, paths, transports):
        lg = logm_near_identity(pm)
        res = float(np.max(np.abs(lg / h ** 2 + curv[i, j].T))) if not tl else float("nan")
        records.append(LoopRecord((i, j), h, lg, res, transport_metric_residual(chart, path, pm), tuple(tl)))
    return sorted(records, key=lambda r: (r.tail, r.plane, r.h))


def default_tails(chart, p, delta=TAIL_LENGTH):
    """Tails of length ``delta`` along every coordinate direction that stays in the domain."""
    p = np.asarray(p, float)
    out = []
    for k in range(chart.dim):
        for d in (delta, -delta):
            q = p.copy()
            q[k] += d
            if chart.in_domain(q):
                out.append((k, d))
                break
    return tuple(out)


def loop_span(chart, p, records=None, tol=LOOP_TOL, **kwargs):
    """Lie closure of the loop logarithms at ``p``.

    Without precomputed ``records`` the battery runs squares at p and lassos
    along :func:`default_tails`, so that derivative directions of the
    curvature are reached as well.
    """
    p = np.asarray(p, float)
    if records is None:
        kwargs.setdefault("tails", default_tails(chart, p))
        records = loop_battery(chart, p, **kwargs)
    n = chart.dim
    # logs of size comparable to the integration error carry no holonomy
    mats = [r.log / r.h ** 2 for r in records if np.max(np.abs(r.log)) > 1e-9 * r.h ** 2 + 1e-11]
    alg = _closure(mats, n, tol, f"loops({chart.label})")
    return EndoSpan(p, chart.metric(p), alg.basis, 0, tol, None, alg.label)


def convergence_ratio(records, plane, coarse=0.2, fine=0.1):
    """Residual ratio between two loop sizes in one plane; about 2 for a first-order error."""
    by_h = {r.h: r.curvature_residual for r in records if r.plane == tuple(plane) and not r.tail}
    return by_h[coarse] / by_h[fine]


# ----------------------------------------------------------------------------
# doubled charts: frames, projections, stabiliser analysis

def doubled_frame(dw, point):
    """Null frame of a doubled chart: e- = d_v, e+ = d_u, V0 = the base coordinate vectors."""
    n = dw.dim
    e = np.eye(n)
    space = QuadraticSpace(dw.metric(point))
    return space, NullFrame(e[1], e[0], SubspaceBasis(e[:, 2:]))


@dataclass(frozen=True)
class StabilizerReport:
    is_stabiliser: bool
    annihilation_residual: float
    linear_part: Optional[MatrixAlgebra] = None
    translations: Optional[SubspaceBasis] = None
    ideal_residual: float = 0.0
    decomposable_witness: Optional[SubspaceBasis] = None
    null_line: Optional[SubspaceBasis] = None
    diagnosis: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def total_dim(self):
        return self.extra.get("dim")


def stabilizer_analysis(span, frame, tol=DEFAULT_TOL, probes=True):
    """Linear part, translational ideal and probes of a span fixing the null vector e-.

    A span that moves e- is reported with a diagnosis instead of raising.
    """
    space = span.space()
    alg = span.algebra()
    e_minus = np.asarray(frame.e_minus, float)
    ann = float(max((np.max(np.abs(m @ e_minus)) for m in alg.basis), default=0.0))
    scale = max(1.0, float(max((np.max(np.abs(m)) for m in alg.basis), default=0.0)))
    if ann > 1e-8 * scale:
        return StabilizerReport(False, ann, diagnosis=f"span moves e- (residual {ann:.3g}); not a stabiliser",
                                extra={"dim": alg.dim})
    try:
        lin = linear_part(alg, frame, space, tol)
        trans = translational_ideal(alg, frame, space, tol)
    except StabiliserError as exc:
        return StabilizerReport(False, ann, diagnosis=str(exc), extra={"dim": alg.dim})
    witness = null_line = None
    if probes and alg.dim:
        witness = decomposability_probe(alg, space).subspace
        null_line = invariant_null_line_search(alg, space)
    return StabilizerReport(True, ann, lin, trans.basis, trans.ideal_residual, witness, null_line,
                            "", {"dim": alg.dim})


def translational_parts(span, frame):
    """The v blocks of every basis element, as columns in V0 coordinates."""
    space = span.space()
    vs = [stab_decompose(m, frame, space, tol=1e-8).v for m in span.basis]
    return np.array(vs).T if vs else np.zeros((frame.n, 0))


def orthogonality_residual(span, frame, x):
    """Max |G0(x, v)| over translational parts v; x in V0 coordinates."""
    g0 = frame.v0_metric(span.space())
    vs = translational_parts(span, frame)
    if vs.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(np.asarray(x, float) @ g0 @ vs)))


def projection_distance(base, p, u=1.0, v=0.0, max_order=DEFAULT_MAX_ORDER, tol=DEFAULT_TOL):
    """Principal distance between pr_so(hol of the doubled metric) and hol of the base at p."""
    from .cones import double_warped

    dw = double_warped(base)
    q = np.r_[u, v, np.asarray(p, float)]
    til = ambrose_singer_span(dw, q, max_order, tol, check_convergence=False)
    bas = ambrose_singer_span(base, p, max_order, tol, check_convergence=False)
    space, frame = doubled_frame(dw, q)
    lin = linear_part(til.algebra(), frame, space, tol)
    return span_compare(lin, bas.algebra()).principal_distance


def projection_formula_residual(base, p, pmax, qmax, u=1.0):
    """Compare the stabiliser blocks of doubled-curvature generators with their closed forms.

    For (nabla_{d_u}^q nabla_{X_1..X_p} R~)(Y, Z) with base coordinate slots the
    linear part must be c(p, q) / u^q (nabla^p R)(Y, Z) and the translational
    part -c(p, q) / u^(q+1) sum_i (nabla^{p-1}_{omit i} R)(Y, Z) X_i, both in
    base coordinates.
    """
    from .cones import c_factor, double_warped

    p = np.asarray(p, float)
    dw = double_warped(base)
    q_pt = np.r_[u, 0.0, p]
    tcj = curvature_jet(dw, q_pt, pmax + qmax)
    bcj = curvature_jet(base, p, pmax)
    space, frame = doubled_frame(dw, q_pt)
    nb = base.dim
    worst = 0.0
    for pp in range(pmax + 1):
        for qq in range(qmax + 1):
            cf = c_factor(pp, qq)
            for cs in product(range(nb), repeat=pp):
                for y in range(nb):
                    for z in range(y + 1, nb):
                        slots = (0,) * qq + tuple(c + 2 for c in cs) + (y + 2, z + 2)
                        m = tcj.endomorphism(pp + qq, slots)
                        elem = stab_decompose(m, frame, space, tol=1e-8)
                        x_exp = cf / u ** qq * bcj.endomorphism(pp, cs + (y, z))
                        v_exp = np.zeros(nb)
                        for i in range(pp):
                            rest = cs[:i] + cs[i + 1:]
                            v_exp = v_exp + bcj.endomorphism(pp - 1, rest + (y, z))[:, cs[i]]
                        v_exp = -cf / u ** (qq + 1) * v_exp
                        worst = max(worst, abs(elem.a), float(np.max(np.abs(elem.X - x_exp))),
                                    float(np.max(np.abs(elem.v - v_exp))))
    return worst


def doubled_transport_residual(base, p, i, j, h, u=1.0, v=0.0, steps=None):
    """Base block of the doubled transport around a base square versus the base transport.

    The loop stays at fixed (u, v); returns max |P~[base, base] - P|.
    """
    from .cones import double_warped

    p = np.asarray(p, float)
    dw = double_warped(base)
    pb = parallel_transport(base, parallelogram(p, i, j, h), steps)
    q = np.r_[u, v, p]
    pt = parallel_transport(dw, parallelogram(q, i + 2, j + 2, h), steps)
    return float(np.max(np.abs(pt[2:, 2:] - pb)))


# ----------------------------------------------------------------------------
# the printed e^z y^2 matrices

PRINTED_BASIS = ("v", "x", "y", "z", "u")


def printed_plane_wave_matrices():
    """The two 5 x 5 holonomy generators printed for the doubled e^z y^2 plane wave.

    Basis (d_v, d_x, d_y, d_z - f d_x, d_u) at u = 1, v = x = y = z = 0, where
    f = 0 so the fourth vector is d_z.
    """
    a = np.zeros((5, 5))
    a[0, 2] = a[1, 2] = 1.0
    a[2, 3] = a[2, 4] = -1.0
    b = np.zeros((5, 5))
    b[0, 3] = 1.0
    b[1, 4] = -1.0
    return a, b


def printed_to_chart(mats, chart_coords=("u", "v", "x", "y", "z")):
    """Re-express matrices from the printed basis order in the doubled chart's coordinate order."""
    perm = [chart_coords.index(name) for name in PRINTED_BASIS]
    q = np.zeros((5, 5))
    for i, c in enumerate(perm):
        q[c, i] = 1.0
    return [q @ m @ q.T for m in mats]
