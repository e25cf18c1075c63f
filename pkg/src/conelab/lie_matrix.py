"""Matrix Lie algebras and the block structure of null-line stabilisers.

Stabiliser elements are written in a null frame (e-, V0 basis, e+).  With
G0 the Gram matrix of the V0 basis, the element (a, X, v) is the block matrix

    [[a, -(G0 v)^T, 0],
     [0,  X,        v],
     [0,  0,       -a]]

acting on frame coordinates (r, u, s) as (a r - g(v, u), X u + s v, -a s).
The bracket is [(a,X,v), (b,Y,w)] = (0, [X,Y], (X+a)w - (Y+b)v).

The block layout with a translational part ``w`` in the last column and
``g(w, .)`` in the first row, as used for the holonomy of a doubled cone, is
the same element with v = -w.  Subspaces of translations are insensitive to
that sign.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConstructionError, InvarianceError, NumericalInstabilityError,
                     StabiliserError, ToleranceWarning)
from .pseudo_linear import (DEFAULT_TOL, NullFrame, QuadraticSpace, SubspaceBasis,
                            null_space, numerical_rank, range_basis, skew_residual)

SEARCH_SEED = 7
SEARCH_TRIES = 8


def bracket(a, b):
    return a @ b - b @ a


def _orthonormal_rows(flat, tol):
    """Orthonormal basis (rows) of the row span of ``flat`` with the relative rank rule."""
    if flat.shape[0] == 0:
        return flat
    _, sv, vt = np.linalg.svd(flat, full_matrices=False)
    if sv[0] == 0.0:
        return flat[:0]
    r = int(np.sum(sv > tol * sv[0]))
    return vt[:r]


@dataclass(frozen=True)
class MatrixAlgebra:
    """A linear span of square matrices that is closed under commutators (at ``tol``)."""

    basis: np.ndarray  # shape (k, N, N)
    tol: float = DEFAULT_TOL
    label: str = ""

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim == 2 and b.shape[0] == 0:
            raise ValueError("empty basis needs an explicit (0, N, N) shape")
        if b.ndim != 3 or b.shape[1] != b.shape[2]:
            raise ValueError(f"basis must have shape (k, N, N), got {b.shape}")
        if b.shape[0] and numerical_rank(b.reshape(b.shape[0], -1), self.tol) != b.shape[0]:
            raise ValueError("basis matrices are linearly dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def zero(cls, n, label="0"):
        return cls(np.zeros((0, n, n)), label=label)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def ambient_dim(self):
        return self.basis.shape[1]

    def __len__(self):
        return self.dim

    def coords(self, m):
        """Least-squares coordinates of ``m`` in the basis, and the residual norm."""
        if self.dim == 0:
            return np.zeros(0), float(np.linalg.norm(m))
        a = self.basis.reshape(self.dim, -1).T
        c, *_ = np.linalg.lstsq(a, np.ravel(m), rcond=None)
        return c, float(np.linalg.norm(a @ c - np.ravel(m)))

    def contains(self, m, tol=1e-9):
        _, res = self.coords(m)
        return res <= tol * max(1.0, float(np.linalg.norm(m)))

    def closure_residual(self):
        """Max distance of a basis bracket from the span, relative to the bracket's size."""
        worst = 0.0
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                br = bracket(self.basis[i], self.basis[j])
                _, res = self.coords(br)
                worst = max(worst, res / max(1.0, float(np.linalg.norm(br))))
        return worst

    def is_abelian(self, tol=1e-9):
        return all(np.max(np.abs(bracket(self.basis[i], self.basis[j]))) <= tol
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def orthonormal(self):
        """The same span with a Frobenius-orthonormal basis."""
        flat = _orthonormal_rows(self.basis.reshape(self.dim, -1), self.tol)
        return MatrixAlgebra(flat.reshape(-1, self.ambient_dim, self.ambient_dim), self.tol, self.label)

    def transformed(self, p):
        """Basis conjugated by the change of basis ``p``: p^{-1} M p for each M."""
        pinv = np.linalg.inv(p)
        return MatrixAlgebra(np.einsum("ij,kjl,lm->kim", pinv, self.basis, p), self.tol, self.label)


def lie_closure(generators, tol=DEFAULT_TOL, label=""):
    """Smallest bracket-closed span containing ``generators``.

    Generators are normalised to unit Frobenius norm before the rank
    decisions, so that the relative threshold does not depend on how large
    individual generators happen to be.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise ValueError("lie_closure needs at least one generator (use MatrixAlgebra.zero)")
    n = gens[0].shape[0]
    if any(g.shape != (n, n) for g in gens):
        raise ValueError("generators must be square matrices of equal size")
    flat = np.array([g.ravel() for g in gens])
    norms = np.linalg.norm(flat, axis=1)
    scale = norms.max() if norms.size else 0.0
    keep = norms > tol * scale if scale > 0 else np.zeros(len(gens), bool)
    if not np.any(keep):
        return MatrixAlgebra.zero(n, label)
    flat = flat[keep] / norms[keep, None]
    basis = _orthonormal_rows(flat, tol)
    start = 0
    for _ in range(n * n):
        mats = basis.reshape(-1, n, n)
        k = len(mats)
        new = [bracket(mats[i], mats[j]).ravel()
               for i in range(k) for j in range(max(i + 1, start), k)]
        if not new:
            return MatrixAlgebra(mats, tol, label)
        cand = np.vstack([basis, np.array(new)])
        grown = _orthonormal_rows(cand, tol)
        if grown.shape[0] == basis.shape[0]:
            return MatrixAlgebra(basis.reshape(-1, n, n), tol, label)
        # keep the old span first so only pairs involving new elements are bracketed next round
        extra = grown - (grown @ basis.T) @ basis
        extra = _orthonormal_rows(extra, tol)
        start = basis.shape[0]
        basis = np.vstack([basis, extra])
    raise NumericalInstabilityError(f"Lie closure did not stabilise within {n * n} rounds")


def span_algebra(mats, tol=DEFAULT_TOL, label=""):
    """Linear span of ``mats`` without closing it (for comparison with closures)."""
    mats = [np.asarray(m, float) for m in mats]
    n = mats[0].shape[0]
    flat = np.array([m.ravel() for m in mats])
    rows = _orthonormal_rows(flat, tol)
    return MatrixAlgebra(rows.reshape(-1, n, n), tol, label)


def so_algebra(metric, label=None):
    """so(g): all endomorphisms skew with respect to ``metric``."""
    g = np.asarray(metric, dtype=float)
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n))
            e[i, j], e[j, i] = 1.0, -1.0
            mats.append(ginv @ e)
    if not mats:
        return MatrixAlgebra.zero(n, label or "so")
    return MatrixAlgebra(np.array(mats), label=label or f"so({n})")


def direct_sum(*algs):
    """Block-diagonal direct sum of matrix algebras."""
    sizes = [a.ambient_dim for a in algs]
    n = sum(sizes)
    mats = []
    off = 0
    for a, sz in zip(algs, sizes):
        for m in a.basis:
            big = np.zeros((n, n))
            big[off:off + sz, off:off + sz] = m
            mats.append(big)
        off += sz
    if not mats:
        return MatrixAlgebra.zero(n)
    return MatrixAlgebra(np.array(mats), label="+".join(a.label for a in algs))


# ----------------------------------------------------------------------------
# stabiliser block forms

@dataclass(frozen=True)
class StabElement:
    a: float
    X: np.ndarray
    v: np.ndarray

    def block(self, g0):
        """Block matrix in frame coordinates (e-, V0, e+)."""
        n = len(self.v)
        k = np.zeros((n + 2, n + 2))
        k[0, 0] = self.a
        k[0, 1:n + 1] = -(g0 @ self.v)
        k[1:n + 1, 1:n + 1] = self.X
        k[1:n + 1, n + 1] = self.v
        k[n + 1, n + 1] = -self.a
        return k

    def act(self, g0, r, u, s):
        """Action on frame coordinates (r, u, s)."""
        u = np.asarray(u, float)
        return (self.a * r - float(self.v @ g0 @ u), self.X @ u + s * self.v, -self.a * s)

    def bracket(self, other):
        return StabElement(
            0.0,
            bracket(self.X, other.X),
            (self.X + self.a * np.eye(len(self.v))) @ other.v - (other.X + other.a * np.eye(len(self.v))) @ self.v,
        )


def frame_matrix(frame):
    return frame.matrix()


def embed(elem, frame, space):
    """Ambient matrix of a stabiliser element."""
    f = frame.matrix()
    return f @ elem.block(frame.v0_metric(space)) @ np.linalg.inv(f)


def stab_decompose(m, frame, space, tol=1e-10):
    """Split an ambient endomorphism into (a, X, v); reject it if it leaves the stabiliser."""
    m = np.asarray(m, dtype=float)
    f = frame.matrix()
    k = np.linalg.solve(f, m @ f)
    n = frame.n
    scale = max(1.0, float(np.max(np.abs(k))))
    elem = StabElement(float(k[0, 0]), k[1:n + 1, 1:n + 1].copy(), k[1:n + 1, n + 1].copy())
    res = float(np.max(np.abs(elem.block(frame.v0_metric(space)) - k)))
    if res > tol * scale:
        raise StabiliserError(f"matrix is not in the stabiliser of the null line (residual {res:.3g})", res)
    return elem


def translation_element(v, frame, space):
    n = frame.n
    return embed(StabElement(0.0, np.zeros((n, n)), np.asarray(v, float)), frame, space)


@dataclass(frozen=True)
class TranslationalIdeal:
    """T = {v : (0, 0, v) in alg}, as V0 coordinates, with its ideal and invariance residuals."""

    basis: SubspaceBasis
    ideal_residual: float
    invariance_residual: float

    @property
    def dim(self):
        return self.basis.dim

    def ambient(self, frame):
        """The translations as ambient vectors B v."""
        return frame.v0_basis.vectors @ self.basis.vectors


def translational_ideal(alg, frame, space, tol=DEFAULT_TOL):
    elems = [stab_decompose(m, frame, space, tol=1e-8) for m in alg.basis]
    n = frame.n
    if not elems:
        return TranslationalIdeal(SubspaceBasis.empty(n), 0.0, 0.0)
    lin = np.array([np.r_[e.a, e.X.ravel()] for e in elems]).T  # columns = basis elements
    trans = np.array([e.v for e in elems]).T
    scale = max(1.0, float(np.max(np.abs(np.r_[lin.ravel(), trans.ravel()]))))
    ker = null_space(lin, tol, atol=tol * scale)
    if ker.shape[1] == 0:
        tb = SubspaceBasis.empty(n)
    else:
        tb = SubspaceBasis.span(trans @ ker, tol) if np.max(np.abs(trans @ ker)) > tol * scale \
            else SubspaceBasis.empty(n)
    ideal_res = 0.0
    inv_res = 0.0
    if tb.dim:
        proj = tb.projector()
        for e in elems:
            for t in tb.vectors.T:
                moved = (e.X + e.a * np.eye(n)) @ t
                ideal_res = max(ideal_res, float(np.max(np.abs(moved - proj @ moved))))
                xt = e.X @ t
                inv_res = max(inv_res, float(np.max(np.abs(xt - proj @ xt))))
    return TranslationalIdeal(tb, ideal_res, inv_res)


def linear_part(alg, frame, space, tol=DEFAULT_TOL):
    """pr onto so(V0): the span of the X blocks, as matrices on V0 coordinates."""
    n = frame.n
    xs = [stab_decompose(m, frame, space, tol=1e-8).X for m in alg.basis]
    if not xs or max(np.max(np.abs(x)) for x in xs) <= tol:
        return MatrixAlgebra.zero(n, "pr_so")
    return span_algebra(xs, tol, "pr_so")


def conjugation_matrix(v, g0):
    """A_v in frame coordinates."""
    v = np.asarray(v, float)
    n = len(v)
    a = np.eye(n + 2)
    a[0, 1:n + 1] = -(g0 @ v)
    a[0, n + 1] = -0.5 * float(v @ g0 @ v)
    a[1:n + 1, n + 1] = v
    return a


def conjugate_by_translation(alg, v, frame, space):
    """Conjugate every basis element by A_v; (X, Xv) becomes (X, 0)."""
    g0 = frame.v0_metric(space)
    f = frame.matrix()
    a = f @ conjugation_matrix(v, g0) @ np.linalg.inv(f)
    ainv = np.linalg.inv(a)
    for m in alg.basis:
        stab_decompose(m, frame, space, tol=1e-8)
    mats = np.einsum("ij,kjl,lm->kim", a, alg.basis, ainv)
    return MatrixAlgebra(mats, alg.tol, alg.label)


# ----------------------------------------------------------------------------
# probes

@dataclass(frozen=True)
class ProbeResult:
    subspace: object  # SubspaceBasis or None
    commutant_dim: int
    condition_warning: bool


def self_adjoint_commutant(alg, space, tol=DEFAULT_TOL):
    """Basis of {C : [A, C] = 0 for all A in alg, g C = C^T g} as matrices, and a conditioning flag."""
    n = space.dim
    g = space.metric
    eye = np.eye(n)
    rows = []
    for a in alg.basis:
        # vec(A C - C A) with row-major vec: (A kron I - I kron A^T) vec(C)
        rows.append(np.kron(a, eye) - np.kron(eye, a.T))
    # g C - C^T g = 0
    sym = np.kron(g, eye)
    perm = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            perm[i * n + j, j * n + i] = 1.0
    rows.append(sym - np.kron(eye, g.T) @ perm)
    big = np.vstack(rows)
    _, sv, vt = np.linalg.svd(big)
    smax = sv[0]
    r = int(np.sum(sv > tol * smax))
    basis = vt[r:].reshape(-1, n, n)
    kept = sv[:r]
    ill = bool(r and kept[-1] < 1e3 * tol * smax)
    return basis, ill


def decomposability_probe(alg, space, tol=DEFAULT_TOL, seed=SEARCH_SEED):
    """Look for a proper nondegenerate invariant subspace via the self-adjoint commutant.

    Returns a :class:`ProbeResult` whose ``subspace`` is None when the
    commutant only contains scalars or when a generic commutant element has a
    single eigenvalue (the probe then cannot split the module).
    """
    n = space.dim
    basis, ill = self_adjoint_commutant(alg, space, tol)
    if ill:
        warnings.warn("self-adjoint commutant solve is ill conditioned", ToleranceWarning, stacklevel=2)
    flat = basis.reshape(len(basis), -1)
    eye = np.eye(n).ravel() / np.sqrt(n)
    nonscalar = flat - np.outer(flat @ eye, eye)
    # rows of ``flat`` are orthonormal, so a non-scalar direction has norm of order one
    comp = _orthonormal_rows(nonscalar, 1e-6) if len(flat) and np.linalg.norm(nonscalar) > 1e-6 else flat[:0]
    dim_c = len(basis)
    if comp.shape[0] == 0:
        return ProbeResult(None, dim_c, ill)
    rng = np.random.default_rng(seed)
    for _ in range(SEARCH_TRIES):
        c = (rng.standard_normal(comp.shape[0]) @ comp).reshape(n, n)
        c = c / np.linalg.norm(c)
        sub = _generalized_eigenspace(c, tol)
        if sub is not None:
            return ProbeResult(SubspaceBasis(sub), dim_c, ill)
    return ProbeResult(None, dim_c, ill)


def _clusters(vals, tol=1e-6):
    out = []
    for lam in vals:
        for cl in out:
            if abs(cl[0] - lam) <= tol * max(1.0, abs(lam)):
                cl.append(lam)
                break
        else:
            out.append([lam])
    return out


def _generalized_eigenspace(c, tol):
    """Real generalised eigenspace of one eigenvalue (or conjugate pair) of ``c``, if proper."""
    n = c.shape[0]
    vals = np.linalg.eigvals(c)
    clusters = _clusters(list(vals))
    if len(clusters) < 2:
        return None
    cl = sorted(clusters, key=lambda v: (abs(np.imag(v[0])) > 1e-9, np.real(v[0]), np.imag(v[0])))[0]
    lam = np.mean(cl)
    mult = len(cl)
    if abs(lam.imag) > 1e-9:
        p = (c - lam.real * np.eye(n)) @ (c - lam.real * np.eye(n)) + lam.imag ** 2 * np.eye(n)
    else:
        p = c - lam.real * np.eye(n)
    pk = np.linalg.matrix_power(p, mult)
    ker = null_space(pk, 1e-6)
    if 0 < ker.shape[1] < n:
        return ker
    return None


def _null_vector_in(u, g, tol=1e-9):
    """A g-null vector in the column span of ``u``, or None."""
    gram = u.T @ g @ u
    if np.max(np.abs(gram)) <= tol:
        return u[:, 0]
    w, q = np.linalg.eigh(gram)
    scale = np.max(np.abs(w))
    zero = np.flatnonzero(np.abs(w) <= 1e-9 * scale)
    if zero.size:
        return u @ q[:, zero[0]]
    if w[0] < 0 < w[-1]:
        return u @ (q[:, 0] / np.sqrt(-w[0]) + q[:, -1] / np.sqrt(w[-1]))
    return None


def _largest_invariant(mats, w, tol):
    """Largest subspace of span(w) mapped into itself by every matrix."""
    for _ in range(w.shape[1] + 1):
        if w.shape[1] == 0:
            return w
        proj = np.eye(w.shape[0]) - w @ w.T
        stacked = np.vstack([proj @ m @ w for m in mats])
        ker = null_space(stacked, tol, atol=1e-9)
        if ker.shape[1] == w.shape[1]:
            return w
        w = range_basis(w @ ker, tol) if ker.shape[1] else w[:, :0]
    return w


def _common_eigen_subspaces(mats, u, rng, tol, depth=0):
    """Subspaces of span(u) on which every matrix acts as a scalar."""
    restricted = [u.T @ m @ u for m in mats]
    k = u.shape[1]
    scalar = all(np.max(np.abs(r - np.trace(r) / k * np.eye(k)), initial=0.0) <= 1e-9 * max(1.0, np.max(np.abs(r)))
                 for r in restricted)
    if scalar:
        return [u]
    if depth > u.shape[0]:
        return []
    c = sum(rng.standard_normal() * r for r in restricted)
    vals = np.linalg.eigvals(c)
    out = []
    for cl in _clusters([v for v in vals if abs(v.imag) <= 1e-9]):
        lam = float(np.real(np.mean(cl)))
        eig = null_space(c - lam * np.eye(k), 1e-7, atol=1e-9)
        if eig.shape[1] == 0:
            continue
        w = _largest_invariant(mats, range_basis(u @ eig, tol), tol)
        if 0 < w.shape[1] < k:
            out.extend(_common_eigen_subspaces(mats, w, rng, tol, depth + 1))
    return out


def invariant_null_line_search(alg, space, tol=DEFAULT_TOL, seed=SEARCH_SEED):
    """Heuristic search for a null line preserved by every element of ``alg``.

    Candidates come from eigenspaces of seeded generic combinations; each is
    verified exactly before being returned.  None means no line was found,
    which is not a proof that none exists.
    """
    n = space.dim
    g = space.metric
    mats = list(alg.basis)
    if not mats:
        return SubspaceBasis(_null_vector_in(np.eye(n), g)[:, None]) if space.signature[0] else None
    rng = np.random.default_rng(seed)
    for _ in range(SEARCH_TRIES):
        for sub in _common_eigen_subspaces(mats, np.eye(n), rng, tol):
            ell = _null_vector_in(sub, g)
            if ell is None:
                continue
            ell = ell / np.linalg.norm(ell)
            if _is_invariant_null_line(mats, g, ell):
                return SubspaceBasis(ell[:, None])
    return None


def _is_invariant_null_line(mats, g, ell, tol=1e-9):
    if abs(ell @ g @ ell) > tol:
        return False
    for m in mats:
        me = m @ ell
        if np.linalg.norm(me - (me @ ell) * ell) > tol * max(1.0, np.linalg.norm(m)):
            return False
    return True


# ----------------------------------------------------------------------------
# indecomposable Lorentzian stabiliser types

def lorentz_frame(n):
    """Ambient space R^{1, n+1} in frame coordinates (e-, R^n, e+) with anti-diagonal metric."""
    g = np.zeros((n + 2, n + 2))
    g[0, n + 1] = g[n + 1, 0] = 1.0
    g[1:n + 1, 1:n + 1] = np.eye(n)
    space = QuadraticSpace(g)
    e = np.eye(n + 2)
    frame = NullFrame(e[0], e[n + 1], SubspaceBasis(e[:, 1:n + 1]))
    return space, frame


def centre(alg, tol=DEFAULT_TOL):
    """Centre of a matrix algebra, as a list of matrices."""
    k = alg.dim
    if k == 0:
        return []
    flat = alg.basis.reshape(k, -1)
    # sum_i c_i [B_i, B_j] = 0 for all j
    rows = [np.array([bracket(alg.basis[i], alg.basis[j]).ravel() for i in range(k)]).T for j in range(k)]
    ker = null_space(np.vstack(rows), tol, atol=1e-12)
    return [(c @ flat).reshape(alg.ambient_dim, -1) for c in ker.T]


def derived_algebra(alg, tol=DEFAULT_TOL):
    k = alg.dim
    n = alg.ambient_dim
    brs = [bracket(alg.basis[i], alg.basis[j]) for i in range(k) for j in range(i + 1, k)]
    brs = [b for b in brs if np.max(np.abs(b)) > 1e-12]
    if not brs:
        return MatrixAlgebra.zero(n, f"[{alg.label}, {alg.label}]")
    return span_algebra(brs, tol, f"[{alg.label},{alg.label}]")


def common_kernel(alg, n, tol=DEFAULT_TOL):
    if alg.dim == 0:
        return np.eye(n)
    return null_space(np.vstack(list(alg.basis)), tol, atol=1e-12)


def bbi_type(kind, g0, params=None):
    """One of the four indecomposable subalgebras of the null-line stabiliser in so(1, n+1).

    * ``type1``: (R + g0) x V0
    * ``type2``: g0 x V0
    * ``type3``: (h_f + g0') x V0 with h_f = {(f(Z), Z, 0) : Z in z(g0)}
    * ``type4``: (h_f + g0') x T0 with h_f = {(0, Z, f(Z))}, f: z(g0) -> T0^perp surjective

    Here g0' = [g0, g0].  ``params["f"]`` is a callable on centre matrices,
    returning a number (type3) or a vector in V0 (type4); ``params["T0"]`` is a
    basis of T0 (columns) for type4.  The result lives on the frame
    coordinates of :func:`lorentz_frame`.
    """
    params = dict(params or {})
    n = g0.ambient_dim
    space, frame = lorentz_frame(n)
    g0m = np.eye(n)
    for x in g0.basis:
        if skew_residual(x, g0m) > 1e-10:
            raise ConstructionError("g0 must consist of skew matrices on Euclidean R^n")
    if g0.dim and g0.closure_residual() > 1e-9:
        raise ConstructionError("g0 is not closed under brackets")
    elems = []
    zero_x = np.zeros((n, n))

    def add(a, x, v):
        elems.append(embed(StabElement(a, x, np.asarray(v, float)), frame, space))

    if kind in ("type1", "type2", "type3"):
        translations = np.eye(n)
    elif kind == "type4":
        t0 = params.get("T0")
        if t0 is None:
            raise ConstructionError("type4 needs a translation subspace T0")
        t0 = range_basis(np.atleast_2d(np.asarray(t0, float)).reshape(n, -1))
        if not 0 < t0.shape[1] < n:
            raise ConstructionError("type4 needs 0 != T0 != V0")
        proj = t0 @ t0.T
        for x in g0.basis:
            if np.max(np.abs((np.eye(n) - proj) @ x @ t0)) > 1e-10:
                raise ConstructionError("T0 is not invariant under g0")
        t0perp = null_space(t0.T)
        if g0.dim and np.max(np.abs(np.vstack(list(g0.basis)) @ t0perp)) > 1e-10:
            raise ConstructionError("T0^perp must be annihilated by g0")
        translations = t0
    else:
        raise ConstructionError(f"unknown type {kind!r}")

    if kind == "type1":
        add(1.0, zero_x, np.zeros(n))
    if kind in ("type1", "type2"):
        for x in g0.basis:
            add(0.0, x, np.zeros(n))
    if kind in ("type3", "type4"):
        f = params.get("f")
        if f is None:
            raise ConstructionError(f"{kind} needs the map f on the centre")
        z = centre(g0)
        if not z:
            raise ConstructionError(f"{kind} needs g0 with nontrivial centre")
        vals = [f(zz) for zz in z]
        if kind == "type3":
            if max(abs(float(v)) for v in vals) <= 1e-12:
                raise ConstructionError("f vanishes on the centre")
            for zz, val in zip(z, vals):
                add(float(val), zz, np.zeros(n))
        else:
            vecs = np.array([np.asarray(v, float) for v in vals]).T
            t0perp = null_space(translations.T)
            if np.max(np.abs(translations.T @ vecs)) > 1e-10:
                raise ConstructionError("f must take values in T0^perp")
            if numerical_rank(vecs) != t0perp.shape[1]:
                raise ConstructionError("f must be surjective onto T0^perp")
            for zz, vec in zip(z, vecs.T):
                add(0.0, zz, vec)
        for x in derived_algebra(g0).basis:
            add(0.0, x, np.zeros(n))
    for t in translations.T:
        add(0.0, zero_x, t)
    alg = MatrixAlgebra(np.array(elems), label=f"{kind}({g0.label})")
    if alg.closure_residual() > 1e-9:
        raise ConstructionError(f"{kind} parameters do not give a closed algebra")
    return alg, space, frame


# ----------------------------------------------------------------------------
# reference data

BERGER_IRREDUCIBLE = (
    # (name, ambient signature, dimension) for the irreducible non-symmetric holonomy algebras
    ("so(t,s)", "(t,s)", "n(n-1)/2"),
    ("u(p,q)", "(2p,2q)", "(p+q)^2"),
    ("su(p,q)", "(2p,2q)", "(p+q)^2-1"),
    ("sp(p,q)", "(4p,4q)", "(p+q)(2p+2q+1)"),
    ("sp(p,q)+sp(1)", "(4p,4q)", "(p+q)(2p+2q+1)+3"),
    ("so(n,C)", "(n,n)", "n(n-1)"),
    ("g2C", "(7,7)", "28"),
    ("spin(7,C)", "(8,8)", "42"),
    ("g2", "(0,7)", "14"),
    ("spin(7)", "(0,8)", "21"),
    ("g2(2)", "(3,4)", "14"),
    ("spin(3,4)", "(4,4)", "21"),
)


def berger_labels(signature, dim):
    """Names from the reference table whose dimension matches, for labelling computed spans only."""
    t, s = signature
    n = t + s
    out = []
    if dim == n * (n - 1) // 2:
        out.append(f"so({t},{s})")
    if t % 2 == 0 and s % 2 == 0:
        p, q = t // 2, s // 2
        if dim == (p + q) ** 2:
            out.append(f"u({p},{q})")
        if dim == (p + q) ** 2 - 1:
            out.append(f"su({p},{q})")
    if t % 4 == 0 and s % 4 == 0:
        p, q = t // 4, s // 4
        if dim == (p + q) * (2 * (p + q) + 1):
            out.append(f"sp({p},{q})")
        if dim == (p + q) * (2 * (p + q) + 1) + 3:
            out.append(f"sp({p},{q})+sp(1)")
    if t == s and dim == t * (t - 1):
        out.append(f"so({t},C)")
    fixed = {((7, 7), 28): "g2C", ((8, 8), 42): "spin(7,C)", ((0, 7), 14): "g2", ((0, 8), 21): "spin(7)",
             ((3, 4), 14): "g2(2)", ((4, 4), 21): "spin(3,4)"}
    if ((t, s), dim) in fixed:
        out.append(fixed[((t, s), dim)])
    return out
