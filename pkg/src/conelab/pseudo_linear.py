"""Linear algebra over pseudo-Euclidean spaces of signature (t, s).

Every rank decision in the package goes through :func:`numerical_rank`, which
thresholds singular values at ``tol * sigma_max``.  That keeps the answer
independent of the overall scale of the input.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DefiniteSignatureError, DimensionError

DEFAULT_TOL = 1e-8


def numerical_rank(a, tol=DEFAULT_TOL):
    """Rank of ``a`` with the relative singular-value threshold ``tol * sigma_max``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def null_space(a, tol=DEFAULT_TOL, *, atol=0.0):
    """Orthonormal basis (as columns) of the kernel of ``a``.

    ``atol`` adds an absolute floor to the relative threshold; it matters when
    ``a`` is itself a residual that should be treated as exactly zero.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n)
    _, sv, vt = np.linalg.svd(a, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    thresh = max(tol * smax, atol)
    r = int(np.sum(sv > thresh)) if smax > 0 else 0
    return vt[r:].T.copy()


def range_basis(a, tol=DEFAULT_TOL):
    """Orthonormal basis (as columns) of the column space of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.size == 0:
        return np.zeros((a.shape[0], 0))
    u, sv, _ = np.linalg.svd(a, full_matrices=False)
    if sv[0] == 0.0:
        return np.zeros((a.shape[0], 0))
    r = int(np.sum(sv > tol * sv[0]))
    return u[:, :r].copy()


def signature_of(metric, tol=DEFAULT_TOL):
    """Return ``(t, s)``: numbers of negative and positive eigenvalues."""
    w = np.linalg.eigvalsh(np.asarray(metric, dtype=float))
    scale = max(np.max(np.abs(w)), 1.0) if w.size else 1.0
    t = int(np.sum(w < -tol * scale))
    s = int(np.sum(w > tol * scale))
    return t, s


def standard_metric(t, s):
    """diag(-1,...,-1, 1,...,1) with ``t`` minus signs."""
    return np.diag(np.r_[-np.ones(t), np.ones(s)])


@dataclass(frozen=True)
class QuadraticSpace:
    """A real vector space with a nondegenerate symmetric bilinear form."""

    metric: np.ndarray
    signature: tuple = None

    def __post_init__(self):
        g = np.array(self.metric, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"metric must be square, got shape {g.shape}")
        if np.max(np.abs(g - g.T), initial=0.0) > 1e-12:
            raise ValueError("metric is not symmetric")
        g.setflags(write=False)
        object.__setattr__(self, "metric", g)
        sig = signature_of(g)
        if sum(sig) != g.shape[0]:
            raise ValueError(f"metric is degenerate, signature {sig} in dim {g.shape[0]}")
        if self.signature is not None and tuple(self.signature) != sig:
            raise ValueError(f"declared signature {tuple(self.signature)} but metric has {sig}")
        object.__setattr__(self, "signature", sig)

    @classmethod
    def standard(cls, t, s):
        return cls(standard_metric(t, s))

    @property
    def dim(self):
        return self.metric.shape[0]

    def inner(self, x, y):
        return float(np.asarray(x) @ self.metric @ np.asarray(y))

    def flat(self, x):
        """Lower an index: the covector g(x, .)."""
        return self.metric @ np.asarray(x, dtype=float)

    def sharp(self, alpha):
        """Raise an index."""
        return np.linalg.solve(self.metric, np.asarray(alpha, dtype=float))

    def is_skew(self, m, tol=1e-10):
        """True when ``m`` is skew with respect to the metric: g m + m^T g = 0."""
        return skew_residual(m, self.metric) <= tol * max(1.0, np.max(np.abs(m), initial=0.0))


def skew_residual(m, metric):
    """Max-norm of ``g m + m^T g``."""
    gm = metric @ m
    return float(np.max(np.abs(gm + gm.T), initial=0.0))


@dataclass(frozen=True)
class SubspaceBasis:
    """An ordered list of linearly independent vectors, stored as columns."""

    vectors: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise DimensionError("vectors must be a 2-d array of column vectors")
        if v.shape[1] and numerical_rank(v, self.tol) != v.shape[1]:
            raise ValueError("subspace vectors are linearly dependent")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def empty(cls, ambient_dim):
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def span(cls, vectors, tol=DEFAULT_TOL):
        """Orthonormal basis of the span of possibly dependent columns."""
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        return cls(range_basis(v, tol), tol)

    @property
    def ambient_dim(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.dim

    def projector(self):
        """Euclidean orthogonal projector onto the span."""
        if self.dim == 0:
            return np.zeros((self.ambient_dim, self.ambient_dim))
        q = range_basis(self.vectors, self.tol)
        return q @ q.T

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        r = x - self.projector() @ x
        return np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(x))


@dataclass(frozen=True)
class GramAnalysis:
    rank: int
    radical: SubspaceBasis
    is_nondegenerate: bool
    is_totally_null: bool


def gram_analysis(space, sub, tol=DEFAULT_TOL):
    """Restrict the metric to ``sub`` and report its rank and radical.

    The radical is returned in ambient coordinates.  A subspace is treated as
    totally null when its Gram matrix vanishes at the absolute level ``tol``
    relative to the size of the vectors, since a zero Gram matrix has no
    meaningful largest singular value to scale against.
    """
    if sub.ambient_dim != space.dim:
        raise DimensionError(f"subspace lives in dim {sub.ambient_dim}, space has dim {space.dim}")
    b = np.asarray(sub.vectors)
    k = b.shape[1]
    if k == 0:
        return GramAnalysis(0, SubspaceBasis.empty(space.dim), True, True)
    gram = b.T @ space.metric @ b
    scale = max(np.max(np.abs(space.metric)), 1.0) * max(np.max(np.abs(b)), 1.0) ** 2
    if np.max(np.abs(gram)) <= tol * scale:
        return GramAnalysis(0, SubspaceBasis(b, sub.tol), False, True)
    rank = numerical_rank(gram, tol)
    ker = null_space(gram, tol)
    radical = SubspaceBasis(b @ ker, sub.tol) if ker.shape[1] else SubspaceBasis.empty(space.dim)
    return GramAnalysis(rank, radical, rank == k, False)


@dataclass(frozen=True)
class NullFrame:
    """Null vectors e_minus, e_plus with g(e-, e+) = 1 and an orthogonal complement V0."""

    e_minus: np.ndarray
    e_plus: np.ndarray
    v0_basis: SubspaceBasis

    def matrix(self):
        """Columns (e-, V0 basis, e+): the ordered basis used for stabiliser block forms."""
        return np.column_stack([self.e_minus, self.v0_basis.vectors, self.e_plus])

    @property
    def n(self):
        return self.v0_basis.dim

    def v0_metric(self, space):
        b = self.v0_basis.vectors
        return b.T @ space.metric @ b

    def residual(self, space):
        """Max deviation of the frame's Gram matrix from the ideal block form."""
        f = self.matrix()
        gram = f.T @ space.metric @ f
        n = self.n
        ideal = np.zeros_like(gram)
        ideal[0, -1] = ideal[-1, 0] = 1.0
        ideal[1:n + 1, 1:n + 1] = gram[1:n + 1, 1:n + 1]
        return float(np.max(np.abs(gram - ideal)))


def _sign_fix(v):
    """Flip ``v`` so that its first entry of significant size is positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if idx.size and v[idx[0]] < 0:
        return -v
    return v


def null_frame(space):
    """Build a null frame by pairing the most negative and the most positive eigenvector.

    With unit eigenvectors a (timelike, eigenvalue -la) and b (spacelike,
    eigenvalue lb), the vectors a/sqrt(la) and b/sqrt(lb) are orthonormal for g
    and e-/+ = (a' +- b')/sqrt 2 are null with g(e-, e+) = 1 up to sign.  The
    remaining eigenvectors are g-orthogonal to both and span V0.
    """
    t, s = space.signature
    if t == 0 or s == 0:
        raise DefiniteSignatureError(f"signature {(t, s)} is definite; no null vectors exist")
    w, q = np.linalg.eigh(space.metric)
    q = np.array([_sign_fix(q[:, i]) for i in range(q.shape[1])]).T
    a = q[:, 0] / np.sqrt(-w[0])
    b = q[:, -1] / np.sqrt(w[-1])
    e_minus = (a + b) / np.sqrt(2.0)
    e_plus = (-a + b) / np.sqrt(2.0)
    rest = q[:, 1:-1]
    v0 = rest / np.sqrt(np.abs(w[1:-1]))[None, :] if rest.shape[1] else rest
    return NullFrame(e_minus, e_plus, SubspaceBasis(v0))


def null_frame_from(space, e_minus, tol=DEFAULT_TOL):
    """Complete a given null vector to a null frame with V0 g-orthonormal.

    Used when the null line is dictated by geometry, for instance ``d/dv`` on a
    doubled chart.
    """
    g = space.metric
    e_minus = np.asarray(e_minus, dtype=float)
    if abs(e_minus @ g @ e_minus) > 1e-10 * max(1.0, e_minus @ e_minus):
        raise ValueError("e_minus is not null")
    # Any vector w with g(e_minus, w) != 0; pick the coordinate direction maximising it.
    ge = g @ e_minus
    w = np.zeros_like(e_minus)
    w[int(np.argmax(np.abs(ge)))] = 1.0
    w = w / (ge @ w)
    e_plus = w - 0.5 * (w @ g @ w) * e_minus
    # V0 is the g-orthogonal complement of span(e-, e+).
    c = np.column_stack([g @ e_minus, g @ e_plus]).T
    comp = null_space(c, tol)
    if comp.shape[1]:
        gram = comp.T @ g @ comp
        wv, qv = np.linalg.eigh(gram)
        order = np.argsort(wv, kind="stable")
        wv, qv = wv[order], qv[:, order]
        comp = comp @ qv / np.sqrt(np.abs(wv))[None, :]
    return NullFrame(e_minus, e_plus, SubspaceBasis(comp))
