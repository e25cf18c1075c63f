"""Truncated multivariate Taylor arithmetic ("jets").

A jet of order N in n variables stores the Taylor coefficients of a function
around a point, for all monomials of total degree at most N.  Monomials are
ordered by degree first, so truncating a jet to degree d is a prefix slice
``c[:space.count(d)]``.  That property is what lets tensor-valued jets lose one
degree per differentiation without any re-indexing.

Coefficient arrays have shape ``(ncoef,) + batch``.  The batch axes allow the
same expression to be evaluated at many base points at once, which is how the
parallel-transport integrator evaluates Christoffel symbols along a bundle of
loops.

Two layers are provided:

* :class:`Jet`, a scalar with operator overloading, used to evaluate metric
  component expressions;
* ``tp_*`` functions on plain arrays of shape ``(ncoef_d,) + tensor_shape``,
  used for the tensor algebra (inverse metric, Christoffel symbols, curvature).
"""

import math
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError

__all__ = [
    "JetSpace", "Jet", "jet_space", "variables", "exp", "sin", "cos", "log", "sqrt",
    "tp_mul", "tp_deriv", "tp_inv", "tp_truncate", "tp_const_mul", "value", "as_tp",
]


class JetSpace:
    """Monomial bookkeeping for jets of a fixed order in a fixed number of variables."""

    def __init__(self, nvars, order):
        if nvars < 0 or order < 0:
            raise ConfigurationError("jet space needs nvars >= 0 and order >= 0")
        self.nvars = nvars
        self.order = order
        exps = []
        for d in range(order + 1):
            for combo in combinations_with_replacement(range(nvars), d):
                e = [0] * nvars
                for v in combo:
                    e[v] += 1
                exps.append(e)
        self.exponents = np.array(exps, dtype=np.int64).reshape(-1, nvars)
        self.degrees = self.exponents.sum(axis=1)
        self._counts = [math.comb(nvars + d, d) for d in range(order + 1)]
        self._count_to_degree = {c: d for d, c in enumerate(self._counts)}
        self.ncoef = self._counts[-1]
        self._base = order + 1
        self._weights = self._base ** np.arange(nvars, dtype=np.int64)
        codes = self.exponents @ self._weights
        self._order_codes = np.argsort(codes)
        self._sorted_codes = codes[self._order_codes]
        self._build_pairs()
        self._build_shifts()
        self._build_derivatives()
        self._sum_cache = {}

    def count(self, d):
        """Number of monomials of degree at most ``d``."""
        if d < 0:
            return 0
        return self._counts[d]

    def degree_of(self, ncoef):
        try:
            return self._count_to_degree[ncoef]
        except KeyError:
            raise ValueError(f"{ncoef} is not a graded prefix length") from None

    def index_of(self, exps):
        """Vectorised lookup of exponent rows; -1 where degree exceeds the order."""
        exps = np.atleast_2d(exps)
        codes = exps @ self._weights
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.clip(pos, 0, len(self._sorted_codes) - 1)
        ok = (self._sorted_codes[pos] == codes) & (exps.sum(axis=1) <= self.order)
        return np.where(ok, self._order_codes[pos], -1)

    def _build_pairs(self):
        ii, jj = [], []
        for i in range(self.ncoef):
            m = self.count(self.order - int(self.degrees[i]))
            ii.append(np.full(m, i, dtype=np.int64))
            jj.append(np.arange(m, dtype=np.int64))
        ii = np.concatenate(ii)
        jj = np.concatenate(jj)
        kk = self.index_of(self.exponents[ii] + self.exponents[jj])
        order = np.argsort(self.degrees[kk], kind="stable")
        self.pair_i, self.pair_j, self.pair_k = ii[order], jj[order], kk[order]
        deg_k = self.degrees[self.pair_k]
        self._npairs = [int(np.searchsorted(deg_k, d, side="right")) for d in range(self.order + 1)]

    def _build_shifts(self):
        """shift[i][j] = index of monomial i times monomial j, for j over degree <= order - deg i."""
        self.shift = []
        for i in range(self.ncoef):
            m = self.count(self.order - int(self.degrees[i]))
            self.shift.append(self.index_of(self.exponents[i] + self.exponents[:m]))

    def _build_derivatives(self):
        """For each variable v: source index of K + e_v and factor K_v + 1, over degree <= order-1."""
        m = self.count(self.order - 1)
        self.deriv_src = np.zeros((self.nvars, m), dtype=np.int64)
        self.deriv_fac = np.zeros((self.nvars, m))
        for v in range(self.nvars):
            shifted = self.exponents[:m].copy()
            shifted[:, v] += 1
            self.deriv_src[v] = self.index_of(shifted)
            self.deriv_fac[v] = shifted[:, v]

    def summation(self, d):
        """Sparse matrix adding pair products into output coefficients, truncated at degree d."""
        mat = self._sum_cache.get(d)
        if mat is None:
            npairs = self._npairs[d]
            mat = sp.csr_matrix(
                (np.ones(npairs), (self.pair_k[:npairs], np.arange(npairs))),
                shape=(self.count(d), npairs),
            )
            self._sum_cache[d] = mat
        return mat

    def pairs(self, d):
        n = self._npairs[d]
        return self.pair_i[:n], self.pair_j[:n]

    def multiply(self, a, b, d=None):
        """Product of two coefficient arrays (leading axis = coefficients), truncated at degree d."""
        if d is None:
            d = min(self.degree_of(a.shape[0]), self.degree_of(b.shape[0]))
        pi, pj = self.pairs(d)
        prod = a[pi] * b[pj]
        shape = prod.shape
        out = self.summation(d) @ prod.reshape(shape[0], -1)
        return np.asarray(out).reshape((self.count(d),) + shape[1:])

    def monomial_values(self, h):
        """Evaluate every monomial at displacement ``h`` (for Taylor-polynomial evaluation)."""
        h = np.asarray(h, dtype=float)
        return np.prod(h[None, :] ** self.exponents, axis=1)


@lru_cache(maxsize=64)
def jet_space(nvars, order):
    """Shared, cached :class:`JetSpace` instance."""
    return JetSpace(nvars, order)


class Jet:
    """A scalar truncated Taylor series with coefficient array ``c`` of shape (ncoef,) + batch."""

    __slots__ = ("space", "c")
    __array_ufunc__ = None  # let numpy scalars/arrays defer to the reflected operators

    def __init__(self, space, c):
        self.space = space
        self.c = c

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, space, value):
        value = np.asarray(value, dtype=float)
        c = np.zeros((space.ncoef,) + value.shape)
        c[0] = value
        return cls(space, c)

    @classmethod
    def variable(cls, space, index, value):
        value = np.asarray(value, dtype=float)
        c = np.zeros((space.ncoef,) + value.shape)
        c[0] = value
        if space.order >= 1:
            c[1 + index] = 1.0
        return cls(space, c)

    @property
    def value(self):
        return self.c[0]

    @property
    def batch_shape(self):
        return self.c.shape[1:]

    def _lift(self, other):
        if isinstance(other, Jet):
            return other.c
        other = np.asarray(other, dtype=float)
        c = np.zeros((self.space.ncoef,) + np.broadcast_shapes(other.shape, self.batch_shape))
        c[0] = other
        return c

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.c + other.c)
        c = self._lift(other) + self.c
        return Jet(self.space, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.multiply(self.c, other.c, self.space.order))
        return Jet(self.space, self.c * np.asarray(other, dtype=float))

    __rmul__ = __mul__

    def reciprocal(self):
        return self ** -1

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.space, self.c / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(log(self) * p)
        if isinstance(p, (int, np.integer)) or (np.ndim(p) == 0 and float(p).is_integer() and p >= 0):
            p = int(p)
            if p >= 0:
                result = Jet.constant(self.space, np.ones(self.batch_shape))
                base = self
                while p:
                    if p & 1:
                        result = result * base
                    p >>= 1
                    if p:
                        base = base * base
                return result
        a0 = self.c[0]
        k = np.arange(self.space.order + 1)
        coeffs = []
        binom = 1.0
        for kk in k:
            coeffs.append(binom * a0 ** (p - kk))
            binom = binom * (p - kk) / (kk + 1)
        return _compose(self, coeffs)

    def __rpow__(self, base):
        return exp(self * math.log(base))

    def __repr__(self):
        return f"Jet(order={self.space.order}, nvars={self.space.nvars}, value={self.c[0]!r})"


def _compose(a, coeffs):
    """Evaluate sum_k coeffs[k] * (a - a0)^k by Horner's scheme."""
    delta = Jet(a.space, a.c.copy())
    delta.c[0] = 0.0
    acc = Jet.constant(a.space, coeffs[-1] * np.ones(a.batch_shape))
    for ck in reversed(coeffs[:-1]):
        acc = acc * delta + ck
    return acc


def exp(a):
    if not isinstance(a, Jet):
        return np.exp(a)
    e0 = np.exp(a.c[0])
    return _compose(a, [e0 / math.factorial(k) for k in range(a.space.order + 1)])


def sin(a):
    if not isinstance(a, Jet):
        return np.sin(a)
    s0, c0 = np.sin(a.c[0]), np.cos(a.c[0])
    cyc = [s0, c0, -s0, -c0]
    return _compose(a, [cyc[k % 4] / math.factorial(k) for k in range(a.space.order + 1)])


def cos(a):
    if not isinstance(a, Jet):
        return np.cos(a)
    s0, c0 = np.sin(a.c[0]), np.cos(a.c[0])
    cyc = [c0, -s0, -c0, s0]
    return _compose(a, [cyc[k % 4] / math.factorial(k) for k in range(a.space.order + 1)])


def log(a):
    if not isinstance(a, Jet):
        return np.log(a)
    a0 = a.c[0]
    coeffs = [np.log(a0)] + [(-1.0) ** (k + 1) / (k * a0 ** k) for k in range(1, a.space.order + 1)]
    return _compose(a, coeffs)


def sqrt(a):
    if not isinstance(a, Jet):
        return np.sqrt(a)
    return a ** 0.5


def variables(space, point):
    """Coordinate jets x_i = p_i + (variable i) at ``point`` (last axis = coordinate)."""
    point = np.asarray(point, dtype=float)
    return [Jet.variable(space, i, point[..., i]) for i in range(space.nvars)]


def value(x):
    """Constant-term value of a jet, or the number itself."""
    return x.c[0] if isinstance(x, Jet) else np.asarray(x, dtype=float)


def as_tp(space, entries, batch_shape=()):
    """Stack a nested list of jets/numbers into a tensor polynomial (ncoef,) + batch + tensor."""
    arr = np.empty(len(entries) if not isinstance(entries[0], (list, tuple)) else
                   (len(entries), len(entries[0])), dtype=object)
    arr[...] = entries if arr.ndim == 1 else [list(row) for row in entries]
    flat_in = arr.ravel()
    out = np.zeros((space.ncoef,) + tuple(batch_shape) + (flat_in.size,))
    for idx, e in enumerate(flat_in):
        if isinstance(e, Jet):
            out[..., idx] = e.c
        else:
            out[0, ..., idx] = e
    return out.reshape((space.ncoef,) + tuple(batch_shape) + arr.shape)


# ----------------------------------------------------------------------------
# tensor polynomials: arrays of shape (count(d),) + tensor_shape

def tp_truncate(space, a, d):
    return a[: space.count(d)]


def tp_mul(space, subscripts, a, b):
    """Contract two tensor polynomials with an einsum over their tensor indices.

    ``subscripts`` refers to the tensor indices only, e.g. ``"ij,jk->ik"``.
    The result is truncated at the smaller of the two degrees.  The loop runs
    over the monomials of ``a``; each contracts with a prefix of ``b`` and is
    scattered to the product monomials, so no pair table is materialised.
    """
    d = min(space.degree_of(a.shape[0]), space.degree_of(b.shape[0]))
    lhs, out_idx = subscripts.split("->")
    sa, sb = lhs.split(",")
    m = space.count(d)
    out = None
    for i in range(m):
        ai = a[i]
        if not np.any(ai):
            continue
        nb = space.count(d - int(space.degrees[i]))
        contrib = np.einsum(f"{sa},P{sb}->P{out_idx}", ai, b[:nb], optimize=True)
        if out is None:
            out = np.zeros((m,) + contrib.shape[1:])
        out[space.shift[i][:nb]] += contrib
    if out is None:
        shape = np.einsum(f"{sa},{sb}->{out_idx}", a[0], b[0]).shape
        out = np.zeros((m,) + shape)
    return out


def tp_const_mul(subscripts, a, m):
    """Contract a tensor polynomial with a constant tensor ``m``."""
    lhs, out = subscripts.split("->")
    sa, sb = lhs.split(",")
    return np.einsum(f"P{sa},{sb}->P{out}", a, m, optimize=True)


def tp_deriv(space, a):
    """Gradient: shape (count(d-1), nvars) + tensor, derivative index first."""
    d = space.degree_of(a.shape[0])
    if d == 0:
        raise ConfigurationError("cannot differentiate a degree-0 jet; raise the jet order")
    m = space.count(d - 1)
    src = space.deriv_src[:, :m]
    fac = space.deriv_fac[:, :m]
    g = a[src] * fac.reshape(fac.shape + (1,) * (a.ndim - 1))
    return np.moveaxis(g, 0, 1)


def tp_inv(space, g):
    """Inverse of a matrix-valued tensor polynomial by a Neumann series around its value."""
    d = space.degree_of(g.shape[0])
    g0inv = np.linalg.inv(g[0])
    e = g.copy()
    e[0] = 0.0
    step = -tp_const_mul("ij,jk->ik", e, g0inv)
    term = np.zeros_like(g)
    term[0] = np.eye(g.shape[-1])
    total = term.copy()
    for _ in range(d):
        term = tp_mul(space, "ij,jk->ik", term, step)
        total = total + term
    return np.einsum("ij,Pjk->Pik", g0inv, total)
