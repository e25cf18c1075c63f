"""First Lie algebra cohomology with coefficients in a finite-dimensional module.

A cochain phi is stored as an array of shape (alg_dim, mod_dim) whose row a
is phi(X_a).  The cocycle condition on basis pairs,

    rho(X_a) phi(X_b) - rho(X_b) phi(X_a) - sum_k c[a, b, k] phi(X_k) = 0,

is one linear system, and Z^1 is its kernel.  Coboundaries are dv(X_a) = rho(X_a) v.
All kernels and images are taken with the SVD rank rule of
:mod:`conelab.pseudo_linear`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvarianceError, NumericalInstabilityError, RepresentationError
from .lie_matrix import MatrixAlgebra, bracket, centre
from .pseudo_linear import DEFAULT_TOL, SubspaceBasis, null_space, range_basis


def structure_constants(alg, tol=1e-9):
    """c[a, b, k] with [X_a, X_b] = sum_k c[a, b, k] X_k."""
    k = alg.dim
    if k == 0:
        return np.zeros((0, 0, 0))
    a = alg.basis.reshape(k, -1).T
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > 1e10:
        raise NumericalInstabilityError(f"algebra basis is ill conditioned (condition number {cond:.3g})")
    c = np.zeros((k, k, k))
    for i in range(k):
        for j in range(i + 1, k):
            br = bracket(alg.basis[i], alg.basis[j])
            coef, *_ = np.linalg.lstsq(a, br.ravel(), rcond=None)
            res = np.linalg.norm(a @ coef - br.ravel())
            if res > tol * max(1.0, np.linalg.norm(br)):
                raise NumericalInstabilityError(
                    f"bracket of basis elements {i}, {j} leaves the span (residual {res:.3g}); algebra not closed")
            c[i, j] = coef
            c[j, i] = -coef
    return c


def killing_form(c):
    """B(X_a, X_b) = tr(ad X_a ad X_b) from structure constants."""
    return np.einsum("aik,bki->ab", c, c)


def is_semisimple(c, tol=1e-9):
    if c.shape[0] == 0:
        return True
    kf = killing_form(c)
    sv = np.linalg.svd(kf, compute_uv=False)
    return bool(sv[-1] > tol * max(1.0, sv[0]))


@dataclass(frozen=True)
class LieModule:
    """A Lie algebra (by structure constants) acting on R^mod_dim through ``action``."""

    structure_constants: np.ndarray
    action: np.ndarray  # (alg_dim, mod_dim, mod_dim)

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        rho = np.asarray(self.action, dtype=float)
        k = c.shape[0]
        if c.shape != (k, k, k):
            raise RepresentationError("structure constants must have shape (k, k, k)")
        if rho.ndim != 3 or rho.shape[0] != k or rho.shape[1] != rho.shape[2]:
            raise RepresentationError(f"action must have shape ({k}, m, m), got {rho.shape}")
        if k:
            if np.max(np.abs(c + np.swapaxes(c, 0, 1))) > 1e-9:
                raise RepresentationError("structure constants are not antisymmetric")
            jac = (np.einsum("bcm,amk->abck", c, c) + np.einsum("cam,bmk->abck", c, c)
                   + np.einsum("abm,cmk->abck", c, c))
            if np.max(np.abs(jac)) > 1e-9 * max(1.0, np.max(np.abs(c)) ** 2):
                raise RepresentationError("structure constants violate the Jacobi identity")
            res = self.representation_residual(c, rho)
            if res > 1e-9 * max(1.0, np.max(np.abs(rho), initial=0.0) ** 2):
                raise RepresentationError(f"action is not a representation (residual {res:.3g})")
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "action", rho)

    @staticmethod
    def representation_residual(c, rho):
        lhs = np.einsum("abk,kij->abij", c, rho)
        rhs = np.einsum("aij,bjk->abik", rho, rho) - np.einsum("bij,ajk->abik", rho, rho)
        return float(np.max(np.abs(lhs - rhs), initial=0.0))

    @property
    def alg_dim(self):
        return self.structure_constants.shape[0]

    @property
    def mod_dim(self):
        return self.action.shape[1]

    @classmethod
    def from_algebra(cls, alg, action=None):
        """Module given by the matrices of ``alg`` themselves, or by ``action`` on the same basis."""
        c = structure_constants(alg)
        rho = alg.basis if action is None else np.asarray(action, float)
        return cls(c, rho)


@dataclass(frozen=True)
class CohomologyResult:
    z1_basis: np.ndarray  # (dim Z1, alg_dim, mod_dim)
    b1_basis: np.ndarray  # (dim B1, alg_dim, mod_dim)
    h1_complement: np.ndarray  # (h1_dim, alg_dim, mod_dim)
    invariants: np.ndarray  # columns span V^g

    @property
    def z1_dim(self):
        return len(self.z1_basis)

    @property
    def b1_dim(self):
        return len(self.b1_basis)

    @property
    def h1_dim(self):
        return self.z1_dim - self.b1_dim


def cocycle_operator(mod):
    """Matrix of phi -> (rho_a phi_b - rho_b phi_a - c_ab^k phi_k) over pairs a < b."""
    k, m = mod.alg_dim, mod.mod_dim
    rho, c = mod.action, mod.structure_constants
    blocks = []
    for a in range(k):
        for b in range(a + 1, k):
            row = np.zeros((m, k, m))
            row[:, b, :] += rho[a]
            row[:, a, :] -= rho[b]
            for kk in range(k):
                row[:, kk, :] -= c[a, b, kk] * np.eye(m)
            blocks.append(row.reshape(m, k * m))
    if not blocks:
        return np.zeros((0, k * m))
    return np.vstack(blocks)


def cocycle_residual(mod, phi):
    """Max violation of the cocycle identity for one cochain."""
    op = cocycle_operator(mod)
    return float(np.max(np.abs(op @ np.ravel(phi)), initial=0.0))


def coboundary(mod, v):
    return np.einsum("aij,j->ai", mod.action, v)


def cohomology(mod, tol=DEFAULT_TOL):
    """Z^1, B^1 and a complement of B^1 in Z^1 representing H^1."""
    k, m = mod.alg_dim, mod.mod_dim
    op = cocycle_operator(mod)
    scale = max(1.0, float(np.max(np.abs(op), initial=0.0)))
    z = null_space(op, tol, atol=tol * scale) if op.shape[0] else np.eye(k * m)
    d = mod.action.reshape(k * m, m)  # column j = coboundary of e_j
    b = range_basis(d, tol) if m and k else np.zeros((k * m, 0))
    inv = null_space(d, tol, atol=tol * scale) if k else np.eye(m)
    # H^1 complement: part of Z^1 Frobenius-orthogonal to B^1
    if z.shape[1]:
        perp = z - b @ (b.T @ z)
        h = range_basis(perp, 1e-6) if np.max(np.abs(perp)) > 1e-8 else np.zeros((k * m, 0))
    else:
        h = np.zeros((k * m, 0))
    if h.shape[1] != z.shape[1] - b.shape[1]:
        raise NumericalInstabilityError(
            f"inconsistent ranks: dim Z1 = {z.shape[1]}, dim B1 = {b.shape[1]}, complement {h.shape[1]}")
    shape = (-1, k, m)
    return CohomologyResult(z.T.reshape(shape), b.T.reshape(shape), h.T.reshape(shape), inv)


def invariance_residual(mod, sub):
    s = np.asarray(sub.vectors)
    if s.shape[1] == 0:
        return 0.0
    proj = sub.projector()
    return float(max(np.max(np.abs((np.eye(mod.mod_dim) - proj) @ r @ s)) for r in mod.action))


def quotient_module(mod, sub, tol=1e-9):
    """Induced module on V / sub, in Euclidean orthogonal-complement coordinates."""
    res = invariance_residual(mod, sub)
    if res > tol * max(1.0, float(np.max(np.abs(mod.action), initial=0.0))):
        raise InvarianceError(f"subspace is not invariant (residual {res:.3g})", res)
    m = mod.mod_dim
    if sub.dim:
        q = null_space(np.asarray(sub.vectors).T, DEFAULT_TOL)
    else:
        q = np.eye(m)
    rho = np.einsum("ia,kij,jb->kab", q, mod.action, q)
    return LieModule(mod.structure_constants, rho)


def trace_free_symmetric_commutant(g0, n):
    """Basis of trace-free symmetric n x n matrices commuting with every element of ``g0``."""
    eye = np.eye(n)
    rows = [np.kron(x, eye) - np.kron(eye, x.T) for x in g0.basis]
    perm = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            perm[i * n + j, j * n + i] = 1.0
    rows.append(np.eye(n * n) - perm)  # symmetric
    rows.append(eye.ravel()[None, :])  # trace-free
    return null_space(np.vstack(rows), DEFAULT_TOL, atol=1e-12).T.reshape(-1, n, n)


@dataclass(frozen=True)
class RemarkDimensions:
    symmetric_commutant: int
    centre: int
    kernel: int

    @property
    def total(self):
        return self.symmetric_commutant + self.centre + self.kernel


def remark_h1_parts(g0, n):
    """The three contributions dim S0(g0), dim z(g0) and dim ker(g0) of the closed-form H^1."""
    if g0.ambient_dim != n:
        raise ValueError(f"g0 acts on R^{g0.ambient_dim}, expected R^{n}")
    if g0.dim and g0.closure_residual() > 1e-9:
        raise ValueError("g0 is not closed under brackets")
    s0 = len(trace_free_symmetric_commutant(g0, n))
    z = len(centre(g0)) if g0.dim else 0
    ker = n if g0.dim == 0 else null_space(np.vstack(list(g0.basis)), DEFAULT_TOL, atol=1e-12).shape[1]
    return RemarkDimensions(s0, z, ker)


def remark_h1_dimension(g0, n):
    """dim S0(g0) + dim z(g0) + dim ker(g0), predicted dim H^1 of g0 x V0 on the ambient space."""
    return remark_h1_parts(g0, n).total
