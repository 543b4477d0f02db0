"""Dense symmetric linear algebra kernels.

Contains the shared validation helpers, eigendecomposition plumbing, the
rank-one eigendecomposition update (secular equation with deflation), exact
Schur complement steps on full-shape matrices, and the fixed-support
quadratic solve used to score a selected support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import InfeasibleSupportError, InputError, SingularPivotError

# Relative pivot tolerance for elimination steps, against the max-abs entry.
PIVOT_RTOL = 1e-12
# Components of the rotated update vector below this times ||v|| are deflated.
DEFLATION_RTOL = 1e-12
# Bracket-width stop for the secular root finder, relative to the offset.
SECULAR_RTOL = 1e-14
SECULAR_MAX_ITER = 100

_EPS = np.finfo(float).eps


def validate_symmetric(x, name="matrix"):
    """Check that ``x`` is square, finite and symmetric; return an exactly
    symmetric float copy."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InputError(f"{name} must be a square 2-d array, got shape {x.shape}")
    if x.size and not np.all(np.isfinite(x)):
        raise InputError(f"{name} has non-finite entries")
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    skew = float(np.max(np.abs(x - x.T))) if x.size else 0.0
    if skew > 1e-8 * (1.0 + scale):
        raise InputError(f"{name} is not symmetric (max skew {skew:.3e})")
    return 0.5 * (x + x.T)


def validate_support(support, n):
    """Normalize an index collection into a sorted tuple inside ``range(n)``."""
    idx = []
    for j in support:
        jj = int(j)
        if jj != j:
            raise InputError(f"support index {j!r} is not an integer")
        if not 0 <= jj < n:
            raise InputError(f"support index {jj} outside [0, {n})")
        idx.append(jj)
    if len(set(idx)) != len(idx):
        raise InputError(f"support {tuple(idx)} has repeated indices")
    return tuple(sorted(idx))


@dataclass(frozen=True)
class EigenDecomposition:
    """Orthonormal eigenvectors (columns) with ascending eigenvalues."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self):
        return self.values.size

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def diagonalize(x):
    """Full symmetric eigendecomposition, eigenvalues ascending."""
    x = validate_symmetric(x)
    values, vectors = np.linalg.eigh(x)
    return EigenDecomposition(values=values, vectors=vectors)


def schur_complement(x, j):
    """Schur complement of entry ``(j, j)``, kept at full shape.

    Row and column ``j`` of the result are exactly zero; the remaining block
    is ``X - X[:,j] X[j,:] / X[j,j]``.
    """
    x = validate_symmetric(x)
    n = x.shape[0]
    j = int(j)
    if not 0 <= j < n:
        raise InputError(f"pivot index {j} outside [0, {n})")
    pivot = x[j, j]
    if abs(pivot) <= PIVOT_RTOL * float(np.max(np.abs(x))):
        raise SingularPivotError(f"pivot {pivot:.3e} at index {j} below tolerance")
    col = x[:, j].copy()
    out = x - np.outer(col, col) / pivot
    out[j, :] = 0.0
    out[:, j] = 0.0
    return out


def inner_qcqp_solve(a0, a1, support):
    """Maximize ``x' A0 x`` over ``x' A1 x = 1`` with ``x`` supported on ``support``.

    Returns ``(value, x)`` where ``value`` is the top generalized eigenvalue
    of the restricted pencil and ``x`` is a witness embedded in R^n.
    """
    a0 = validate_symmetric(a0, "a0")
    a1 = validate_symmetric(a1, "a1")
    if a0.shape != a1.shape:
        raise InputError("a0 and a1 must have matching shapes")
    n = a0.shape[0]
    t = validate_support(support, n)
    if not t:
        raise InputError("support must be nonempty")
    idx = np.asarray(t)
    a0s = a0[np.ix_(idx, idx)]
    a1s = a1[np.ix_(idx, idx)]
    try:
        chol = scipy.linalg.cholesky(a1s, lower=True)
    except np.linalg.LinAlgError:
        raise InfeasibleSupportError(
            f"constraint matrix restricted to {t} is not positive definite"
        ) from None
    half = scipy.linalg.solve_triangular(chol, a0s, lower=True)
    whitened = scipy.linalg.solve_triangular(chol, half.T, lower=True)
    whitened = 0.5 * (whitened + whitened.T)
    values, vectors = np.linalg.eigh(whitened)
    y = vectors[:, -1]
    x_local = scipy.linalg.solve_triangular(chol, y, lower=True, trans="T")
    x = np.zeros(n)
    x[idx] = x_local
    return float(values[-1]), x


def update_diagonalization(decomp, rho, v):
    """Eigendecomposition of ``Q diag(values) Q' + rho v v'``.

    Deflation plus a vectorized secular-equation solve: the only dense work
    is two matrix products, so one update costs O(n m^2) assembly instead of
    a fresh O(n^3) factorization (m = number of non-deflated eigenvalues).
    """
    rho = float(rho)
    if not np.isfinite(rho):
        raise InputError("rho must be finite")
    v = np.asarray(v, dtype=float).ravel()
    n = decomp.n
    if v.size != n:
        raise InputError(f"update vector has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise InputError("update vector has non-finite entries")
    if np.any(np.diff(decomp.values) < 0):
        raise InputError("decomposition eigenvalues must be ascending")
    if rho == 0.0 or not np.any(v):
        return decomp
    if rho < 0.0:
        flipped = EigenDecomposition(
            values=-decomp.values[::-1], vectors=decomp.vectors[:, ::-1]
        )
        out = _update_positive(flipped, -rho, v)
        return EigenDecomposition(values=-out.values[::-1], vectors=out.vectors[:, ::-1])
    return _update_positive(decomp, rho, v)


def _update_positive(decomp, rho, v):
    d = np.asarray(decomp.values, dtype=float)
    q = decomp.vectors
    n = d.size
    z = q.T @ v
    vnorm = float(np.linalg.norm(v))
    keep = np.abs(z) > DEFLATION_RTOL * vnorm

    # Near-equal eigenvalues that both carry weight are merged by a Givens
    # rotation that zeroes one component of z; the rotated column is an
    # eigenvector up to the (tiny) gap.
    scale = max(float(np.max(np.abs(d), initial=0.0)), rho * vnorm * vnorm)
    gap_tol = 32.0 * _EPS * max(scale, np.finfo(float).tiny)
    rotated = False
    prev = -1
    for i in range(n):
        if not keep[i]:
            continue
        if prev >= 0 and d[i] - d[prev] <= gap_tol:
            if not rotated:
                q = q.copy()
                z = z.copy()
                rotated = True
            r = float(np.hypot(z[prev], z[i]))
            c, s = z[i] / r, z[prev] / r
            col_prev = c * q[:, prev] - s * q[:, i]
            q[:, i] = s * q[:, prev] + c * q[:, i]
            q[:, prev] = col_prev
            z[prev] = 0.0
            z[i] = r
            keep[prev] = False
        prev = i

    m = int(np.count_nonzero(keep))
    if m == 0:
        return EigenDecomposition(values=d.copy(), vectors=q)

    dk = d[keep]
    zk = z[keep]
    mu, diff = _secular_roots(dk, zk * zk, rho)

    # Eigenvectors from the corrected weights: z is recomputed so that the
    # computed roots are the exact eigenvalues of diag(dk) + rho zhat zhat',
    # which keeps the vectors orthogonal even for clustered spectra.
    lognum = np.sum(np.log(np.abs(diff)), axis=1)
    gaps = np.abs(dk[:, None] - dk[None, :])
    np.fill_diagonal(gaps, 1.0)
    logden = np.sum(np.log(gaps), axis=1) + np.log(rho)
    zhat = np.sign(zk) * np.exp(0.5 * (lognum - logden))
    u = zhat[:, None] / diff
    u /= np.linalg.norm(u, axis=0)

    vals = np.concatenate([d[~keep], mu])
    vecs = np.concatenate([q[:, ~keep], q[:, keep] @ u], axis=1)
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(values=vals[order], vectors=vecs[:, order])


def _secular_roots(d, w, rho):
    """All roots of ``1 + rho * sum_i w_i / (d_i - mu)`` for ``rho > 0``.

    ``d`` must be strictly increasing and ``w`` strictly positive.  Returns
    the ascending roots ``mu`` and the matrix ``diff[i, j] = d_i - mu_j``
    computed against the anchoring pole, which stays accurate even when a
    root sits within rounding distance of a pole.
    """
    m = d.size
    rs = rho * float(np.sum(w))
    upper = np.empty(m)
    upper[:-1] = d[1:]
    upper[-1] = d[-1] + rs
    mid = 0.5 * (d + upper)

    fmid = 1.0 + rho * np.sum(w[:, None] / (d[:, None] - mid[None, :]), axis=0)
    anchor = np.where(fmid >= 0.0, np.arange(m), np.arange(m) + 1)
    anchor[-1] = m - 1
    alpha = d[anchor]
    lo = np.where(fmid >= 0.0, 0.0, mid - alpha)
    hi = np.where(fmid >= 0.0, mid - alpha, 0.0)
    if fmid[-1] < 0.0:
        lo[-1] = mid[-1] - alpha[-1]
        hi[-1] = rs * (1.0 + 4.0 * _EPS) + np.finfo(float).tiny

    # Offsets tau from the anchor pole; h(tau) is increasing, so a bracketed
    # Newton step with bisection fallback always converges.
    delta = d[:, None] - alpha[None, :]
    tau = 0.5 * (lo + hi)
    active = np.ones(m, dtype=bool)
    for _ in range(SECULAR_MAX_ITER):
        idx = np.flatnonzero(active)
        den = delta[:, idx] - tau[idx][None, :]
        terms = w[:, None] / den
        h = 1.0 + rho * np.sum(terms, axis=0)
        hp = rho * np.sum(terms / den, axis=0)

        neg = h < 0.0
        lo[idx] = np.where(neg, tau[idx], lo[idx])
        hi[idx] = np.where(neg, hi[idx], tau[idx])
        width = hi[idx] - lo[idx]
        done = width <= SECULAR_RTOL * np.maximum(np.abs(lo[idx]), np.abs(hi[idx]))
        done |= h == 0.0

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            cand = tau[idx] - h / hp
        inside = np.isfinite(cand) & (cand > lo[idx]) & (cand < hi[idx])
        nxt = np.where(inside, cand, 0.5 * (lo[idx] + hi[idx]))
        tau[idx] = np.where(done, tau[idx], nxt)
        active[idx[done]] = False
        if not active.any():
            break

    # Guard against an offset rounding to zero (root exactly at a pole).
    bad = tau == 0.0
    if np.any(bad):
        tau[bad] = np.where(hi[bad] > 0.0, np.finfo(float).tiny, -np.finfo(float).tiny)

    mu = alpha + tau
    diff = delta - tau[None, :]
    return mu, diff
