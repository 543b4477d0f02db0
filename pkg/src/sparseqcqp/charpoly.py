"""Characteristic coefficients and elementary symmetric polynomial kernels.

The degree-k characteristic coefficient of a symmetric matrix is the sum of
its k x k principal minors, i.e. the k-th elementary symmetric polynomial of
the eigenvalues.  This module provides the one-pass dynamic program for all
degrees up to k, leave-one-out tables for every index (divide and conquer,
O(k n log n)), and the per-index conditional minor sums built from them.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InputError
from .linalg import EigenDecomposition, validate_symmetric


def _as_values(values):
    values = np.asarray(values, dtype=float).ravel()
    if values.size and not np.all(np.isfinite(values)):
        raise InputError("values contain non-finite entries")
    return values


def elem_sym(values, k):
    """Elementary symmetric polynomials e_0 .. e_k of ``values``.

    One pass over the inputs, O(k n) time; returns an array of length k+1
    with ``out[j] = e_j(values)``.
    """
    values = _as_values(values)
    k = int(k)
    if not 0 <= k <= values.size:
        raise InputError(f"degree {k} outside [0, {values.size}]")
    e = np.zeros(k + 1)
    e[0] = 1.0
    for i, x in enumerate(values):
        top = min(i + 1, k)
        e[1 : top + 1] = e[1 : top + 1] + x * e[:top]
    return e


def char_coeff(x, k):
    """Sum of all k x k principal minors of a symmetric matrix.

    Accepts either a matrix or a precomputed :class:`EigenDecomposition`.
    """
    if isinstance(x, EigenDecomposition):
        lam = x.values
    else:
        lam = np.linalg.eigvalsh(validate_symmetric(x))
    k = int(k)
    if not 0 <= k <= lam.size:
        raise InputError(f"degree {k} outside [0, {lam.size}]")
    return float(elem_sym(lam, k)[k])


def leave_one_out(values, k):
    """Table of e_j over every leave-one-out subset, j = 0 .. k.

    Row i holds e_0 .. e_k of ``values`` with entry i removed.  Built by a
    divide-and-conquer tree where each half inherits the table of the other
    half's values, O(k n log n) total instead of the O(k n^2) rebuild.
    """
    values = _as_values(values)
    n = values.size
    if n < 2:
        raise InputError("leave_one_out needs at least two values")
    k = int(k)
    if not 0 <= k <= n - 1:
        raise InputError(f"degree {k} outside [0, {n - 1}]")
    out = np.empty((n, k + 1))
    base = np.zeros(k + 1)
    base[0] = 1.0

    def extend(table, chunk):
        for x in chunk:
            grown = table.copy()
            grown[1:] += x * table[:-1]
            table = grown
        return table

    def walk(lo, hi, table):
        # table holds the DP state over every value outside values[lo:hi]
        if hi - lo == 1:
            out[lo] = table
            return
        mid = (lo + hi) // 2
        walk(lo, mid, extend(table, values[mid:hi]))
        walk(mid, hi, extend(table, values[lo:mid]))

    walk(0, n, base)
    return out


def leave_one_out_naive(values, k):
    """Reference leave-one-out table, one fresh O(k n) pass per row."""
    values = _as_values(values)
    n = values.size
    if n < 2:
        raise InputError("leave_one_out_naive needs at least two values")
    k = int(k)
    if not 0 <= k <= n - 1:
        raise InputError(f"degree {k} outside [0, {n - 1}]")
    out = np.empty((n, k + 1))
    for i in range(n):
        out[i] = elem_sym(np.delete(values, i), k)
    return out


def grad_char_diag(values, k):
    """Diagonal of the gradient of the degree-k characteristic coefficient
    at a diagonal matrix: entry i is e_{k-1} of the other eigenvalues."""
    values = _as_values(values)
    n = values.size
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"degree {k} outside [1, {n}]")
    if n == 1:
        return np.ones(1)
    return leave_one_out(values, k - 1)[:, k - 1].copy()


def conditionals_vector(x, decomp, k):
    """Sum of the k x k principal minors through each index, for all indices.

    ``decomp`` must diagonalize ``x``.  Entry j equals the minor sum of x
    restricted to supports containing j; one O(n^2) product after the
    leave-one-out table instead of n separate restricted evaluations.
    """
    x = validate_symmetric(x)
    lam = np.asarray(decomp.values, dtype=float)
    qmat = decomp.vectors
    n = x.shape[0]
    if lam.size != n or qmat.shape != (n, n):
        raise InputError("decomposition shape does not match the matrix")
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"degree {k} outside [1, {n}]")
    if k == 1:
        return np.diag(x).copy()
    lead = float(elem_sym(lam, k - 1)[k - 1])
    grad = grad_char_diag(lam, k - 1)
    return lead * np.diag(x) - (qmat * qmat) @ (lam * lam * grad)
