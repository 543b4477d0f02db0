"""Sparse regression and sparse PCA front ends.

Sparse regression: minimizing ||A x - b||^2 over k-sparse x is the sparse
QCQP with A0 = (A'b)(A'b)' and A1 = A'A, and the root bound has a closed
form — a ratio of conditional minor sums of A'A + (A'b)(A'b)' and A'A minus
one — equal to the conditional expectation of the explained energy under
volume sampling.  The greedy therefore runs on two tracked matrices with no
root finding at all.

Sparse PCA: A0 = A, A1 = I, so every node matrix shares one eigenbasis and
a single diagonalization seeds all of them.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .charpoly import conditionals_vector, elem_sym
from .exceptions import (
    DegenerateDesignError,
    ExhaustedSupportError,
    InputError,
    SingularPivotError,
)
from .linalg import (
    PIVOT_RTOL,
    EigenDecomposition,
    diagonalize,
    schur_complement,
    update_diagonalization,
    validate_support,
    validate_symmetric,
)
from .lpm import ZERO_RTOL, conditional_eval
from .solver import (
    ETA_TIE_ATOL,
    GreedyTrace,
    Round,
    _argmax_tied,
    _conditioning_rounds,
    pencil_nodes,
)


@dataclass
class SolveReport:
    """Outcome of one sparse solve: support, attained value, witnesses,
    per-round score trace, and the unconditioned bound when available."""

    method: str
    support: tuple
    value: float
    eta_trace: list
    elapsed_ms: float
    x: np.ndarray | None = None
    coef: np.ndarray | None = None
    loss: float | None = None
    eta_p: float | None = None
    trace: GreedyTrace | None = field(default=None, repr=False)


def _check_design(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    if a.ndim != 2:
        raise InputError(f"design must be 2-d, got shape {a.shape}")
    if b.size != a.shape[0]:
        raise InputError(
            f"response length {b.size} does not match {a.shape[0]} rows"
        )
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InputError("design or response has non-finite entries")
    return a, b


def sparse_regression_eta(p, a, b, t_set=()):
    """Closed-form root bound for sparse regression, conditioned on T.

    Equals p|_T(A'A + (A'b)(A'b)') / p|_T(A'A) - 1: the bound on the
    explained energy ||b||^2 - loss over supports of p containing T.
    """
    a, b = _check_design(a, b)
    if a.shape[1] != p.n:
        raise InputError(f"oracle size {p.n} does not match {a.shape[1]} columns")
    m0 = a.T @ a
    g = a.T @ b
    m1 = m0 + np.outer(g, g)
    try:
        num = conditional_eval(p, t_set, m1)
        den = conditional_eval(p, t_set, m0)
    except SingularPivotError:
        raise DegenerateDesignError(
            f"A'A is singular along the conditioning set {tuple(t_set)}"
        ) from None
    if abs(den) <= 1e-12 * max(1.0, abs(num)):
        raise DegenerateDesignError(
            f"no support of the oracle through {tuple(t_set)} carries rank k mass"
        )
    return num / den - 1.0


def volume_sampling_expectation(a, b, t_set, k, p=None, max_n=20):
    """Conditional expectation of the explained energy under volume sampling.

    Draws S with probability proportional to a_S det(A'A|_S) among the
    supports of p containing T (unit coefficients when p is None) and
    averages ||b||^2 - min_x ||A_S x - b||^2.  Enumerates all supports, so n
    is capped at ``max_n``.
    """
    from .exceptions import BudgetError

    a, b = _check_design(a, b)
    n = a.shape[1]
    if n > max_n:
        raise BudgetError(f"n = {n} exceeds the enumeration guard {max_n}")
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    t = validate_support(t_set, n)
    if len(t) > k:
        raise InputError("conditioning set larger than k")
    m0 = a.T @ a
    normb2 = float(b @ b)
    total = 0.0
    acc = 0.0
    for s in itertools.combinations(range(n), k):
        if not set(t) <= set(s):
            continue
        weight = 1.0 if p is None else p.coefficient(s)
        if weight <= 0.0:
            continue
        idx = np.asarray(s)
        weight *= float(np.linalg.det(m0[np.ix_(idx, idx)]))
        if weight <= 0.0:
            continue
        coef, *_ = np.linalg.lstsq(a[:, idx], b, rcond=None)
        gain = normb2 - float(np.sum((a[:, idx] @ coef - b) ** 2))
        total += weight
        acc += weight * gain
    if total <= 0.0:
        raise DegenerateDesignError(
            f"no support through {t} carries volume-sampling mass"
        )
    return acc / total


def sparse_regression_solve(a, b, k, tie_atol=ETA_TIE_ATOL):
    """Greedy k-sparse least squares via closed-form minor-ratio scores.

    Tracks A'A and its rank-one shift A'A + (A'b)(A'b)' through paired
    eigendecomposition updates and Schur steps; each round scores every
    remaining column by the conditional minor-sum ratio and keeps the best.
    Returns a report whose ``value`` is the explained energy ||b||^2 - loss.
    """
    start = time.perf_counter()
    a, b = _check_design(a, b)
    m, n = a.shape
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    normb2 = float(b @ b)
    m0 = a.T @ a

    if normb2 == 0.0:
        support = tuple(range(k))
        coef = np.zeros(n)
        elapsed = 1e3 * (time.perf_counter() - start)
        return SolveReport(
            method="char",
            support=support,
            value=0.0,
            eta_trace=[0.0] * k,
            elapsed_ms=elapsed,
            coef=coef,
            loss=0.0,
            eta_p=0.0,
        )

    g = a.T @ b
    d0 = diagonalize(m0)
    d1 = update_diagonalization(d0, 1.0, g)
    y0 = m0.copy()
    y1 = m0 + np.outer(g, g)
    det0 = 1.0
    det1 = 1.0

    den_p = float(elem_sym(d0.values, k)[k])
    num_p = float(elem_sym(d1.values, k)[k])
    eta_p = num_p / den_p - 1.0 if abs(den_p) > 1e-12 * max(1.0, abs(num_p)) else None

    chosen = []
    rounds = []
    for rnd in range(k):
        deg = k - rnd
        v0 = det0 * conditionals_vector(y0, d0, deg)
        v1 = det1 * conditionals_vector(y1, d1, deg)
        usable = np.ones(n, dtype=bool)
        usable &= np.abs(np.diag(y0)) > PIVOT_RTOL * float(np.max(np.abs(y0)))
        usable &= np.abs(np.diag(y1)) > PIVOT_RTOL * float(np.max(np.abs(y1)))
        usable[chosen] = False
        # The denominator is a sum of PSD minors: nonpositive mass means no
        # rank-k support extends through that column.
        den_scale = float(np.max(np.abs(v0[usable]), initial=0.0))
        scores = np.full(n, -np.inf)
        for j in np.flatnonzero(usable):
            if v0[j] <= ZERO_RTOL * max(1.0, den_scale):
                continue
            scores[j] = v1[j] / v0[j] - 1.0
        pick = _argmax_tied(scores, tie_atol)
        if pick is None:
            raise ExhaustedSupportError(
                f"design rank exhausted after {tuple(chosen)}", chosen
            )
        rounds.append(Round(pick, float(scores[pick]), scores))

        piv0 = y0[pick, pick]
        piv1 = y1[pick, pick]
        d0 = update_diagonalization(d0, -1.0 / piv0, y0[:, pick].copy())
        d1 = update_diagonalization(d1, -1.0 / piv1, y1[:, pick].copy())
        det0 *= piv0
        det1 *= piv1
        y0 = schur_complement(y0, pick)
        y1 = schur_complement(y1, pick)
        chosen.append(pick)

    support = tuple(sorted(chosen))
    idx = np.asarray(support)
    coef_s, *_ = np.linalg.lstsq(a[:, idx], b, rcond=None)
    coef = np.zeros(n)
    coef[idx] = coef_s
    loss = float(np.sum((a @ coef - b) ** 2))
    value = normb2 - loss
    trace = GreedyTrace(
        rounds=rounds, support=support, value=value, x=None, eta_p=eta_p
    )
    elapsed = 1e3 * (time.perf_counter() - start)
    return SolveReport(
        method="char",
        support=support,
        value=value,
        eta_trace=trace.eta_trace,
        elapsed_ms=elapsed,
        coef=coef,
        loss=loss,
        eta_p=eta_p,
        trace=trace,
    )


def omp_baseline(a, b, k):
    """Orthogonal matching pursuit with column deflation.

    Each round picks the column with the largest squared projection onto the
    current residual, then projects it out of the remaining columns and the
    residual.  The final coefficients are refit on the original columns.
    """
    start = time.perf_counter()
    a, b = _check_design(a, b)
    m, n = a.shape
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    normb2 = float(b @ b)
    work = a.copy()
    resid = b.copy()
    col_floor = 1e-12 * float(np.max(np.sum(a * a, axis=0)))
    chosen = []
    rounds = []
    for _ in range(k):
        norms = np.sum(work * work, axis=0)
        usable = norms > col_floor
        usable[chosen] = False
        gains = np.full(n, -np.inf)
        live = np.flatnonzero(usable)
        if live.size:
            proj = work[:, live].T @ resid
            gains[live] = proj * proj / norms[live]
        pick = _argmax_tied(gains, ETA_TIE_ATOL)
        if pick is None:
            raise ExhaustedSupportError(
                f"columns rank-exhausted after {tuple(chosen)}", chosen
            )
        q = work[:, pick] / math.sqrt(norms[pick])
        resid = resid - q * (q @ resid)
        work = work - np.outer(q, q @ work)
        chosen.append(pick)
        rounds.append(Round(pick, normb2 - float(resid @ resid), gains))

    support = tuple(sorted(chosen))
    idx = np.asarray(support)
    coef_s, *_ = np.linalg.lstsq(a[:, idx], b, rcond=None)
    coef = np.zeros(n)
    coef[idx] = coef_s
    loss = float(np.sum((a @ coef - b) ** 2))
    value = normb2 - loss
    trace = GreedyTrace(rounds=rounds, support=support, value=value, x=None)
    elapsed = 1e3 * (time.perf_counter() - start)
    return SolveReport(
        method="omp",
        support=support,
        value=value,
        eta_trace=trace.eta_trace,
        elapsed_ms=elapsed,
        coef=coef,
        loss=loss,
        trace=trace,
    )


def sparse_pca_solve(a, k, ell=None, tie_atol=ETA_TIE_ATOL, keep_node_state=False):
    """k-sparse leading eigenvector of a symmetric matrix.

    The pencil is (A, I), so one diagonalization of A seeds every node
    matrix by a spectral shift; the rounds then run exactly as in the
    general fast path.  ``value`` is the largest eigenvalue of A restricted
    to the selected support and ``x`` the corresponding unit eigenvector.
    """
    start = time.perf_counter()
    a = validate_symmetric(a)
    n = a.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    ell = k + 1 if ell is None else int(ell)
    if ell < k + 1:
        raise InputError(f"need at least {k + 1} nodes, got {ell}")

    lam, qmat = np.linalg.eigh(a)
    nodes = pencil_nodes(float(lam[0]), float(lam[-1]), ell)
    xs = [t * np.eye(n) - a for t in nodes]
    decomps = [
        EigenDecomposition(values=(t - lam)[::-1].copy(), vectors=qmat[:, ::-1].copy())
        for t in nodes
    ]
    trace = _conditioning_rounds(
        a,
        np.eye(n),
        k,
        nodes,
        xs,
        decomps,
        tie_atol=tie_atol,
        keep_node_state=keep_node_state,
    )
    elapsed = 1e3 * (time.perf_counter() - start)
    return SolveReport(
        method="char",
        support=trace.support,
        value=trace.value,
        eta_trace=trace.eta_trace,
        elapsed_ms=elapsed,
        x=trace.x,
        eta_p=trace.eta_p,
        trace=trace,
    )
