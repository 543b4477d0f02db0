"""Greedy support selection for sparse quadratically constrained programs.

The problem: maximize x' A0 x subject to x' A1 x = 1 with at most k nonzero
entries of x, for symmetric A0 and positive definite A1.  Conditioning a
minor-sum polynomial on a partial support and taking the largest root of its
restriction along the pencil A1 t - A0 yields a certified lower bound; each
round adds the index with the best bound.  The final bound never falls below
the unconditioned root, and the selected support's exact value is returned.

Two paths compute the same selection: a generic one that re-evaluates the
oracle per candidate, and a fast path for characteristic coefficients that
maintains per-node eigendecompositions through rank-one updates and reads
all candidate scores from one conditionals vector per node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .charpoly import conditionals_vector, elem_sym
from .exceptions import (
    ExhaustedSupportError,
    InputError,
    SingularPivotError,
    ZeroPolynomialError,
)
from .linalg import (
    PIVOT_RTOL,
    EigenDecomposition,
    diagonalize,
    inner_qcqp_solve,
    schur_complement,
    update_diagonalization,
    validate_symmetric,
)
from .lpm import (
    UnivariatePoly,
    ZERO_RTOL,
    eta,
    lagrange_basis_matrix,
    max_root_newton,
)

# Candidates within this absolute distance of the best root tie; the
# smallest index wins.
ETA_TIE_ATOL = 1e-12


@dataclass(frozen=True)
class Round:
    """One greedy round: the chosen index, its root bound, and the per-index
    candidate bounds (-inf marks skipped or invalid candidates)."""

    chosen: int
    eta: float
    candidate_etas: np.ndarray


@dataclass
class GreedyTrace:
    rounds: list
    support: tuple
    value: float
    x: np.ndarray
    eta_p: float | None = None
    node_state: dict | None = field(default=None, repr=False)

    @property
    def eta_trace(self):
        return [r.eta for r in self.rounds]


def _check_pencil(a0, a1):
    a0 = validate_symmetric(a0, "a0")
    a1 = validate_symmetric(a1, "a1")
    if a0.shape != a1.shape:
        raise InputError("a0 and a1 must have matching shapes")
    try:
        np.linalg.cholesky(a1)
    except np.linalg.LinAlgError:
        raise InputError("a1 must be positive definite") from None
    return a0, a1


def _argmax_tied(scores, tie_atol):
    """Index of the largest finite score; ties within ``tie_atol`` go to the
    smallest index.  Returns None when every score is -inf."""
    best = float(np.max(scores))
    if best == -np.inf:
        return None
    winners = np.flatnonzero(scores >= best - tie_atol)
    return int(winners[0])


def greedy_conditioning(p, a0, a1, k, tie_atol=ETA_TIE_ATOL):
    """Greedy conditioning with per-candidate oracle restrictions.

    Each round evaluates the largest root of p|_{T+j}(A1 t - A0) for every
    remaining index j and keeps the best one.  Candidates whose restriction
    vanishes or whose pivot path is singular are skipped; a round with no
    usable candidate raises ``ExhaustedSupportError`` carrying the partial
    support.
    """
    a0, a1 = _check_pencil(a0, a1)
    n = a0.shape[0]
    if p.n != n:
        raise InputError(f"oracle size {p.n} does not match the matrices ({n})")
    k = int(k)
    if k != p.degree:
        raise InputError(f"k = {k} must equal the oracle degree {p.degree}")

    try:
        eta_p = eta(p, (), a0, a1).eta
    except ZeroPolynomialError:
        eta_p = None

    chosen = []
    rounds = []
    for _ in range(k):
        candidates = np.full(n, -np.inf)
        for j in range(n):
            if j in chosen:
                continue
            try:
                res = eta(p, tuple(chosen) + (j,), a0, a1)
            except (ZeroPolynomialError, SingularPivotError):
                continue
            candidates[j] = res.eta
        pick = _argmax_tied(candidates, tie_atol)
        if pick is None:
            raise ExhaustedSupportError(
                f"no usable candidate after {tuple(chosen)}", chosen
            )
        rounds.append(Round(pick, float(candidates[pick]), candidates))
        chosen.append(pick)

    support = tuple(sorted(chosen))
    value, x = inner_qcqp_solve(a0, a1, support)
    return GreedyTrace(rounds=rounds, support=support, value=value, x=x, eta_p=eta_p)


def pencil_nodes(low, high, ell):
    """Chebyshev interpolation nodes bracketing [low, high] with 10% padding
    on each side (every conditional restriction has its roots inside)."""
    ell = int(ell)
    if ell < 1:
        raise InputError("need at least one node")
    center = 0.5 * (high + low)
    half = 0.6 * (high - low)
    floor = 1e-6 * (1.0 + abs(center))
    half = max(half, floor)
    angles = (2.0 * np.arange(ell) + 1.0) * (np.pi / (2.0 * ell))
    return center + half * np.cos(angles)


def characteristic_method(a0, a1, k, ell=None, tie_atol=ETA_TIE_ATOL, keep_node_state=False):
    """Fast greedy conditioning for the characteristic coefficient.

    Maintains ell = k+1 node matrices X_i = A1 t_i - A0 with running
    eigendecompositions and pivot products; every round reads all candidate
    restrictions from one conditionals vector per node, interpolates each
    candidate's univariate restriction, and advances the chosen index by a
    rank-one eigendecomposition update plus an exact Schur step.
    """
    a0, a1 = _check_pencil(a0, a1)
    n = a0.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    ell = k + 1 if ell is None else int(ell)
    if ell < k + 1:
        raise InputError(f"need at least {k + 1} nodes, got {ell}")

    pencil = scipy.linalg.eigh(a0, a1, eigvals_only=True)
    nodes = pencil_nodes(float(pencil[0]), float(pencil[-1]), ell)
    xs = [a1 * t - a0 for t in nodes]
    decomps = [diagonalize(x) for x in xs]
    return _conditioning_rounds(
        a0, a1, k, nodes, xs, decomps, tie_atol=tie_atol, keep_node_state=keep_node_state
    )


def _conditioning_rounds(a0, a1, k, nodes, xs, decomps, tie_atol, keep_node_state):
    n = a0.shape[0]
    ell = len(nodes)
    # Interpolation and root finding run in the affine coordinate
    # s = (t - center) / half, which keeps the basis conditioned even for
    # tightly clustered node brackets.
    center = 0.5 * (float(np.max(nodes)) + float(np.min(nodes)))
    half = 0.5 * (float(np.max(nodes)) - float(np.min(nodes)))
    if half <= 0.0:
        raise InputError("interpolation nodes must be distinct")
    s_nodes = (np.asarray(nodes, dtype=float) - center) / half
    basis = lagrange_basis_matrix(s_nodes)

    lead = np.array([elem_sym(d.values, k)[k] for d in decomps])
    g0 = UnivariatePoly.from_coeffs(lead @ basis)
    eta_p = center + half * max_root_newton(g0).eta if not g0.is_zero else None

    # A node dies when its matrix, or the selected pivot column, is exactly
    # zero: every later minor through it vanishes identically, so the node
    # contributes exact zeros and stops constraining pivots.  Pivots that are
    # merely below tolerance (a nonzero column that elimination would blow
    # up) disqualify the candidate for the round instead.
    alive = np.array([bool(np.any(x)) for x in xs])
    det_t = np.ones(ell)
    chosen = []
    rounds = []
    state_log = [] if keep_node_state else None

    for rnd in range(k):
        deg = k - rnd
        vals = np.zeros((ell, n))
        usable = np.ones(n, dtype=bool)
        for i in range(ell):
            if not alive[i]:
                continue
            vals[i] = det_t[i] * conditionals_vector(xs[i], decomps[i], deg)
            hazardous = np.abs(np.diag(xs[i])) <= PIVOT_RTOL * float(
                np.max(np.abs(xs[i]))
            )
            hazardous &= np.any(xs[i] != 0.0, axis=0)
            usable &= ~hazardous
        usable[chosen] = False

        candidates = np.full(n, -np.inf)
        live = np.flatnonzero(usable)
        # Zero test is relative to the round's value scale: legitimate values
        # shrink like half**deg when the pencil bracket is narrow.
        scale = float(np.max(np.abs(vals[:, live]))) if live.size else 0.0
        if scale > 0.0:
            for j in live:
                col = vals[:, j]
                if float(np.max(np.abs(col))) <= ZERO_RTOL * scale:
                    continue
                g = UnivariatePoly.from_coeffs(col @ basis)
                if g.is_zero:
                    continue
                root = max_root_newton(g).eta
                if root > -np.inf:
                    candidates[j] = center + half * root
        pick = _argmax_tied(candidates, tie_atol)
        if pick is None:
            raise ExhaustedSupportError(
                f"no usable candidate after {tuple(chosen)}", chosen
            )
        rounds.append(Round(pick, float(candidates[pick]), candidates))

        for i in range(ell):
            if not alive[i]:
                continue
            column = xs[i][:, pick]
            if not np.any(column):
                alive[i] = False
                det_t[i] = 0.0
                continue
            pivot = xs[i][pick, pick]
            decomps[i] = update_diagonalization(decomps[i], -1.0 / pivot, column.copy())
            det_t[i] = det_t[i] * pivot
            xs[i] = schur_complement(xs[i], pick)
        chosen.append(pick)
        if keep_node_state:
            state_log.append({"support": tuple(chosen), "det": det_t.copy()})

    support = tuple(sorted(chosen))
    value, x = inner_qcqp_solve(a0, a1, support)
    node_state = None
    if keep_node_state:
        node_state = {"nodes": np.asarray(nodes, dtype=float), "rounds": state_log}
    return GreedyTrace(
        rounds=rounds,
        support=support,
        value=value,
        x=x,
        eta_p=eta_p,
        node_state=node_state,
    )


def approx_bound_certificate(a0, a1, k, eta_p):
    """Multiplicative/additive certificate (c1, c2, upper) with
    optimum <= c1 * eta_p + c2.

    The shift constant subtracts the trace term: moving A1 eta_p - A0 into
    the positive semidefinite cone costs (n-k) tr(A1 eta_p - A0) / (n (k-1))
    in spectral shift, and dividing by the smallest eigenvalue of A1 turns
    that into a bound on the optimum.  Defined for k >= 2.
    """
    a0, a1 = _check_pencil(a0, a1)
    n = a0.shape[0]
    k = int(k)
    if not 2 <= k <= n:
        raise InputError("the certificate needs 2 <= k <= n")
    eta_p = float(eta_p)
    lam_min = float(np.linalg.eigvalsh(a1)[0])
    scale = (n - k) / (lam_min * n * (k - 1))
    c1 = 1.0 + scale * float(np.trace(a1))
    c2 = -scale * float(np.trace(a0))
    return c1, c2, c1 * eta_p + c2


def exactness_check(p, a0, a1, tol=1e-7):
    """True when every support of p attains the same fixed-support optimum,
    in which case the root bound is exact (it equals that common value)."""
    supports = p.support()
    if supports is None:
        raise InputError("the oracle's support family is not enumerable")
    a0, a1 = _check_pencil(a0, a1)
    root = eta(p, (), a0, a1).eta
    for s in supports:
        value, _ = inner_qcqp_solve(a0, a1, s)
        if abs(value - root) > tol * (1.0 + abs(root)):
            return False
    return True
