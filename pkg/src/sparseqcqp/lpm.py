"""Minor-sum (LPM) polynomials and their conditional evaluations.

An LPM polynomial is a nonnegative combination of k x k principal minors,
p(X) = sum_S a_S det(X|_S).  Conditioning on an index set T keeps only the
supports containing T.  This module provides oracle objects for the common
families, conditional evaluation through Schur complements plus univariate
interpolation, restriction along a matrix pencil, and the damped-free Newton
iteration for the largest real root.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npp

from .charpoly import char_coeff
from .exceptions import BudgetError, InputError, ZeroPolynomialError
from .linalg import schur_complement, validate_support, validate_symmetric

# Leading coefficients below TRIM_RTOL times the largest one are dropped.
TRIM_RTOL = 1e-12
# Node evaluations all below ZERO_RTOL (relative to the caller's scale, with
# an absolute floor of 1) flag an identically-zero restriction.
ZERO_RTOL = 1e-12
# Contractual accuracy is 1e-10 * max(1, |t0|) above the root; the iteration
# actually runs to near machine precision so that genuinely tied candidates
# agree within the selection tolerance.
NEWTON_RTOL = 1e-14
NEWTON_MAX_ITER = 100
# Residual scale for declaring a returned root witnessed.
ROOT_RESIDUAL_RTOL = 1e-9
# An even-order tangency lifted off the axis by rounding still counts as a
# root when the stalled value is this small against the coefficient scale.
TANGENCY_RTOL = 1e-8


@dataclass(frozen=True)
class UnivariatePoly:
    """Real polynomial in the monomial basis, ascending degree, trimmed."""

    coeffs: np.ndarray

    @classmethod
    def from_coeffs(cls, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if not np.all(np.isfinite(c)):
            raise InputError("polynomial coefficients must be finite")
        top = float(np.max(np.abs(c)))
        if top == 0.0:
            return cls(coeffs=np.zeros(1))
        keep = np.flatnonzero(np.abs(c) > TRIM_RTOL * top)
        return cls(coeffs=c[: keep[-1] + 1].copy())

    @property
    def degree(self):
        return self.coeffs.size - 1

    @property
    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    def __call__(self, t):
        return npp.polyval(t, self.coeffs)

    def derivative(self):
        return UnivariatePoly(coeffs=npp.polyder(self.coeffs))


@dataclass(frozen=True)
class EtaResult:
    """Largest real root of a restricted polynomial.

    ``eta`` is ``-inf`` when no real root exists; ``witnessed`` records
    whether the iteration resolved a sign change or converged residual.
    """

    eta: float
    witnessed: bool


class LpmOracle:
    """Evaluator for a nonnegative combination of principal minors."""

    n: int
    degree: int

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x)

    def support(self):
        """Iterate the supports with positive coefficient, or None if the
        family is not enumerable."""
        return None

    def coefficient(self, subset):
        raise InputError("coefficients of this oracle are not enumerable")


class CharCoeffOracle(LpmOracle):
    """All k-subsets with unit coefficients: the characteristic coefficient."""

    def __init__(self, n, k):
        n, k = int(n), int(k)
        if not 1 <= k <= n:
            raise InputError(f"degree {k} outside [1, {n}]")
        self.n = n
        self.degree = k

    def evaluate(self, x):
        x = validate_symmetric(x)
        if x.shape[0] != self.n:
            raise InputError(f"expected a {self.n} x {self.n} matrix")
        return char_coeff(x, self.degree)

    def support(self):
        return itertools.combinations(range(self.n), self.degree)

    def coefficient(self, subset):
        subset = validate_support(subset, self.n)
        return 1.0 if len(subset) == self.degree else 0.0


class ExplicitLpmOracle(LpmOracle):
    """Explicit coefficient table ``{support: weight}`` with direct minor sums."""

    def __init__(self, n, k, coeffs):
        n, k = int(n), int(k)
        if not 1 <= k <= n:
            raise InputError(f"degree {k} outside [1, {n}]")
        table = {}
        for subset, weight in coeffs.items():
            key = validate_support(subset, n)
            if len(key) != k:
                raise InputError(f"support {key} does not have size {k}")
            weight = float(weight)
            if weight < 0.0:
                raise InputError(f"coefficient of {key} is negative")
            if weight > 0.0:
                table[key] = table.get(key, 0.0) + weight
        if not table:
            raise InputError("all coefficients vanish")
        self.n = n
        self.degree = k
        self.coeffs = table

    def evaluate(self, x):
        x = validate_symmetric(x)
        if x.shape[0] != self.n:
            raise InputError(f"expected a {self.n} x {self.n} matrix")
        total = 0.0
        for subset, weight in self.coeffs.items():
            idx = np.asarray(subset)
            total += weight * float(np.linalg.det(x[np.ix_(idx, idx)]))
        return total

    def support(self):
        return iter(sorted(self.coeffs))

    def coefficient(self, subset):
        return self.coeffs.get(validate_support(subset, self.n), 0.0)


class ReweightedOracle(LpmOracle):
    """p(D X D) for a diagonal reweighting D: coefficients scale by
    the squared product of the selected weights."""

    def __init__(self, base, weights):
        weights = np.asarray(weights, dtype=float).ravel()
        if weights.size != base.n or not np.all(np.isfinite(weights)):
            raise InputError("weights must be a finite vector of length n")
        self.base = base
        self.weights = weights
        self.n = base.n
        self.degree = base.degree

    def evaluate(self, x):
        x = validate_symmetric(x)
        if x.shape[0] != self.n:
            raise InputError(f"expected a {self.n} x {self.n} matrix")
        scaled = self.weights[:, None] * x * self.weights[None, :]
        return self.base.evaluate(scaled)

    def support(self):
        inner = self.base.support()
        if inner is None:
            return None
        alive = self.weights != 0.0
        return (s for s in inner if all(alive[list(s)]))

    def coefficient(self, subset):
        subset = validate_support(subset, self.n)
        factor = float(np.prod(self.weights[list(subset)] ** 2))
        return self.base.coefficient(subset) * factor


class ConstrainedCharOracle(LpmOracle):
    """Unit coefficients on the k-subsets meeting every one of the given
    disjoint index sets, evaluated by inclusion-exclusion."""

    MAX_SETS = 20

    def __init__(self, n, k, sets):
        n, k = int(n), int(k)
        if not 1 <= k <= n:
            raise InputError(f"degree {k} outside [1, {n}]")
        groups = [validate_support(s, n) for s in sets]
        if any(not g for g in groups):
            raise InputError("constraint sets must be nonempty")
        if len(groups) > self.MAX_SETS:
            raise BudgetError(
                f"{len(groups)} constraint sets exceed the limit of {self.MAX_SETS}"
            )
        seen = set()
        for g in groups:
            if seen.intersection(g):
                raise InputError("constraint sets must be disjoint")
            seen.update(g)
        if len(groups) > k:
            raise InputError("more constraint sets than the degree allows")
        self.n = n
        self.degree = k
        self.sets = groups

    def evaluate(self, x):
        x = validate_symmetric(x)
        if x.shape[0] != self.n:
            raise InputError(f"expected a {self.n} x {self.n} matrix")
        total = 0.0
        for mask in range(1 << len(self.sets)):
            dropped = set()
            for i, g in enumerate(self.sets):
                if mask >> i & 1:
                    dropped.update(g)
            kept = [j for j in range(self.n) if j not in dropped]
            if len(kept) < self.degree:
                continue
            sign = -1.0 if bin(mask).count("1") % 2 else 1.0
            idx = np.asarray(kept)
            total += sign * char_coeff(x[np.ix_(idx, idx)], self.degree)
        return total

    def _crosses(self, subset):
        s = set(subset)
        return all(s.intersection(g) for g in self.sets)

    def support(self):
        return (
            s
            for s in itertools.combinations(range(self.n), self.degree)
            if self._crosses(s)
        )

    def coefficient(self, subset):
        subset = validate_support(subset, self.n)
        if len(subset) != self.degree:
            return 0.0
        return 1.0 if self._crosses(subset) else 0.0


def reweighted_oracle(p, weights):
    """Oracle for X -> p(D X D) with D = diag(weights)."""
    return ReweightedOracle(p, weights)


def constrained_char_oracle(n, k, sets):
    """Oracle for the k-subsets intersecting every set in ``sets``."""
    return ConstrainedCharOracle(n, k, sets)


def lagrange_basis_matrix(nodes):
    """Row i holds the monomial coefficients of the i-th Lagrange basis
    polynomial for ``nodes``; interpolation is then ``values @ matrix``."""
    nodes = np.asarray(nodes, dtype=float).ravel()
    ell = nodes.size
    basis = np.empty((ell, ell))
    for i in range(ell):
        others = np.delete(nodes, i)
        denom = float(np.prod(nodes[i] - others))
        basis[i] = npp.polyfromroots(others) / denom
    return basis


def chebyshev_nodes(center, halfwidth, ell):
    """First-kind Chebyshev points mapped to [center - w, center + w]."""
    ell = int(ell)
    if ell < 1 or halfwidth <= 0.0:
        raise InputError("need at least one node and a positive halfwidth")
    angles = (2.0 * np.arange(ell) + 1.0) * (np.pi / (2.0 * ell))
    return center + halfwidth * np.cos(angles)


def conditional_eval(p, t_set, x):
    """Evaluate the conditional polynomial p|_T at X.

    Sequentially pivots out T (accumulating det(X|_T) from the pivots), then
    reads the |T|-th coefficient of s -> p(X' + s 1_T) off an interpolation
    through deg(p)+1 scaled Chebyshev nodes.
    """
    x = validate_symmetric(x)
    n = x.shape[0]
    if n != p.n:
        raise InputError(f"matrix size {n} does not match the oracle's {p.n}")
    t = validate_support(t_set, n)
    if not t:
        return float(p.evaluate(x))
    if len(t) > p.degree:
        raise InputError(f"conditioning set larger than degree {p.degree}")
    det_t = 1.0
    y = x
    for j in t:
        det_t *= y[j, j]
        y = schur_complement(y, j)
    k = p.degree
    nodes = chebyshev_nodes(0.0, 1.0 + float(np.max(np.abs(y), initial=0.0)), k + 1)
    bump = np.zeros((n, n))
    idx = np.asarray(t)
    bump[idx, idx] = 1.0
    vals = np.array([p.evaluate(y + s * bump) for s in nodes])
    coeffs = vals @ lagrange_basis_matrix(nodes)
    return det_t * float(coeffs[len(t)])


def _zero_samples(vals, scale=1.0):
    top = float(np.max(np.abs(vals), initial=0.0))
    return top <= ZERO_RTOL * max(1.0, scale)


def restrict_univariate(p, t_set, a0, a1, nodes=None):
    """Coefficients of g(t) = p|_T(A1 t - A0) by interpolation.

    Default nodes: a probe pass on a crude symmetric bracket fixes the root
    bound (Cauchy bound of the probe fit), then the final pass interpolates
    on first-kind Chebyshev points over that bracket.
    """
    a0 = validate_symmetric(a0, "a0")
    a1 = validate_symmetric(a1, "a1")
    if a0.shape != a1.shape or a0.shape[0] != p.n:
        raise InputError("matrix shapes do not match the oracle")
    t = validate_support(t_set, p.n)
    k = p.degree

    def sample(points):
        return np.array([conditional_eval(p, t, a1 * s - a0) for s in points])

    if nodes is None:
        w0 = 1.0 + float(np.max(np.abs(a0)) + np.max(np.abs(a1)))
        probe_nodes = chebyshev_nodes(0.0, w0, k + 1)
        probe = sample(probe_nodes)
        if _zero_samples(probe):
            return UnivariatePoly.from_coeffs(np.zeros(1))
        fit = UnivariatePoly.from_coeffs(probe @ lagrange_basis_matrix(probe_nodes))
        nodes = chebyshev_nodes(0.0, cauchy_bound(fit.coeffs), k + 1)
    else:
        nodes = np.asarray(nodes, dtype=float).ravel()
        if nodes.size < k + 1:
            raise InputError(f"need at least {k + 1} nodes, got {nodes.size}")
        if np.unique(nodes).size != nodes.size:
            raise InputError("interpolation nodes must be distinct")

    vals = sample(nodes)
    if _zero_samples(vals):
        return UnivariatePoly.from_coeffs(np.zeros(1))
    return UnivariatePoly.from_coeffs(vals @ lagrange_basis_matrix(nodes))


def cauchy_bound(coeffs):
    """Upper bound on root magnitudes: 1 + max |c_i / c_deg|."""
    c = np.asarray(coeffs, dtype=float)
    if c.size < 2:
        return 1.0
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))


def max_root_newton(g, t0=None):
    """Largest real root of ``g`` by Newton iteration from above.

    For a real-rooted polynomial with positive leading coefficient the
    iterates decrease monotonically onto the largest root; the step length
    bounds the gap, so the stop at ``eps / deg`` guarantees a point within
    ``eps`` above the root.  A sign change switches to bisection on the
    bracketing pair.
    """
    if not isinstance(g, UnivariatePoly):
        g = UnivariatePoly.from_coeffs(g)
    if g.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no largest root")
    root, witnessed, _ = _max_root_trace(g, t0)
    return EtaResult(eta=root, witnessed=witnessed)


def _max_root_trace(g, t0=None):
    c = g.coeffs.copy()
    if c.size == 1:
        return -math.inf, False, []
    if c[-1] < 0.0:
        c = -c
    der = npp.polyder(c)
    deg = c.size - 1
    if t0 is None:
        t0 = cauchy_bound(c)
    eps = NEWTON_RTOL * max(1.0, abs(t0))
    x = float(t0)
    trace = [x]
    prev = x
    for _ in range(NEWTON_MAX_ITER):
        gx = float(npp.polyval(x, c))
        if gx == 0.0:
            return x, True, trace
        if gx < 0.0:
            # Overshot the top root; bisect the bracketing pair.
            return _bisect_root(c, x, prev, eps), True, trace
        gpx = float(npp.polyval(x, der))
        if not np.isfinite(gpx) or gpx <= 1e-300:
            # Flat or descending slope while still positive: either an
            # even-order tangency perturbed off the axis (tiny residual;
            # accept the stall point) or a genuinely rootless polynomial.
            if gx <= TANGENCY_RTOL * _coeff_scale(c, x):
                return x, False, trace
            return -math.inf, False, trace
        nxt = x - gx / gpx
        if not np.isfinite(nxt) or nxt >= x:
            return x, _residual_ok(c, x), trace
        trace.append(nxt)
        if x - nxt <= eps / deg:
            return nxt, _residual_ok(c, nxt), trace
        prev, x = x, nxt
    return x, _residual_ok(c, x), trace


def _coeff_scale(c, x):
    """Upper bound on |g| near x: the polynomial of |coefficients| at |x|."""
    return float(npp.polyval(max(1.0, abs(x)), np.abs(c)))


def _residual_ok(c, root):
    span = np.linspace(root - 1.0, root + 1.0, 33)
    sup = float(np.max(np.abs(npp.polyval(span, c))))
    return abs(float(npp.polyval(root, c))) <= ROOT_RESIDUAL_RTOL * max(1.0, sup)


def _bisect_root(c, lo, hi, eps):
    # g(lo) < 0 <= g(hi); return a point at or just above the crossing.
    for _ in range(200):
        if hi - lo <= eps:
            break
        mid = 0.5 * (lo + hi)
        if float(npp.polyval(mid, c)) < 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def eta(p, t_set, a0, a1, nodes=None):
    """Largest real root of p|_T(A1 t - A0).

    With A1 positive definite the restriction is real-rooted and the root is
    a certified lower bound on the sparse quadratic optimum over supports in
    the family of p containing T.  Raises ``ZeroPolynomialError`` when the
    restriction vanishes identically (no support extends T).
    """
    g = restrict_univariate(p, t_set, a0, a1, nodes=nodes)
    if g.is_zero:
        raise ZeroPolynomialError(f"restriction to {tuple(t_set)} vanishes")
    return max_root_newton(g)
