"""Brute-force oracles and the desk-scale property suite.

Everything here trades time for certainty: supports are enumerated, minors
are evaluated by dense determinants, and roots are checked through the
companion matrix.  The ``run_property_suite`` entry point replays the
package's algebraic identities against these oracles on seeded random
instances; the CLI exposes it as the ``verify`` subcommand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import BudgetError, InfeasibleSupportError, InputError
from .linalg import inner_qcqp_solve, validate_symmetric
from .lpm import UnivariatePoly


@dataclass(frozen=True)
class OracleBudget:
    """Hard limits for enumeration-based oracles."""

    max_n: int = 12
    max_k: int = 5
    max_subsets: int = 10**6

    def check_subsets(self, count, what="enumeration"):
        if count > self.max_subsets:
            raise BudgetError(
                f"{what} needs {count} subsets, budget allows {self.max_subsets}"
            )


class BruteForceResult(NamedTuple):
    value: float
    support: tuple
    x: np.ndarray


def brute_force_qcqp(a0, a1, k, budget=OracleBudget()):
    """Exact sparse QCQP optimum by support enumeration.

    Ties on the optimal value keep the lexicographically smallest support.
    Supports where the constraint block is not positive definite are skipped;
    if every support is infeasible the problem has no witness.
    """
    a0 = validate_symmetric(a0, "a0")
    a1 = validate_symmetric(a1, "a1")
    n = a0.shape[0]
    k = int(k)
    if not 1 <= k <= n:
        raise InputError(f"k = {k} outside [1, {n}]")
    if n > budget.max_n or k > budget.max_k:
        raise BudgetError(
            f"instance n = {n}, k = {k} exceeds budget "
            f"(max_n = {budget.max_n}, max_k = {budget.max_k})"
        )
    budget.check_subsets(math.comb(n, k), "brute force")
    best = None
    for support in itertools.combinations(range(n), k):
        try:
            value, x = inner_qcqp_solve(a0, a1, support)
        except InfeasibleSupportError:
            continue
        if best is None or value > best.value:
            best = BruteForceResult(value, support, x)
    if best is None:
        raise InfeasibleSupportError("every size-k support is infeasible")
    return best


def lpm_direct_eval(coeffs, x, budget=OracleBudget()):
    """Reference minor-sum evaluation: sum_S a_S det(X|_S) by dense dets."""
    x = validate_symmetric(x)
    n = x.shape[0]
    if n > budget.max_n:
        raise BudgetError(f"matrix size {n} exceeds budget max_n={budget.max_n}")
    budget.check_subsets(len(coeffs), "direct minor sum")
    total = 0.0
    for subset, weight in coeffs.items():
        idx = np.asarray(sorted(int(j) for j in subset), dtype=int)
        if idx.size and (idx[0] < 0 or idx[-1] >= n):
            raise InputError(f"support {tuple(subset)} outside [0, {n})")
        if np.unique(idx).size != idx.size:
            raise InputError(f"support {tuple(subset)} has repeated indices")
        minor = float(np.linalg.det(x[np.ix_(idx, idx)])) if idx.size else 1.0
        total += float(weight) * minor
    return total


def real_rootedness_check(g, atol=1e-6):
    """Companion-matrix check that every root of ``g`` is (numerically) real."""
    if not isinstance(g, UnivariatePoly):
        g = UnivariatePoly.from_coeffs(g)
    if g.is_zero or g.degree < 1:
        raise InputError("need a nonconstant polynomial")
    roots = np.roots(g.coeffs[::-1])
    return bool(np.all(np.abs(roots.imag) <= atol * (1.0 + np.abs(roots.real))))


# ---------------------------------------------------------------------------
# Property suite


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_sym(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


def _random_pd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def _random_psd_gram(rng, m, n):
    return rng.standard_normal((m, n))


def run_property_suite(seed=0, budget=OracleBudget(), trials=12):
    """Replay the core identities on random instances; returns CheckResults."""
    from . import apps, solver
    from .charpoly import (
        char_coeff,
        conditionals_vector,
        elem_sym,
        leave_one_out,
        leave_one_out_naive,
    )
    from .linalg import diagonalize, schur_complement, update_diagonalization
    from .lpm import (
        CharCoeffOracle,
        conditional_eval,
        eta,
        restrict_univariate,
        reweighted_oracle,
    )

    rng = np.random.default_rng(seed)
    n_cap = min(budget.max_n, 9)
    k_cap = min(budget.max_k, 4)
    results = []

    def record(name, fn):
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure with the message
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail))

    def reconstruction():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, n_cap + 1))
            a = _random_sym(rng, n)
            d = diagonalize(a)
            worst = max(worst, float(np.linalg.norm(d.reconstruct() - a)))
        return worst <= 1e-9, f"max reconstruction error {worst:.2e}"

    def rank_one_chain():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, n_cap + 1))
            a = _random_sym(rng, n)
            d = diagonalize(a)
            m = a.copy()
            for _ in range(20):
                v = rng.standard_normal(n)
                rho = float(rng.standard_normal())
                d = update_diagonalization(d, rho, v)
                m += rho * np.outer(v, v)
            worst = max(worst, float(np.max(np.abs(d.values - np.linalg.eigvalsh(m)))))
        return worst <= 1e-7, f"max eigenvalue drift over 20 updates {worst:.2e}"

    def schur_identities():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(3, n_cap + 1))
            x = _random_pd(rng, n)
            i, j = rng.choice(n, size=2, replace=False)
            seq = schur_complement(schur_complement(x, int(i)), int(j))
            swapped = schur_complement(schur_complement(x, int(j)), int(i))
            worst = max(worst, float(np.max(np.abs(seq - swapped))))
            rest = [t for t in range(n) if t not in (i, j)]
            block = seq[np.ix_(rest, rest)]
            det_identity = abs(
                np.linalg.det(x[np.ix_([i, j], [i, j])]) * np.linalg.det(block)
                - np.linalg.det(x)
            )
            worst = max(worst, det_identity / max(1.0, abs(np.linalg.det(x))))
        return worst <= 1e-8, f"max Schur identity error {worst:.2e}"

    def esym_brute():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(0, n + 1))
            lam = rng.standard_normal(n)
            direct = sum(
                np.prod(lam[list(s)]) for s in itertools.combinations(range(n), k)
            )
            worst = max(worst, abs(elem_sym(lam, k)[k] - direct))
        return worst <= 1e-9, f"max elementary symmetric error {worst:.2e}"

    def leave_one_out_check():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 18))
            k = int(rng.integers(0, min(n - 1, 5) + 1))
            lam = rng.standard_normal(n)
            worst = max(
                worst,
                float(np.max(np.abs(leave_one_out(lam, k) - leave_one_out_naive(lam, k)))),
            )
        return worst <= 1e-9, f"max leave-one-out deviation {worst:.2e}"

    def conditionals_check():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            x = _random_sym(rng, n)
            v = conditionals_vector(x, diagonalize(x), k)
            direct = np.zeros(n)
            for s in itertools.combinations(range(n), k):
                minor = np.linalg.det(x[np.ix_(s, s)])
                for i in s:
                    direct[i] += minor
            worst = max(worst, float(np.max(np.abs(v - direct))) / max(1.0, float(np.max(np.abs(direct)))))
        return worst <= 1e-8, f"max conditionals deviation {worst:.2e}"

    def conditional_sum():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            x = _random_sym(rng, n)
            p = CharCoeffOracle(n, k)
            t_len = int(rng.integers(0, k))
            t = tuple(sorted(rng.choice(n, size=t_len, replace=False).tolist()))
            lhs = (k - len(t)) * conditional_eval(p, t, x)
            rhs = sum(
                conditional_eval(p, t + (j,), x) for j in range(n) if j not in t
            )
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        return worst <= 1e-8, f"max conditional-sum residual {worst:.2e}"

    def real_rooted():
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            g = restrict_univariate(CharCoeffOracle(n, k), (), a0, a1)
            if not real_rootedness_check(g):
                return False, f"non-real root for n={n}, k={k}"
        return True, "all restrictions real-rooted"

    def greedy_sandwich():
        for _ in range(trials):
            n = int(rng.integers(2, n_cap + 1))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            trace = solver.greedy_conditioning(CharCoeffOracle(n, k), a0, a1, k)
            best = brute_force_qcqp(a0, a1, k, budget).value
            if trace.eta_p is not None and trace.value < trace.eta_p - 1e-8:
                return False, f"value {trace.value} below eta_p {trace.eta_p}"
            if trace.value > best + 1e-8:
                return False, f"value {trace.value} above optimum {best}"
            etas = trace.eta_trace
            if any(b < a - 1e-9 for a, b in zip(etas, etas[1:])):
                return False, f"eta trace not monotone: {etas}"
        return True, "eta_p <= greedy value <= optimum, monotone rounds"

    def path_equivalence():
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            fast = solver.characteristic_method(a0, a1, k)
            slow = solver.greedy_conditioning(CharCoeffOracle(n, k), a0, a1, k)
            if fast.support != slow.support:
                return False, f"supports differ: {fast.support} vs {slow.support}"
            drift = max(
                abs(a - b) for a, b in zip(fast.eta_trace, slow.eta_trace)
            )
            if drift > 1e-6:
                return False, f"eta traces differ by {drift:.2e}"
        return True, "fast and generic paths agree on supports and roots"

    def regression_closed_form():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a = _random_psd_gram(rng, n + 5, n)
            b = rng.standard_normal(n + 5)
            p = CharCoeffOracle(n, k)
            closed = apps.sparse_regression_eta(p, a, b, ())
            g = a.T @ b
            generic = eta(p, (), np.outer(g, g), a.T @ a).eta
            worst = max(worst, abs(closed - generic) / max(1.0, abs(closed)))
        return worst <= 1e-7, f"max closed-form deviation {worst:.2e}"

    def volume_sampling():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, min(n, 3) + 1))
            a = _random_psd_gram(rng, n + 4, n)
            b = rng.standard_normal(n + 4)
            t_len = int(rng.integers(0, min(2, k) + 1))
            t = tuple(sorted(rng.choice(n, size=t_len, replace=False).tolist()))
            p = CharCoeffOracle(n, k)
            closed = apps.sparse_regression_eta(p, a, b, t)
            sampled = apps.volume_sampling_expectation(a, b, t, k)
            worst = max(worst, abs(closed - sampled) / max(1.0, abs(closed)))
        return worst <= 1e-8, f"max expectation deviation {worst:.2e}"

    def pca_interlacing():
        for _ in range(trials):
            n = int(rng.integers(2, n_cap + 1))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a = _random_sym(rng, n)
            lam = np.linalg.eigvalsh(a)
            report = apps.sparse_pca_solve(a, k)
            best = brute_force_qcqp(a, np.eye(n), k, budget).value
            # Rolle interlacing of the (n-k)-th charpoly derivative bounds
            # the largest root from below by the k-th SMALLEST eigenvalue
            # (k=1 pins it: the root is the eigenvalue mean).
            lo = lam[k - 1]
            if report.eta_p is not None and report.eta_p < lo - 1e-7:
                return False, f"eta_p {report.eta_p} below lambda_(k) {lo}"
            if not (lo - 1e-7 <= report.value <= best + 1e-7):
                return False, f"value {report.value} outside [{lo}, {best}]"
        return True, "lambda_(k) <= eta_p, value <= enumerated optimum"

    def approx_bound():
        for _ in range(trials):
            n = int(rng.integers(3, 8))
            k = int(rng.integers(2, min(n, 3) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            p = CharCoeffOracle(n, k)
            eta_p = eta(p, (), a0, a1).eta
            _, _, upper = solver.approx_bound_certificate(a0, a1, k, eta_p)
            best = brute_force_qcqp(a0, a1, k, budget).value
            if best > upper + 1e-7 * (1.0 + abs(upper)):
                return False, f"optimum {best} above certificate {upper}"
        return True, "enumerated optimum below the certificate"

    def continuous_formulation():
        worst = 0.0
        for _ in range(trials):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, min(n, 3) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            base = CharCoeffOracle(n, k)
            best_eta = -np.inf
            for s in itertools.combinations(range(n), k):
                d = np.zeros(n)
                d[list(s)] = 1.0
                best_eta = max(best_eta, eta(reweighted_oracle(base, d), (), a0, a1).eta)
            best = brute_force_qcqp(a0, a1, k, budget).value
            worst = max(worst, abs(best_eta - best) / max(1.0, abs(best)))
        return worst <= 1e-7, f"max reweighting gap {worst:.2e}"

    def barrier():
        for _ in range(trials):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, k_cap) + 1))
            a0 = _random_sym(rng, n)
            a1 = _random_pd(rng, n)
            p = CharCoeffOracle(n, k)
            root = eta(p, (), a0, a1).eta
            for y in np.linspace(root + 1e-6, root + 3.0, 23):
                if p.evaluate(a1 * y - a0) <= 0.0:
                    return False, f"restriction not positive at {y} (root {root})"
        return True, "restriction positive above the largest root"

    record("eigendecomposition-reconstruction", reconstruction)
    record("rank-one-update-chain", rank_one_chain)
    record("schur-complement-identities", schur_identities)
    record("elementary-symmetric-brute-force", esym_brute)
    record("leave-one-out-table", leave_one_out_check)
    record("conditionals-vector-minor-sums", conditionals_check)
    record("conditional-sum-identity", conditional_sum)
    record("restriction-real-rootedness", real_rooted)
    record("greedy-sandwich-and-monotonicity", greedy_sandwich)
    record("fast-path-equivalence", path_equivalence)
    record("regression-closed-form", regression_closed_form)
    record("volume-sampling-expectation", volume_sampling)
    record("pca-interlacing", pca_interlacing)
    record("approximation-bound", approx_bound)
    record("continuous-formulation", continuous_formulation)
    record("positivity-barrier", barrier)
    return results
