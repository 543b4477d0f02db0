"""Tests for the greedy conditioning loop and the characteristic fast path."""

import numpy as np
import pytest

from sparseqcqp.exceptions import InputError
from sparseqcqp.lpm import CharCoeffOracle, ExplicitLpmOracle, eta
from sparseqcqp.solver import (
    approx_bound_certificate,
    characteristic_method,
    exactness_check,
    greedy_conditioning,
    pencil_nodes,
)
from sparseqcqp.verify import OracleBudget, brute_force_qcqp

from conftest import random_pd, random_symmetric


class TestGreedyConditioning:
    def test_diagonal_example(self):
        p = CharCoeffOracle(3, 2)
        a0 = np.diag([5.0, 3.0, 1.0])
        trace = greedy_conditioning(p, a0, np.eye(3), 2)
        assert trace.support == (0, 1)
        assert trace.value == pytest.approx(5.0, abs=1e-9)

    def test_eta_trace_monotone(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 8))
            k = int(rng.integers(2, min(n, 4) + 1))
            trace = greedy_conditioning(
                CharCoeffOracle(n, k), random_symmetric(rng, n), random_pd(rng, n), k
            )
            etas = trace.eta_trace
            assert len(etas) == k
            assert all(b >= a - 1e-7 for a, b in zip(etas, etas[1:]))
            assert trace.value >= etas[-1] - 1e-7

    def test_final_value_is_support_optimum(self, rng):
        from scipy.linalg import eigh

        a0 = random_symmetric(rng, 6)
        a1 = random_pd(rng, 6)
        trace = greedy_conditioning(CharCoeffOracle(6, 3), a0, a1, 3)
        lam = eigh(
            a0[np.ix_(trace.support, trace.support)],
            a1[np.ix_(trace.support, trace.support)],
            eigvals_only=True,
        )
        assert trace.value == pytest.approx(lam.max(), abs=1e-8)

    def test_degree_mismatch_rejected(self, rng):
        with pytest.raises(InputError):
            greedy_conditioning(CharCoeffOracle(4, 2), random_symmetric(rng, 4), np.eye(4), 3)

    def test_indefinite_constraint_rejected(self, rng):
        a1 = np.diag([1.0, -1.0, 1.0])
        with pytest.raises(InputError):
            greedy_conditioning(CharCoeffOracle(3, 2), random_symmetric(rng, 3), a1, 2)

    def test_tie_breaks_to_smallest_index(self):
        p = CharCoeffOracle(4, 2)
        a0 = np.diag([2.0, 2.0, 2.0, 2.0])
        trace = greedy_conditioning(p, a0, np.eye(4), 2)
        assert trace.support == (0, 1)

    def test_respects_explicit_support(self, rng):
        # only {1, 3} carries weight, so greedy must land there
        p = ExplicitLpmOracle(5, 2, {(1, 3): 1.0})
        a0 = random_symmetric(rng, 5)
        trace = greedy_conditioning(p, a0, np.eye(5), 2)
        assert trace.support == (1, 3)


class TestPencilNodes:
    def test_count_and_bracket(self):
        nodes = pencil_nodes(1.0, 5.0, 7)
        assert nodes.shape == (7,)
        assert len(np.unique(nodes)) == 7
        assert nodes.min() >= 1.0 - 0.61 * 4.0 and nodes.max() <= 5.0 + 0.61 * 4.0

    def test_degenerate_bracket_gets_floor(self):
        nodes = pencil_nodes(2.0, 2.0, 3)
        assert len(np.unique(nodes)) == 3

    def test_rejects_bad_count(self):
        with pytest.raises(InputError):
            pencil_nodes(0.0, 1.0, 0)


class TestCharacteristicMethod:
    def test_diagonal_tie_example(self):
        a0 = np.diag([5.0, 3.0, 1.0])
        trace = characteristic_method(a0, np.eye(3), 2)
        assert trace.support == (0, 1)
        assert trace.value == pytest.approx(5.0, abs=1e-9)

    def test_identity_instances(self):
        for n, k in ((4, 2), (4, 4), (5, 3)):
            trace = characteristic_method(np.eye(n), np.eye(n), k)
            assert trace.support == tuple(range(k))
            assert trace.value == pytest.approx(1.0, abs=1e-9)

    def test_matches_generic_greedy(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 8))
            k = int(rng.integers(1, min(n, 4) + 1))
            a0 = random_symmetric(rng, n)
            a1 = random_pd(rng, n)
            fast = characteristic_method(a0, a1, k)
            slow = greedy_conditioning(CharCoeffOracle(n, k), a0, a1, k)
            assert fast.support == slow.support
            assert fast.value == pytest.approx(slow.value, abs=1e-8)

    def test_eta_p_matches_generic(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, min(n, 4) + 1))
            a0 = random_symmetric(rng, n)
            a1 = random_pd(rng, n)
            fast = characteristic_method(a0, a1, k)
            ref = eta(CharCoeffOracle(n, k), (), a0, a1).eta
            assert fast.eta_p == pytest.approx(ref, abs=1e-7 * (1 + abs(ref)))

    def test_extra_nodes_allowed(self, rng):
        a0 = random_symmetric(rng, 5)
        a1 = random_pd(rng, 5)
        base = characteristic_method(a0, a1, 2)
        extra = characteristic_method(a0, a1, 2, ell=6)
        assert base.support == extra.support

    def test_too_few_nodes_rejected(self, rng):
        with pytest.raises(InputError):
            characteristic_method(random_symmetric(rng, 4), np.eye(4), 2, ell=2)

    def test_node_state_kept_on_request(self, rng):
        a0 = random_symmetric(rng, 4)
        trace = characteristic_method(a0, np.eye(4), 2, keep_node_state=True)
        assert trace.node_state is not None
        assert len(trace.node_state) == 2


class TestApproxBound:
    def test_counterexample_instance(self):
        # A0 with negative trace: the certificate's constant term must flip
        # sign relative to a positive-trace instance of the same size.
        a0 = np.diag([1.0, -10.0, -10.0])
        c1, c2, upper = approx_bound_certificate(a0, np.eye(3), 2, -8.0 / 3.0)
        assert c1 == pytest.approx(2.0)
        assert c2 == pytest.approx(19.0 / 3.0)
        assert upper == pytest.approx(1.0)
        best = brute_force_qcqp(a0, np.eye(3), 2, OracleBudget()).value
        assert best <= upper + 1e-9

    def test_dominates_optimum(self, rng):
        for _ in range(25):
            n = int(rng.integers(3, 8))
            k = int(rng.integers(2, 4))
            if k >= n:
                k = n - 1
            a0 = random_symmetric(rng, n)
            a1 = random_pd(rng, n)
            eta_p = eta(CharCoeffOracle(n, k), (), a0, a1).eta
            _, _, upper = approx_bound_certificate(a0, a1, k, eta_p)
            best = brute_force_qcqp(a0, a1, k, OracleBudget()).value
            assert best <= upper + 1e-7 * (1.0 + abs(upper))

    def test_needs_k_at_least_two(self):
        with pytest.raises(InputError):
            approx_bound_certificate(np.eye(3), np.eye(3), 1, 1.0)


class TestExactness:
    def test_identity_is_exact(self):
        assert exactness_check(CharCoeffOracle(4, 2), np.eye(4), np.eye(4))

    def test_spread_diagonal_is_not(self):
        assert not exactness_check(CharCoeffOracle(3, 2), np.diag([5.0, 3.0, 1.0]), np.eye(3))
