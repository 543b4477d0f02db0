"""Tests for the brute-force oracles and the property harness."""

import numpy as np
import pytest

from sparseqcqp.exceptions import BudgetError, InfeasibleSupportError
from sparseqcqp.lpm import UnivariatePoly
from sparseqcqp.verify import (
    OracleBudget,
    brute_force_qcqp,
    lpm_direct_eval,
    real_rootedness_check,
    run_property_suite,
)

from conftest import random_pd, random_symmetric


class TestBruteForce:
    def test_diagonal_instances(self):
        budget = OracleBudget()
        res = brute_force_qcqp(np.diag([5.0, 3.0, 1.0]), np.eye(3), 2, budget)
        assert res.value == pytest.approx(5.0) and res.support == (0, 1)
        res = brute_force_qcqp(np.eye(4), np.eye(4), 3, budget)
        assert res.value == pytest.approx(1.0) and res.support == (0, 1, 2)

    def test_witness_attains_value(self, rng):
        a0 = random_symmetric(rng, 5)
        a1 = random_pd(rng, 5)
        res = brute_force_qcqp(a0, a1, 2, OracleBudget())
        assert res.x @ a0 @ res.x == pytest.approx(res.value, abs=1e-9)
        assert res.x @ a1 @ res.x == pytest.approx(1.0, abs=1e-9)

    def test_budget_enforced(self):
        budget = OracleBudget(max_n=4, max_k=2, max_subsets=3)
        with pytest.raises(BudgetError):
            brute_force_qcqp(np.eye(5), np.eye(5), 2, budget)
        with pytest.raises(BudgetError):
            brute_force_qcqp(np.eye(4), np.eye(4), 3, budget)
        with pytest.raises(BudgetError):
            brute_force_qcqp(np.eye(4), np.eye(4), 2, budget)  # 6 subsets > 3

    def test_all_infeasible(self):
        with pytest.raises(InfeasibleSupportError):
            brute_force_qcqp(np.eye(3), np.zeros((3, 3)), 2, OracleBudget())


class TestLpmDirectEval:
    def test_identity_count(self):
        import itertools

        coeffs = {s: 1.0 for s in itertools.combinations(range(5), 2)}
        assert lpm_direct_eval(coeffs, np.eye(5), OracleBudget()) == pytest.approx(10.0)

    def test_single_support_is_minor(self, rng):
        x = random_symmetric(rng, 5)
        got = lpm_direct_eval({(1, 3): 1.0}, x, OracleBudget())
        expect = np.linalg.det(x[np.ix_((1, 3), (1, 3))])
        assert got == pytest.approx(expect, abs=1e-10)

    def test_budget_enforced(self, rng):
        budget = OracleBudget(max_n=4, max_k=5, max_subsets=10)
        with pytest.raises(BudgetError):
            lpm_direct_eval({(0, 4): 1.0}, random_symmetric(rng, 6), budget)


class TestRealRootedness:
    def test_real_rooted_passes(self):
        assert real_rootedness_check(UnivariatePoly.from_coeffs([-1.0, 0.0, 1.0]))

    def test_complex_roots_fail(self):
        assert not real_rootedness_check(UnivariatePoly.from_coeffs([1.0, 0.0, 1.0]))


class TestPropertySuite:
    def test_all_checks_pass(self):
        results = run_property_suite(seed=3, trials=4)
        assert len(results) == 16
        failed = [r.name for r in results if not r.passed]
        assert failed == []

    def test_detail_strings_present(self):
        results = run_property_suite(seed=5, trials=2)
        assert all(isinstance(r.detail, str) and r.detail for r in results)
