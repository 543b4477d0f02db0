"""Tests for elementary-symmetric / characteristic-coefficient kernels."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseqcqp.charpoly import (
    char_coeff,
    conditionals_vector,
    elem_sym,
    grad_char_diag,
    leave_one_out,
    leave_one_out_naive,
)
from sparseqcqp.linalg import diagonalize

from conftest import random_symmetric


def brute_elem_sym(values, k):
    out = np.zeros(k + 1)
    out[0] = 1.0
    for j in range(1, k + 1):
        out[j] = sum(np.prod(c) for c in itertools.combinations(values, j))
    return out


def brute_minor_sum(x, k):
    n = x.shape[0]
    total = 0.0
    for s in itertools.combinations(range(n), k):
        total += np.linalg.det(x[np.ix_(s, s)])
    return total


def brute_minor_sum_through(x, k, j):
    n = x.shape[0]
    total = 0.0
    for s in itertools.combinations(range(n), k):
        if j in s:
            total += np.linalg.det(x[np.ix_(s, s)])
    return total


class TestElemSym:
    def test_known_values(self):
        assert np.allclose(elem_sym(np.array([1.0, 2.0, 3.0]), 3), [1, 6, 11, 6])

    def test_k_zero(self):
        assert np.allclose(elem_sym(np.array([4.0, 5.0]), 0), [1.0])

    def test_matches_brute(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 9))
            k = int(rng.integers(0, n + 1))
            vals = rng.standard_normal(n)
            assert np.allclose(elem_sym(vals, k), brute_elem_sym(vals, k), atol=1e-10)

    @given(st.lists(st.floats(-3, 3), min_size=1, max_size=8))
    @settings(max_examples=60, deadline=None)
    def test_recurrence_property(self, values):
        # e_j over (values + [t]) = e_j + t * e_{j-1}
        vals = np.asarray(values)
        t = 0.5
        left = elem_sym(np.append(vals, t), len(vals) + 1)
        right = elem_sym(vals, len(vals))
        for j in range(1, len(vals) + 1):
            assert left[j] == pytest.approx(right[j] + t * right[j - 1], abs=1e-9)


class TestCharCoeff:
    def test_equals_minor_sum(self, rng):
        for _ in range(12):
            n = int(rng.integers(1, 8))
            k = int(rng.integers(1, n + 1))
            x = random_symmetric(rng, n)
            assert char_coeff(x, k) == pytest.approx(brute_minor_sum(x, k), abs=1e-9)

    def test_accepts_decomposition(self, rng):
        x = random_symmetric(rng, 5)
        assert char_coeff(diagonalize(x), 3) == pytest.approx(char_coeff(x, 3), abs=1e-10)


class TestLeaveOneOut:
    def test_matches_naive(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 18))
            k = int(rng.integers(0, min(n - 1, 6) + 1))
            vals = rng.standard_normal(n)
            fast = leave_one_out(vals, k)
            slow = leave_one_out_naive(vals, k)
            assert np.allclose(fast, slow, atol=1e-9 * max(1.0, np.abs(slow).max()))

    def test_matches_deletion_recompute(self, rng):
        vals = rng.standard_normal(9)
        table = leave_one_out(vals, 4)
        for i in range(9):
            deleted = np.delete(vals, i)
            assert np.allclose(table[i], elem_sym(deleted, 4), atol=1e-10)

    @given(st.lists(st.floats(-2, 2), min_size=2, max_size=12), st.integers(0, 4))
    @settings(max_examples=50, deadline=None)
    def test_property_against_deletion(self, values, k):
        vals = np.asarray(values)
        k = min(k, len(vals) - 1)
        table = leave_one_out(vals, k)
        i = len(vals) // 2
        expect = elem_sym(np.delete(vals, i), k)
        assert np.allclose(table[i], expect, atol=1e-8)


class TestConditionalsVector:
    def test_k_one_is_diagonal(self, rng):
        x = random_symmetric(rng, 6)
        v = conditionals_vector(x, diagonalize(x), 1)
        assert np.allclose(v, np.diag(x), atol=1e-12)

    def test_matches_minor_sums(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, min(n, 5) + 1))
            x = random_symmetric(rng, n)
            v = conditionals_vector(x, diagonalize(x), k)
            for j in range(n):
                expect = brute_minor_sum_through(x, k, j)
                assert v[j] == pytest.approx(expect, abs=1e-8 * max(1.0, abs(expect)))

    def test_sums_to_k_times_total(self, rng):
        # each size-k minor is counted once per member index
        x = random_symmetric(rng, 7)
        k = 3
        v = conditionals_vector(x, diagonalize(x), k)
        assert v.sum() == pytest.approx(k * brute_minor_sum(x, k), abs=1e-8)


class TestGradCharDiag:
    def test_single_entry(self):
        assert np.allclose(grad_char_diag(np.array([5.0]), 1), [1.0])

    def test_matches_deletion(self, rng):
        vals = rng.standard_normal(6)
        g = grad_char_diag(vals, 3)
        for i in range(6):
            assert g[i] == pytest.approx(elem_sym(np.delete(vals, i), 2)[2], abs=1e-10)
