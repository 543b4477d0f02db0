"""Unit tests for the dense linear-algebra kernels."""

import numpy as np
import pytest

from sparseqcqp.exceptions import InfeasibleSupportError, InputError, SingularPivotError
from sparseqcqp.linalg import (
    EigenDecomposition,
    diagonalize,
    inner_qcqp_solve,
    schur_complement,
    update_diagonalization,
    validate_support,
    validate_symmetric,
)

from conftest import random_pd, random_symmetric


class TestValidation:
    def test_symmetrizes_small_skew(self):
        x = np.array([[1.0, 2.0 + 1e-12], [2.0, 3.0]])
        out = validate_symmetric(x)
        assert np.array_equal(out, out.T)

    def test_rejects_nonsquare(self):
        with pytest.raises(InputError):
            validate_symmetric(np.ones((2, 3)))

    def test_rejects_nonfinite(self):
        x = np.eye(2)
        x[0, 1] = np.nan
        with pytest.raises(InputError):
            validate_symmetric(x)

    def test_rejects_large_skew(self):
        x = np.array([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(InputError):
            validate_symmetric(x)

    def test_support_sorted_and_checked(self):
        assert validate_support([2, 0, 1], 4) == (0, 1, 2)
        with pytest.raises(InputError):
            validate_support([0, 0], 4)
        with pytest.raises(InputError):
            validate_support([4], 4)
        with pytest.raises(InputError):
            validate_support([-1], 4)


class TestDiagonalize:
    def test_reconstructs(self, rng):
        for n in (1, 2, 5, 9):
            a = random_symmetric(rng, n)
            d = diagonalize(a)
            assert np.allclose(d.reconstruct(), a, atol=1e-12 * max(1, n))

    def test_values_ascending(self, rng):
        d = diagonalize(random_symmetric(rng, 7))
        assert np.all(np.diff(d.values) >= 0)


class TestSchurComplement:
    def test_known_two_by_two(self):
        x = np.array([[2.0, 1.0], [1.0, 2.0]])
        out = schur_complement(x, 0)
        assert np.allclose(out, np.array([[0.0, 0.0], [0.0, 1.5]]))

    def test_matches_inverse_formula(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 8))
            x = random_symmetric(rng, n) + 2.0 * np.eye(n)
            j = int(rng.integers(n))
            out = schur_complement(x, j)
            rest = [i for i in range(n) if i != j]
            expect = x[np.ix_(rest, rest)] - np.outer(x[rest, j], x[j, rest]) / x[j, j]
            assert np.allclose(out[np.ix_(rest, rest)], expect, atol=1e-10)
            assert np.all(out[j, :] == 0) and np.all(out[:, j] == 0)

    def test_determinant_factorization(self, rng):
        # det(X) = X_jj * det(complement minor)
        for _ in range(10):
            x = random_symmetric(rng, 5) + 3.0 * np.eye(5)
            out = schur_complement(x, 2)
            rest = [i for i in range(5) if i != 2]
            lhs = np.linalg.det(x)
            rhs = x[2, 2] * np.linalg.det(out[np.ix_(rest, rest)])
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))

    def test_singular_pivot_raises(self):
        x = np.array([[0.0, 1.0], [1.0, 2.0]])
        with pytest.raises(SingularPivotError):
            schur_complement(x, 0)


class TestInnerQcqp:
    def test_diagonal_instance(self):
        a0 = np.diag([1.0, 3.0, 2.0])
        value, x = inner_qcqp_solve(a0, np.eye(3), (0, 1))
        assert abs(value - 3.0) < 1e-12
        assert abs(x @ x - 1.0) < 1e-12
        assert abs(x @ a0 @ x - value) < 1e-12
        assert x[2] == 0.0

    def test_witness_feasible_random(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, n + 1))
            a0 = random_symmetric(rng, n)
            a1 = random_pd(rng, n)
            support = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
            value, x = inner_qcqp_solve(a0, a1, support)
            assert abs(x @ a1 @ x - 1.0) < 1e-9
            assert abs(x @ a0 @ x - value) < 1e-8 * max(1.0, abs(value))
            off = [i for i in range(n) if i not in support]
            assert np.all(x[off] == 0.0)

    def test_infeasible_support(self):
        a1 = np.zeros((3, 3))
        with pytest.raises(InfeasibleSupportError):
            inner_qcqp_solve(np.eye(3), a1, (0, 1))


class TestRankOneUpdate:
    def test_matches_dense_eigh(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 12))
            a = random_symmetric(rng, n)
            d = diagonalize(a)
            v = rng.standard_normal(n)
            rho = float(rng.standard_normal())
            out = update_diagonalization(d, rho, v)
            expect = np.linalg.eigvalsh(a + rho * np.outer(v, v))
            assert np.allclose(out.values, expect, atol=1e-9 * max(1.0, np.abs(expect).max()))
            assert np.allclose(out.reconstruct(), a + rho * np.outer(v, v), atol=1e-8)

    def test_repeated_eigenvalues(self, rng):
        a = np.diag([2.0, 2.0, 2.0, 5.0])
        v = rng.standard_normal(4)
        out = update_diagonalization(diagonalize(a), 1.0, v)
        expect = np.linalg.eigvalsh(a + np.outer(v, v))
        assert np.allclose(out.values, expect, atol=1e-10)

    def test_deflation_zero_component(self):
        a = np.diag([1.0, 2.0, 3.0])
        v = np.array([1.0, 0.0, 0.0])
        out = update_diagonalization(diagonalize(a), 2.0, v)
        assert np.allclose(np.sort(out.values), [2.0, 3.0, 3.0], atol=1e-12)

    def test_rho_zero_passthrough(self, rng):
        d = diagonalize(random_symmetric(rng, 4))
        out = update_diagonalization(d, 0.0, np.ones(4))
        assert np.array_equal(out.values, d.values)

    def test_orthonormal_vectors(self, rng):
        a = random_symmetric(rng, 8)
        out = update_diagonalization(diagonalize(a), -1.7, rng.standard_normal(8))
        gram = out.vectors.T @ out.vectors
        assert np.allclose(gram, np.eye(8), atol=1e-12)

    def test_update_chain_stays_accurate(self, rng):
        n = 6
        a = random_symmetric(rng, n)
        d = diagonalize(a)
        m = a.copy()
        for _ in range(25):
            v = rng.standard_normal(n)
            rho = float(rng.standard_normal())
            d = update_diagonalization(d, rho, v)
            m += rho * np.outer(v, v)
        assert np.allclose(d.values, np.linalg.eigvalsh(m), atol=1e-9)

    def test_validates_shapes(self, rng):
        d = diagonalize(random_symmetric(rng, 3))
        with pytest.raises(InputError):
            update_diagonalization(d, 1.0, np.ones(4))


class TestEigenDecomposition:
    def test_frozen_and_sized(self):
        d = EigenDecomposition(values=np.zeros(2), vectors=np.eye(2))
        assert d.n == 2
        with pytest.raises(AttributeError):
            d.n = 3
