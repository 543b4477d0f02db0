"""Scikit-learn style estimator front ends.

Thin wrappers around :mod:`sparseqcqp.apps` that speak the fit/predict and
fit/transform protocol, validate their inputs with the sklearn utilities,
and expose the selected support and certificate trace as fitted attributes.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .apps import omp_baseline, sparse_pca_solve, sparse_regression_solve
from .exceptions import InputError
from .linalg import validate_symmetric


def _check_k(k, n_features: int) -> int:
    k = int(k)
    if not 1 <= k <= n_features:
        raise InputError(f"k={k} must be in [1, {n_features}]")
    return k


class GreedySparseRegressor(RegressorMixin, BaseEstimator):
    """Best-subset style linear regression via greedy conditioning.

    Selects ``k`` feature columns by greedily maximizing the certified
    projection gain, then least-squares refits on the selected support.
    No intercept is fitted; center the data first if one is needed.

    Attributes after ``fit``: ``support_`` (selected column indices),
    ``coef_`` (dense, zeros off support), ``gain_`` (explained energy
    ``||y||^2 - loss_``), ``loss_`` (residual sum of squares), and
    ``report_`` (the full solve report with the per-round trace).
    """

    def __init__(self, k: int = 5, tie_tol: float = 1e-12):
        self.k = k
        self.tie_tol = tie_tol

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        k = _check_k(self.k, X.shape[1])
        report = sparse_regression_solve(X, y, k, tie_atol=self.tie_tol)
        self.n_features_in_ = X.shape[1]
        self.support_ = report.support
        self.coef_ = np.array(report.coef, dtype=float)
        self.gain_ = report.value
        self.loss_ = report.loss
        self.report_ = report
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_


class OmpRegressor(RegressorMixin, BaseEstimator):
    """Orthogonal matching pursuit with the same interface and reporting.

    Baseline for :class:`GreedySparseRegressor`: picks the column most
    correlated with the running residual, orthogonalizes, repeats.
    """

    def __init__(self, k: int = 5):
        self.k = k

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        k = _check_k(self.k, X.shape[1])
        report = omp_baseline(X, y, k)
        self.n_features_in_ = X.shape[1]
        self.support_ = report.support
        self.coef_ = np.array(report.coef, dtype=float)
        self.gain_ = report.value
        self.loss_ = report.loss
        self.report_ = report
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_


class GreedySparsePCA(TransformerMixin, BaseEstimator):
    """Single sparse principal component via greedy conditioning.

    ``gram`` controls what the solver sees: ``"correlation"`` standardizes
    columns and uses their correlation matrix, ``"covariance"`` only
    centers, and ``"precomputed"`` treats ``X`` passed to ``fit`` as an
    already-formed symmetric matrix.

    Attributes after ``fit``: ``support_``, ``component_`` (unit-norm,
    dense, zeros off support), ``value_`` (the explained eigenvalue), and
    ``report_``.  ``transform`` projects samples onto the component,
    applying the same centering/scaling as ``fit``.
    """

    def __init__(
        self,
        k: int = 5,
        gram: str = "correlation",
        ell: Optional[int] = None,
        tie_tol: float = 1e-12,
    ):
        self.k = k
        self.gram = gram
        self.ell = ell
        self.tie_tol = tie_tol

    def fit(self, X, y=None):
        if self.gram not in ("correlation", "covariance", "precomputed"):
            raise InputError(f"unknown gram mode {self.gram!r}")
        if self.gram == "precomputed":
            a = validate_symmetric(np.asarray(X, dtype=float))
            self.mean_ = np.zeros(a.shape[1])
            self.scale_ = np.ones(a.shape[1])
        else:
            X = check_array(X)
            if X.shape[0] < 2:
                raise InputError("need at least two samples")
            self.mean_ = X.mean(axis=0)
            sigma = X.std(axis=0)
            if self.gram == "correlation":
                if np.any(sigma == 0.0):
                    raise InputError("constant column; drop it or use gram='covariance'")
                self.scale_ = sigma
            else:
                self.scale_ = np.ones(X.shape[1])
            z = (X - self.mean_) / self.scale_
            a = (z.T @ z) / X.shape[0]
            a = 0.5 * (a + a.T)
        k = _check_k(self.k, a.shape[1])
        report = sparse_pca_solve(a, k, ell=self.ell, tie_atol=self.tie_tol)
        self.n_features_in_ = a.shape[1]
        self.support_ = report.support
        self.component_ = report.x
        self.value_ = report.value
        self.report_ = report
        return self

    def transform(self, X):
        check_is_fitted(self, "component_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise InputError(
                f"X has {X.shape[1]} features, component has {self.n_features_in_}"
            )
        z = (X - self.mean_) / self.scale_
        return (z @ self.component_)[:, np.newaxis]
