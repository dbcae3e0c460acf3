"""Estimator wrappers: fit a point ensemble, transform by evaluating the basis.

``fit(None)`` runs the multi-start optimizer for the ensemble; ``fit(X)``
uses the rows of X as the ensemble directly.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .harmonics import is_diagonally_dominant, zonal_harmonic_basis
from .near_zonal import build
from .sphere_opt import OptimizerConfig, ensemble_size, objective, optimize
from .validation import check_degree, check_points, seed_from


class _KernelBasisEstimator(TransformerMixin, BaseEstimator):
    kind = ""

    def __init__(self, k=2, n_starts=50, max_iter=2000, tol=1e-10, random_state=0):
        self.k = k
        self.n_starts = n_starts
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _ensemble(self, X):
        k = check_degree(self.k)
        n = ensemble_size(self.kind, k)
        if X is not None:
            self.optimization_ = None
            return check_points(X, n_points=n)
        cfg = OptimizerConfig(
            kind=self.kind,
            k=k,
            max_iters=self.max_iter,
            grad_tol=self.tol,
            starts=self.n_starts,
            seed=seed_from(self.random_state),
        )
        self.optimization_ = optimize(cfg)
        return np.array(self.optimization_.best.ensemble.points)

    def fit(self, X=None, y=None):
        pts = self._ensemble(X)
        self.points_ = pts
        self.objective_ = objective(self.kind, self.k, pts)
        self._build(pts)
        self.n_features_out_ = self._width()
        return self

    def transform(self, X):
        """Basis values at the rows of X as a 2-D array."""
        vals = self.evaluate(X)
        return vals.reshape(len(vals), -1)

    def evaluate(self, X):
        check_is_fitted(self, "basis_")
        return self.basis_(check_points(X))

    def _build(self, pts):
        raise NotImplementedError

    def _width(self) -> int:
        raise NotImplementedError


class ZonalHarmonicEstimator(_KernelBasisEstimator):
    """Orthonormal degree-k harmonics ``Z_t = sum_j R_k(., eta_j) a_jt`` from 2k+1 points.

    ``transform`` returns ``(N, 2k+1)`` real values.
    """

    kind = "harmonic"

    def _build(self, pts):
        self.basis_ = zonal_harmonic_basis(self.k, pts)
        self.gram_ = self.basis_.G
        self.coef_ = self.basis_.A
        self.diagonally_dominant_ = is_diagonally_dominant(self.coef_)

    def _width(self) -> int:
        return 2 * self.k + 1


class NearZonalMonogenicEstimator(_KernelBasisEstimator):
    """Orthonormal degree-k monogenics ``Z_t = sum_j K_k(., eta_j) a_jt`` from k+1 points.

    ``evaluate`` returns multivector values ``(N, k+1, 8)``; ``transform``
    flattens the last two axes.
    """

    kind = "monogenic"

    def _build(self, pts):
        self.basis_ = build(self.k, pts)
        self.gram_ = self.basis_.G
        self.coef_ = self.basis_.A
        self.deviations_ = np.array(self.basis_.deviations())

    def _width(self) -> int:
        return 8 * (self.k + 1)
