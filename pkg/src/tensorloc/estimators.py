"""Estimator-style wrappers so the localization tools plug into sklearn tooling.

``fit`` takes a tensor (a :class:`~tensorloc.tensor.Tensor` or a dense array
of shape ``(n,) * m``); ``predict`` takes complex points.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import certificates, oracle, raster
from .regions import Family, RegionQuery, region_contains
from .tensor import Tensor, UsageError, row_sums

__all__ = ["check_tensor", "check_points", "InclusionRegion", "EigenOracle", "NonsingularityCertifier"]


def check_tensor(A) -> Tensor:
    """Coerce ``A`` to a :class:`Tensor`, accepting dense arrays."""
    if isinstance(A, Tensor):
        return A
    arr = np.asarray(A)
    if arr.dtype == object:
        raise UsageError("tensor must be a Tensor or a numeric array")
    return Tensor.from_dense(arr)


def check_points(Z) -> np.ndarray:
    """Accept complex points as a complex array of any shape, or an ``(k, 2)`` real array.

    Returns a 1-D complex array for the real-pair form and the input shape
    otherwise.
    """
    arr = np.asarray(Z)
    if np.iscomplexobj(arr):
        if not np.all(np.isfinite(arr)):
            raise UsageError("points must be finite")
        return arr.astype(complex)
    arr = check_array(np.atleast_2d(arr), ensure_2d=True, dtype=float)
    if arr.shape[1] != 2:
        raise UsageError(f"real points must have shape (k, 2), got {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


class InclusionRegion(BaseEstimator):
    """Membership classifier for one inclusion or exclusion region.

    Parameters
    ----------
    region : str
        Family name, e.g. ``"omega"``, ``"theta"``, ``"gamma_i"``, ``"k_ij"``.
    i, j : int, optional
        1-based indices for indexed families (``j`` doubles as ``p`` for
        ``lambda_ip``).
    tol : float
        Boundary tolerance.

    Attributes
    ----------
    row_sums_ : RowSums
    query_ : RegionQuery
    """

    def __init__(self, region="omega", i=None, j=None, tol=0.0):
        self.region = region
        self.i = i
        self.j = j
        self.tol = tol

    def _query(self):
        idx = tuple(k for k in (self.i, self.j) if k is not None)
        return RegionQuery(Family.parse(self.region), idx, self.tol)

    def fit(self, A, y=None):
        A = check_tensor(A)
        self.query_ = self._query()
        self.row_sums_ = row_sums(A)
        self.n_dim_ = A.dim
        # validates indices and the n >= 2 requirement up front
        region_contains(self.row_sums_, self.query_, self.row_sums_.diag[0])
        return self

    def predict(self, Z):
        check_is_fitted(self, "row_sums_")
        return region_contains(self.row_sums_, self.query_, check_points(Z))

    def rasterize(self, width=500, height=500, window=None):
        check_is_fitted(self, "row_sums_")
        return raster.rasterize(self.row_sums_, self.query_, width, height, window)


class EigenOracle(BaseEstimator):
    """Multi-start eigenpair finder.

    Attributes
    ----------
    eigenpairs_ : list of EigenPair
    eigenvalues_ : ndarray of complex
    """

    def __init__(self, starts=None, newton_tol=1e-12, max_iter=200, dedup_tol=1e-6, seed=42, method="auto"):
        self.starts = starts
        self.newton_tol = newton_tol
        self.max_iter = max_iter
        self.dedup_tol = dedup_tol
        self.seed = seed
        self.method = method

    def fit(self, A, y=None):
        A = check_tensor(A)
        cfg = oracle.OracleConfig(self.starts, self.newton_tol, self.max_iter, self.dedup_tol, self.seed)
        self.eigenpairs_ = oracle.eigen_solve(A, cfg, method=self.method)
        self.eigenvalues_ = np.array([p.lam for p in self.eigenpairs_], dtype=complex)
        return self


class NonsingularityCertifier(BaseEstimator):
    """Apply one of the determinant certificates.

    Attributes
    ----------
    certificate_ : Certificate
    """

    def __init__(self, method="gersgorin"):
        self.method = method

    def fit(self, A, y=None):
        self.certificate_ = certificates.certify(row_sums(check_tensor(A)), self.method)
        return self

    def predict(self, tensors):
        """Boolean array, True for each tensor in ``tensors`` certified nonsingular."""
        return np.array(
            [certificates.certify(row_sums(check_tensor(A)), self.method).nonsingular for A in tensors],
            dtype=bool,
        )
