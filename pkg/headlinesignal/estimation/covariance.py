"""
Cluster-robust sandwich covariance.

One-way:  V = c * B M B with B = (X'X)^-1, M = sum_g (X_g'u_g)(X_g'u_g)'
and c = G/(G-1) * (N-1)/(N-K).
Two-way:  V = V_firm + V_date - V_firm&date, each term with its own c.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..exceptions import EstimationException, InsufficientClusters

logger = logging.getLogger('headlinesignal.estimation.covariance')

#: eigenvalues below -PSD_TOLERANCE * max|eigenvalue| trigger the repair
PSD_TOLERANCE = 1e-12


@dataclass
class ClusteredCovariance:
    cov: np.ndarray
    n_clusters: Tuple[int, ...]
    psd_repaired: bool = False


def intersect(*codes: np.ndarray) -> np.ndarray:
    """Cluster labels of the intersection of several clusterings."""
    stacked = np.column_stack([np.asarray(c) for c in codes])
    _, joint = np.unique(stacked, axis=0, return_inverse=True)
    return joint.reshape(-1)


def cluster_scores(X: np.ndarray, residuals: np.ndarray, labels
                   ) -> np.ndarray:
    """Per-cluster score sums X_g'u_g, one row per cluster."""
    _, codes = np.unique(np.asarray(labels), return_inverse=True)
    codes = codes.reshape(-1)
    scores = X * residuals[:, None]
    n_groups = codes.max() + 1 if len(codes) else 0
    return np.column_stack([
        np.bincount(codes, weights=scores[:, j], minlength=n_groups)
        for j in range(X.shape[1])])


def one_way_cov(X: np.ndarray, residuals: np.ndarray, labels,
                bread: np.ndarray, n_params: int) -> Tuple[np.ndarray, int]:
    n = X.shape[0]
    sums = cluster_scores(X, residuals, labels)
    n_groups = sums.shape[0]
    if n_groups < 2:
        raise InsufficientClusters(
            'a clustering dimension has {} cluster; at least 2 are needed'
            .format(n_groups))
    meat = sums.T @ sums
    factor = n_groups / (n_groups - 1) * (n - 1) / (n - n_params)
    return factor * bread @ meat @ bread, n_groups


def repair_psd(cov: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Floor negative eigenvalues at zero if any is materially negative."""
    eigenvalues, vectors = scipy.linalg.eigh(cov)
    bound = PSD_TOLERANCE * np.abs(eigenvalues).max(initial=0.0)
    if eigenvalues.min(initial=0.0) >= -bound:
        return cov, False
    logger.warning('two-way covariance not positive semidefinite '
                   '(min eigenvalue %.3g); clipped', eigenvalues.min())
    clipped = vectors @ np.diag(np.clip(eigenvalues, 0.0, None)) @ vectors.T
    return (clipped + clipped.T) / 2, True


def clustered_cov(X: np.ndarray, residuals: np.ndarray,
                  clusters: Sequence, n_params: Optional[int] = None
                  ) -> ClusteredCovariance:
    """
    `clusters` holds one or two label vectors covering every row.
    `n_params` is the K of the finite-sample factor, by default the number
    of columns of X.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    residuals = np.asarray(residuals, dtype=float)
    n, k = X.shape
    n_params = k if n_params is None else n_params
    if not 1 <= len(clusters) <= 2:
        raise ValueError('one or two clustering dimensions are supported')
    for labels in clusters:
        if len(labels) != n:
            raise ValueError('cluster labels must cover every row')
    if n <= n_params:
        raise EstimationException(
            'need more observations than parameters for the covariance')
    bread = scipy.linalg.inv(X.T @ X)
    bread = (bread + bread.T) / 2
    if len(clusters) == 1:
        cov, g = one_way_cov(X, residuals, clusters[0], bread, n_params)
        return ClusteredCovariance((cov + cov.T) / 2, (g,))
    first, second = clusters
    cov_1, g_1 = one_way_cov(X, residuals, first, bread, n_params)
    cov_2, g_2 = one_way_cov(X, residuals, second, bread, n_params)
    both = intersect(
        np.unique(np.asarray(first), return_inverse=True)[1].reshape(-1),
        np.unique(np.asarray(second), return_inverse=True)[1].reshape(-1))
    if both.max() + 1 < 2:
        raise InsufficientClusters('intersection clustering has 1 cluster')
    cov_12, _ = one_way_cov(X, residuals, both, bread, n_params)
    cov = cov_1 + cov_2 - cov_12
    cov, repaired = repair_psd((cov + cov.T) / 2)
    return ClusteredCovariance(cov, (g_1, g_2), repaired)


def classical_cov(X: np.ndarray, residuals: np.ndarray, n_params: int
                  ) -> np.ndarray:
    """Homoskedastic s^2 (X'X)^-1 with s^2 = SSR / (N - n_params)."""
    n = X.shape[0]
    if n <= n_params:
        raise EstimationException(
            'need more observations than parameters for the covariance')
    s2 = float(residuals @ residuals) / (n - n_params)
    bread = scipy.linalg.inv(X.T @ X)
    return s2 * (bread + bread.T) / 2
