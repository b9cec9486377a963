import logging
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..exceptions import EmptySample, RankDeficient

logger = logging.getLogger('headlinesignal.estimation.ols')

#: a column whose QR pivot falls below this share of its norm is collinear
RANK_TOLERANCE = 1e-10


def ols(y: np.ndarray, X: np.ndarray,
        columns: Optional[Sequence[str]] = None,
        scale: Optional[np.ndarray] = None
        ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Least squares through a QR decomposition. Column j is rejected when
    |R_jj| <= RANK_TOLERANCE * scale_j, where `scale` defaults to the
    column norms of X; pass the norms before demeaning to catch columns
    the fixed effects absorb.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n == 0:
        raise EmptySample('no observations')
    if columns is None:
        columns = ['x{}'.format(j) for j in range(k)]
    if scale is None:
        scale = np.linalg.norm(X, axis=0)
    if n < k:
        raise RankDeficient(
            'more regressors than observations', column=columns[n])
    Q, R = scipy.linalg.qr(X, mode='economic')
    for j in range(k):
        if scale[j] == 0 or abs(R[j, j]) <= RANK_TOLERANCE * scale[j]:
            raise RankDeficient(
                'column {!r} is collinear with the fixed effects or '
                'earlier regressors'.format(columns[j]), column=columns[j])
    coefficients = scipy.linalg.solve_triangular(R, Q.T @ y)
    residuals = y - X @ coefficients
    return coefficients, residuals
