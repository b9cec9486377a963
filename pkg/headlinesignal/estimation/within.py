"""
Fixed-effect absorption by alternating projections.

Each sweep subtracts firm means, then date means, from every column.
Iteration stops once every group mean of every column is below the
tolerance, measured against the column's original scale.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np

from ..exceptions import ConvergenceError, EmptySample
from ..records.base_records import PanelObservation
from ..records.types import FixedEffect

logger = logging.getLogger('headlinesignal.estimation.within')

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITER = 10000
OUTCOME = 'ret_next'


def group_codes(labels: Sequence) -> Tuple[np.ndarray, int]:
    """Map labels to dense integer codes 0..G-1 in sorted label order."""
    uniques, codes = np.unique(np.asarray(labels), return_inverse=True)
    return codes.reshape(-1), len(uniques)


def group_means(matrix: np.ndarray, codes: np.ndarray, n_groups: int
                ) -> np.ndarray:
    counts = np.bincount(codes, minlength=n_groups).astype(float)
    sums = np.column_stack([
        np.bincount(codes, weights=matrix[:, j], minlength=n_groups)
        for j in range(matrix.shape[1])])
    return sums / counts[:, None]


def _max_group_mean(matrix, groups, scale):
    worst = 0.0
    for codes, n_groups in groups:
        means = np.abs(group_means(matrix, codes, n_groups)) / scale
        worst = max(worst, float(means.max(initial=0.0)))
    return worst


def demean(matrix: np.ndarray, groups: List[Tuple[np.ndarray, int]],
           tol: float = DEFAULT_TOLERANCE, max_iter: int = DEFAULT_MAX_ITER
           ) -> Tuple[np.ndarray, int]:
    """
    Residualize `matrix` on the group dummies in `groups`. Without groups
    the overall mean is removed. Returns the matrix and the sweep count.
    """
    if not isinstance(max_iter, int) or max_iter <= 0:
        raise ValueError('max_iter should be a positive integer')
    if tol < 0:
        raise ValueError('tol should be a nonnegative float')
    matrix = np.array(matrix, dtype=float, copy=True)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if not groups:
        return matrix - matrix.mean(axis=0), 1
    scale = np.maximum(1.0, np.abs(matrix).max(axis=0))
    sweeps = 0
    while True:
        for codes, n_groups in groups:
            matrix -= group_means(matrix, codes, n_groups)[codes]
        sweeps += 1
        residual = _max_group_mean(matrix, groups, scale)
        if residual < tol:
            break
        if sweeps >= max_iter:
            raise ConvergenceError(
                'within transformation did not converge after {} sweeps'
                .format(sweeps), residual=residual)
    return matrix, sweeps


@dataclass
class Design:
    """The demeaned estimation system and its bookkeeping."""
    y: np.ndarray
    X: np.ndarray
    columns: Tuple[str, ...]
    effects: FrozenSet[FixedEffect]
    firm_codes: np.ndarray
    date_codes: np.ndarray
    n_firms: int
    n_dates: int
    sweeps: int
    #: column norms before demeaning, the reference for the rank check
    scale: np.ndarray = field(repr=False)

    @property
    def n_obs(self) -> int:
        return len(self.y)

    def absorbed(self) -> int:
        """Parameters absorbed by the fixed effects (intercept included)."""
        k = 1
        if FixedEffect.FIRM in self.effects:
            k += self.n_firms - 1
        if FixedEffect.DATE in self.effects:
            k += self.n_dates - 1
        return k


def within_transform(panel: Sequence[PanelObservation],
                     effects=frozenset((FixedEffect.FIRM, FixedEffect.DATE)),
                     regressors: Sequence[str] = ('chatgpt_score',),
                     tol: float = DEFAULT_TOLERANCE,
                     max_iter: int = DEFAULT_MAX_ITER) -> Design:
    if not panel:
        raise EmptySample('empty estimation sample')
    effects = frozenset(FixedEffect(e) for e in effects)
    firm_codes, n_firms = group_codes([obs.firm_id for obs in panel])
    date_codes, n_dates = group_codes(
        [obs.date.toordinal() for obs in panel])
    raw = np.array(
        [[getattr(obs, OUTCOME)] + [getattr(obs, name) for name in regressors]
         for obs in panel], dtype=float)
    groups = []
    # firm first, then date
    if FixedEffect.FIRM in effects:
        groups.append((firm_codes, n_firms))
    if FixedEffect.DATE in effects:
        groups.append((date_codes, n_dates))
    demeaned, sweeps = demean(raw, groups, tol=tol, max_iter=max_iter)
    logger.debug('demeaned %d rows on %s in %d sweeps', len(panel),
                 sorted(e.value for e in effects), sweeps)
    return Design(
        y=demeaned[:, 0], X=demeaned[:, 1:], columns=tuple(regressors),
        effects=effects, firm_codes=firm_codes, date_codes=date_codes,
        n_firms=n_firms, n_dates=n_dates, sweeps=sweeps,
        scale=np.linalg.norm(raw[:, 1:], axis=0))
