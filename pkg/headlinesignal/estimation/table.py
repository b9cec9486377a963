"""
Text rendering of regression results: one column per regression,
coefficients with their t-statistics in parentheses beneath, then the
sample size and fit rows.
"""
from typing import List, Optional, Sequence

from ..records.types import FixedEffect
from .estimate import RegressionResult

LABEL_WIDTH = 16
COLUMN_WIDTH = 14

STAT_ROWS = (
    ('N', 'n_obs', '{:d}'),
    ('R2', 'r2', '{:.4f}'),
    ('Adj. R2', 'adj_r2', '{:.4f}'),
    ('AIC', 'aic', '{:.1f}'),
    ('BIC', 'bic', '{:.1f}'),
)


def _row(label: str, cells: Sequence[str]) -> str:
    return label.ljust(LABEL_WIDTH) + ''.join(
        cell.rjust(COLUMN_WIDTH) for cell in cells)


def _dims(dims) -> str:
    return ' and '.join(e.value for e in FixedEffect if e in dims)


def footer(results: Sequence[RegressionResult]) -> str:
    """Names the fixed effects and clustering the columns were run with."""
    effects = {r.spec.fixed_effects for r in results}
    clusters = {r.spec.cluster_dims for r in results}
    if len(effects) != 1:
        absorbed = 'Fixed effects differ by column'
    elif not next(iter(effects)):
        absorbed = 'No fixed effects'
    else:
        absorbed = '{} fixed effects'.format(
            _dims(next(iter(effects))).capitalize())
    if len(clusters) != 1:
        errors = 'standard errors clustered as set per column'
    elif not next(iter(clusters)):
        errors = 'classical standard errors'
    else:
        errors = 'standard errors clustered by {}'.format(
            _dims(next(iter(clusters))))
    return '{}; t-statistics in parentheses from {}.'.format(
        absorbed, errors)


def render_table(results: Sequence[RegressionResult],
                 titles: Optional[Sequence[str]] = None,
                 coefficient_format: str = '{:.4f}') -> str:
    if titles is None:
        titles = [r.spec.label or '({})'.format(i)
                  for i, r in enumerate(results, start=1)]
    regressors: List[str] = []
    for result in results:
        for name in result.spec.regressors:
            if name not in regressors:
                regressors.append(name)
    rule = '-' * (LABEL_WIDTH + COLUMN_WIDTH * len(results))
    lines = [rule, _row('', titles), rule]
    for name in regressors:
        lines.append(_row(name, [
            coefficient_format.format(r.coefficients[name])
            if name in r.coefficients else '' for r in results]))
        lines.append(_row('', [
            '({:.2f})'.format(r.t_stats[name])
            if name in r.t_stats else '' for r in results]))
    lines.append(rule)
    for label, attribute, fmt in STAT_ROWS:
        lines.append(_row(label, [
            fmt.format(getattr(r, attribute)) for r in results]))
    lines.append(rule)
    lines.append(footer(results))
    return '\n'.join(lines) + '\n'
