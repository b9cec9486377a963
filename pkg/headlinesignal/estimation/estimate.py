import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import scipy.stats

from ..exceptions import DegenerateOutcome, EmptySample
from ..records.base_records import PanelObservation
from ..records.context import count
from ..records.types import FixedEffect, SizeClass
from .covariance import classical_cov, clustered_cov
from .fit import fit_stats
from .ols import ols
from .within import DEFAULT_MAX_ITER, DEFAULT_TOLERANCE, within_transform

logger = logging.getLogger('headlinesignal.estimation')

REGRESSOR_COLUMNS = ('chatgpt_score', 'vendor_score')
BOTH = frozenset((FixedEffect.FIRM, FixedEffect.DATE))


@dataclass(frozen=True)
class RegressionSpec:
    regressors: Tuple[str, ...] = ('chatgpt_score',)
    fixed_effects: FrozenSet[FixedEffect] = BOTH
    cluster_dims: FrozenSet[FixedEffect] = BOTH
    sample_filter: Optional[SizeClass] = None
    label: Optional[str] = None

    def __post_init__(self):
        regressors = tuple(self.regressors)
        if not regressors:
            raise ValueError('at least one regressor is required')
        if len(set(regressors)) != len(regressors):
            raise ValueError('duplicate regressor in {}'.format(regressors))
        unknown = [r for r in regressors if r not in REGRESSOR_COLUMNS]
        if unknown:
            raise ValueError('unknown regressor {!r}'.format(unknown[0]))
        object.__setattr__(self, 'regressors', regressors)
        object.__setattr__(self, 'fixed_effects', frozenset(
            FixedEffect(e) for e in self.fixed_effects))
        object.__setattr__(self, 'cluster_dims', frozenset(
            FixedEffect(e) for e in self.cluster_dims))
        if self.sample_filter is not None:
            object.__setattr__(
                self, 'sample_filter', SizeClass(self.sample_filter))

    @property
    def sample(self) -> str:
        return self.sample_filter.value if self.sample_filter else 'all'

    def to_dict(self) -> dict:
        return {
            'regressors': list(self.regressors),
            'fixed_effects': sorted(e.value for e in self.fixed_effects),
            'cluster_dims': sorted(e.value for e in self.cluster_dims),
            'sample': self.sample,
            'label': self.label,
        }


@dataclass
class RegressionResult:
    spec: RegressionSpec
    coefficients: Dict[str, float]
    std_errors: Dict[str, float]
    t_stats: Dict[str, float]
    p_values: Dict[str, float]
    n_obs: int
    r2: float
    adj_r2: float
    aic: float
    bic: float
    n_clusters: Dict[str, int] = field(default_factory=dict)
    n_firms: int = 0
    n_dates: int = 0
    n_params: int = 0
    dof: int = 0
    psd_repaired: bool = False
    sweeps: int = 0

    def to_dict(self) -> dict:
        return {
            'spec': self.spec.to_dict(),
            'coefficients': dict(self.coefficients),
            'std_errors': dict(self.std_errors),
            't_stats': dict(self.t_stats),
            'p_values': dict(self.p_values),
            'n_obs': self.n_obs,
            'r2': self.r2,
            'adj_r2': self.adj_r2,
            'aic': self.aic,
            'bic': self.bic,
            'n_clusters': dict(self.n_clusters),
            'n_firms': self.n_firms,
            'n_dates': self.n_dates,
            'n_params': self.n_params,
            'dof': self.dof,
            'psd_repaired': self.psd_repaired,
        }


def select_sample(panel: Sequence[PanelObservation], spec: RegressionSpec
                  ) -> List[PanelObservation]:
    rows = []
    unsized = missing = 0
    for obs in panel:
        if spec.sample_filter is not None and \
                obs.size_class is not spec.sample_filter:
            if obs.size_class is None:
                unsized += 1
            continue
        if any(getattr(obs, name) is None for name in spec.regressors):
            missing += 1
            continue
        rows.append(obs)
    if unsized:
        count('regression.unsized_excluded', unsized)
    if missing:
        logger.info('%s: %d rows lack a regressor value', spec.sample,
                    missing)
        count('regression.missing_regressor', missing)
    return rows


def estimate(panel: Sequence[PanelObservation], spec: RegressionSpec,
             tol: float = DEFAULT_TOLERANCE,
             max_iter: int = DEFAULT_MAX_ITER) -> RegressionResult:
    rows = select_sample(panel, spec)
    if not rows:
        raise EmptySample('empty estimation sample for {}'.format(
            spec.sample))
    design = within_transform(
        rows, spec.fixed_effects, spec.regressors, tol=tol,
        max_iter=max_iter)
    coefficients, residuals = ols(
        design.y, design.X, design.columns, scale=design.scale)
    n_regressors = len(spec.regressors)
    k = design.absorbed() + n_regressors
    stats = fit_stats(design.y, residuals, k)

    labels = {FixedEffect.FIRM: design.firm_codes,
              FixedEffect.DATE: design.date_codes}
    dims = [d for d in (FixedEffect.FIRM, FixedEffect.DATE)
            if d in spec.cluster_dims]
    n_clusters = {}
    psd_repaired = False
    if dims:
        result = clustered_cov(
            design.X, residuals, [labels[d] for d in dims],
            n_params=n_regressors)
        cov = result.cov
        psd_repaired = result.psd_repaired
        n_clusters = {d.value: g for d, g in zip(dims, result.n_clusters)}
        dof = min(result.n_clusters) - 1
    else:
        cov = classical_cov(design.X, residuals, k)
        dof = design.n_obs - k

    variances = np.diag(cov)
    coefs, ses, ts, ps = {}, {}, {}, {}
    for j, name in enumerate(spec.regressors):
        if not variances[j] > 0:
            raise DegenerateOutcome(
                'zero standard error for {!r}'.format(name))
        coef = float(coefficients[j])
        se = float(np.sqrt(variances[j]))
        t = coef / se
        coefs[name], ses[name], ts[name] = coef, se, t
        ps[name] = float(2 * scipy.stats.t.sf(abs(t), dof))
    logger.info('%s %s: n=%d r2=%.4f %s', spec.label or 'regression',
                spec.sample, design.n_obs, stats.r2,
                ' '.join('{}={:.4g}(t={:.2f})'.format(n, coefs[n], ts[n])
                         for n in spec.regressors))
    count('regression.estimated')
    return RegressionResult(
        spec=spec, coefficients=coefs, std_errors=ses, t_stats=ts,
        p_values=ps, n_obs=design.n_obs, r2=stats.r2, adj_r2=stats.adj_r2,
        aic=stats.aic, bic=stats.bic, n_clusters=n_clusters,
        n_firms=design.n_firms, n_dates=design.n_dates, n_params=k, dof=dof,
        psd_repaired=psd_repaired, sweeps=design.sweeps)


def table_specs(label_prefix: str = '') -> List[RegressionSpec]:
    """
    The nine regressions of the results table: model score, vendor score,
    and both, on all firms, small firms and non-small firms.
    """
    specs = []
    for sample in (None, SizeClass.SMALL, SizeClass.NON_SMALL):
        for n, regressors in enumerate(
                (('chatgpt_score',), ('vendor_score',),
                 ('chatgpt_score', 'vendor_score')), start=1):
            name = (sample.value if sample else 'all')
            specs.append(RegressionSpec(
                regressors=regressors, sample_filter=sample,
                label='{}{} ({})'.format(label_prefix, name, n)))
    return specs
