"""
Panel regressions of next-day returns on headline scores with firm and
date fixed effects and two-way clustered standard errors.
"""
from .covariance import ClusteredCovariance, clustered_cov
from .estimate import (
    RegressionResult, RegressionSpec, estimate, select_sample, table_specs)
from .fit import FitStats, fit_stats
from .ols import ols
from .table import render_table
from .within import Design, demean, within_transform

__all__ = [
    'ClusteredCovariance', 'clustered_cov', 'RegressionResult',
    'RegressionSpec', 'estimate', 'select_sample', 'table_specs',
    'FitStats', 'fit_stats', 'ols', 'render_table', 'Design', 'demean',
    'within_transform']
