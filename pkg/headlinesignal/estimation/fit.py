"""
Goodness of fit.

AIC and BIC use the Gaussian log-likelihood with constants dropped:
AIC = n ln(SSR/n) + 2k and BIC = n ln(SSR/n) + k ln(n).
"""
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import DegenerateOutcome, EstimationException


@dataclass(frozen=True)
class FitStats:
    r2: float
    adj_r2: float
    aic: float
    bic: float
    ssr: float
    sst: float


def fit_stats(y: np.ndarray, residuals: np.ndarray, k: int) -> FitStats:
    y = np.asarray(y, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    n = len(y)
    if n <= k:
        raise EstimationException(
            '{} observations do not exceed {} parameters'.format(n, k))
    sst = math.fsum((y - y.mean()) ** 2)
    if sst == 0:
        raise DegenerateOutcome('outcome has no variation')
    ssr = math.fsum(residuals ** 2)
    if ssr == 0:
        raise DegenerateOutcome(
            'perfect fit; information criteria are undefined')
    r2 = 1 - ssr / sst
    adj_r2 = 1 - (1 - r2) * (n - 1) / (n - k)
    log_term = n * math.log(ssr / n)
    return FitStats(
        r2=r2, adj_r2=adj_r2, aic=log_term + 2 * k,
        bic=log_term + k * math.log(n), ssr=ssr, sst=sst)
