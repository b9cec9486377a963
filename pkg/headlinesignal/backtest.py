"""
Daily long-short portfolios from panel signals.

Each day the long leg holds the firms with a positive score and the short
leg the firms with a negative score; zero scores are not traded. A leg
without members earns 0 that day and the day is flagged.
"""
import datetime
import logging
import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .market_data import classify_size
from .records.base_records import PanelObservation, PortfolioDay
from .records.context import count
from .records.types import PortfolioRule, SizeClass, Weighting

logger = logging.getLogger('headlinesignal.backtest')

TRADING_DAYS = 252
LONG_EMPTY = 'long-empty'
SHORT_EMPTY = 'short-empty'


class PortfolioSeries:
    """Daily portfolio returns in date order with their cumulative values."""

    def __init__(self, days: Sequence[PortfolioDay],
                 rule: PortfolioRule = PortfolioRule.SIGN_SPLIT,
                 weighting: Weighting = Weighting.EQUAL,
                 cost_bps: float = 0.0):
        self.days = list(days)
        self.rule = rule
        self.weighting = weighting
        self.cost_bps = cost_bps

    def __len__(self):
        return len(self.days)

    def __iter__(self):
        return iter(self.days)

    def __repr__(self):
        return 'PortfolioSeries({} days, {})'.format(
            len(self.days), self.weighting.value)

    def cumulative(self, leg: str = 'long_short') -> List[float]:
        """Cumulative value of `leg`, starting at 1.0 before the first day."""
        return [1.0] + [getattr(d, 'cum_' + leg) for d in self.days]

    def summary(self) -> Dict[str, Optional[float]]:
        returns = np.array([d.long_short_return for d in self.days])
        summary = {
            'n_days': len(self.days),
            'n_flagged': sum(1 for d in self.days if d.flag),
            'mean_long_short': None,
            'mean_long': None,
            'mean_short': None,
            'sharpe': None,
            'max_drawdown': None,
            'total_return': None,
        }
        if not self.days:
            return summary
        summary['mean_long_short'] = float(returns.mean())
        summary['mean_long'] = float(np.mean(
            [d.long_return for d in self.days]))
        summary['mean_short'] = float(np.mean(
            [d.short_return for d in self.days]))
        summary['total_return'] = self.days[-1].cum_long_short - 1.0
        if len(returns) > 1:
            std = float(returns.std(ddof=1))
            if std > 0:
                summary['sharpe'] = float(
                    returns.mean() / std * math.sqrt(TRADING_DAYS))
        nav = np.array(self.cumulative())
        peaks = np.maximum.accumulate(nav)
        summary['max_drawdown'] = float(((peaks - nav) / peaks).max())
        return summary

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [d.as_dict() for d in self.days],
            columns=list(PortfolioDay.FIELDS))


def _leg_return(leg: pd.DataFrame, weighting: Weighting) -> float:
    if leg.empty:
        return 0.0
    if weighting is Weighting.VALUE:
        return float(np.average(leg['ret'], weights=leg['cap']))
    return float(leg['ret'].mean())


def form_portfolio(panel: Iterable[PanelObservation],
                   rule: PortfolioRule = PortfolioRule.SIGN_SPLIT,
                   weighting: Weighting = Weighting.EQUAL,
                   cost_bps: float = 0.0) -> PortfolioSeries:
    """
    `cost_bps` is charged per populated leg per day: it lowers the long
    leg's return and raises the short leg's.
    """
    rule = PortfolioRule(rule)
    weighting = Weighting(weighting)
    if cost_bps < 0:
        raise ValueError('cost_bps must be >= 0')
    rows = []
    uncapped = 0
    for obs in panel:
        if weighting is Weighting.VALUE and obs.market_cap is None:
            uncapped += 1
            continue
        rows.append((obs.date.toordinal(), obs.firm_id, obs.ret_next,
                     obs.chatgpt_score, obs.market_cap))
    if uncapped:
        logger.info('%d observations without a market cap left out of '
                    'the value-weighted portfolio', uncapped)
        count('backtest.uncapped', uncapped)
    frame = pd.DataFrame(
        rows, columns=['day', 'firm_id', 'ret', 'score', 'cap'])
    cost = cost_bps / 10000.0
    days = []
    cum_long = cum_short = cum_long_short = 1.0
    for ordinal, day in frame.groupby('day', sort=True):
        longs = day[day['score'] > 0]
        shorts = day[day['score'] < 0]
        long_return = _leg_return(longs, weighting)
        short_return = _leg_return(shorts, weighting)
        flags = []
        if longs.empty:
            flags.append(LONG_EMPTY)
        else:
            long_return -= cost
        if shorts.empty:
            flags.append(SHORT_EMPTY)
        else:
            short_return += cost
        long_short_return = long_return - short_return
        cum_long *= 1 + long_return
        cum_short *= 1 + short_return
        cum_long_short *= 1 + long_short_return
        days.append(PortfolioDay(
            date=datetime.date.fromordinal(int(ordinal)),
            long_return=long_return, short_return=short_return,
            long_short_return=long_short_return, n_long=len(longs),
            n_short=len(shorts), cum_long=cum_long, cum_short=cum_short,
            cum_long_short=cum_long_short, flag='+'.join(flags) or None))
    flagged = sum(1 for d in days if d.flag)
    if flagged:
        logger.warning('%d of %d portfolio days have an empty leg',
                       flagged, len(days))
        count('backtest.flagged_days', flagged)
    return PortfolioSeries(days, rule, weighting, cost_bps)


def split_by_size(panel: Iterable[PanelObservation],
                  breakpoints: Optional[Mapping] = None
                  ) -> Tuple[List[PanelObservation], List[PanelObservation]]:
    """
    Partition observations into (small, non-small). With `breakpoints`
    (date to NYSE breakpoint) sizes are classified afresh; otherwise the
    stored size class is used. Unclassifiable observations are counted and
    left out of both.
    """
    small, non_small = [], []
    unsized = 0
    for obs in panel:
        if breakpoints is not None:
            if obs.market_cap is None or obs.date not in breakpoints:
                unsized += 1
                continue
            size = classify_size(obs, breakpoints[obs.date])
        else:
            size = obs.size_class
        if size is SizeClass.SMALL:
            small.append(obs)
        elif size is SizeClass.NON_SMALL:
            non_small.append(obs)
        else:
            unsized += 1
    if unsized:
        count('backtest.unsized', unsized)
    return small, non_small
