"""
From headline scores to a panel of (signal, next tradable return) rows.

Timing: a headline published at or before the close of trading day d
(exchange time) is tradable on d; later headlines, and headlines from
non-trading days, belong to the next trading day. Pre-open news therefore
counts for the same day. The signal of effective date t is paired with the
close-to-close return of t, the first session during which it can be
traded. `extra_lag` pushes the pairing further out, and the open-to-open
convention pairs with the return booked on the following session.
"""
import datetime
import logging
import math
from collections import OrderedDict
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .exceptions import CalendarException
from .market_data import TradingCalendar, classify_size
from .records.base_records import (
    FirmDaySignal, HeadlineRecord, PanelObservation, ReturnRecord,
    SentimentScore)
from .records.context import count
from .records.types import ReturnConvention

logger = logging.getLogger('headlinesignal.signal_builder')


def assign_effective_date(published_at: datetime.datetime,
                          calendar: TradingCalendar) -> datetime.date:
    local = calendar.localize(published_at)
    day = local.date()
    if not calendar.dates or day < calendar.first or day > calendar.last:
        raise CalendarException(
            '{} is outside the calendar'.format(published_at.isoformat()))
    if day in calendar and local <= calendar.close_at(day):
        return day
    return calendar.next_trading_day(day)


def effective_days(records: Iterable[HeadlineRecord],
                   calendar: TradingCalendar
                   ) -> 'OrderedDict[str, datetime.date]':
    return OrderedDict(
        (r.story_id, assign_effective_date(r.published_at, calendar))
        for r in records)


def aggregate_firm_day(
        scores: Iterable[Tuple[HeadlineRecord, SentimentScore]],
        calendar: TradingCalendar) -> List[FirmDaySignal]:
    """
    Average headline scores per (firm, effective date). UNKNOWN (0) scores
    count towards the mean. Output is sorted by date, then firm.
    """
    groups = {}
    for record, score in scores:
        if record.story_id != score.story_id:
            raise ValueError('score for {} paired with headline {}'.format(
                score.story_id, record.story_id))
        key = (record.firm_id,
               assign_effective_date(record.published_at, calendar))
        groups.setdefault(key, []).append((record, score))

    retval = []
    for (firm_id, day), members in sorted(
            groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        values = [s.value for _, s in members]
        vendor = [r.vendor_sentiment for r, _ in members
                  if r.vendor_sentiment is not None]
        retval.append(FirmDaySignal(
            firm_id=firm_id,
            effective_date=day,
            chatgpt_score=sum(values) / len(values),
            vendor_score=math.fsum(sorted(vendor)) / len(vendor)
            if vendor else None,
            n_headlines=len(values)))
    count('signals.built', len(retval))
    return retval


def build_panel(signals: Iterable[FirmDaySignal],
                returns: Iterable[ReturnRecord],
                calendar: TradingCalendar,
                extra_lag: int = 0,
                convention: ReturnConvention = ReturnConvention.CLOSE_TO_CLOSE,
                breakpoints: Optional[Mapping[datetime.date, float]] = None
                ) -> List[PanelObservation]:
    """
    Pair each signal with its firm's return on the session it predicts.
    Signals without a return are dropped and counted as
    `panel.dropped_signals`; `panel.matched + panel.dropped_signals` equals
    the number of signals.
    """
    if extra_lag < 0:
        raise ValueError('extra_lag must be >= 0')
    lag = extra_lag + (1 if convention is ReturnConvention.OPEN_TO_OPEN
                       else 0)
    by_key: Dict[tuple, ReturnRecord] = {(r.firm_id, r.date): r
                                         for r in returns}
    retval = []
    dropped = 0
    signals = list(signals)
    for signal in signals:
        try:
            target = calendar.shift(signal.effective_date, lag)
        except CalendarException:
            dropped += 1
            continue
        ret = by_key.get((signal.firm_id, target))
        if ret is None:
            logger.debug('no return for %s on %s', signal.firm_id, target)
            dropped += 1
            continue
        size_class = None
        if breakpoints is not None and ret.market_cap is not None \
                and target in breakpoints:
            size_class = classify_size(ret, breakpoints[target])
        retval.append(PanelObservation(
            firm_id=signal.firm_id,
            date=target,
            ret_next=ret.ret,
            chatgpt_score=signal.chatgpt_score,
            vendor_score=signal.vendor_score,
            effective_date=signal.effective_date,
            n_headlines=signal.n_headlines,
            market_cap=ret.market_cap,
            size_class=size_class))
    retval.sort(key=lambda o: (o.date, o.firm_id))
    count('panel.matched', len(retval))
    count('panel.dropped_signals', dropped)
    logger.info('panel: %d observations, %d signals without a return',
                len(retval), dropped)
    return retval
