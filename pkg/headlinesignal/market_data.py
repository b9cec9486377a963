"""
Daily returns, the study universe, NYSE size breakpoints and the trading
calendar.
"""
import bisect
import datetime
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Union

import pytz

from .exceptions import (
    BreakpointUndefined, CalendarException, ParseError, RecordException)
from .records.base_records import CalendarDay, ReturnRecord
from .records.codec import Source, read_records
from .records.context import count
from .records.types import (
    COMMON_SHARE_CODES, MAJOR_EXCHANGES, Exchange, Format, SizeClass)

logger = logging.getLogger('headlinesignal.market_data')

#: small stocks are below this percentile of NYSE market caps
NYSE_BREAKPOINT_PERCENTILE = 10
DEFAULT_CLOSE = datetime.time(16, 0)
DEFAULT_OPEN = datetime.time(9, 30)
DEFAULT_TIMEZONE = 'America/New_York'


def load_returns(source: Source, fmt: Union[Format, str] = Format.CSV
                 ) -> List[ReturnRecord]:
    """
    Parse a returns file. Every row is validated (`ret > -1`,
    `market_cap > 0` when present) and (firm_id, date) must be unique.
    """
    records = read_records(source, ReturnRecord, fmt)
    logger.info('loaded %d return records', len(records))
    count('returns.parsed', len(records))
    return records


def in_universe(record: ReturnRecord) -> bool:
    return record.share_code in COMMON_SHARE_CODES \
        and record.exchange in MAJOR_EXCHANGES


def filter_universe(records: Iterable[ReturnRecord]) -> List[ReturnRecord]:
    """Common stocks (share code 10 or 11) listed on NYSE, AMEX or NASDAQ."""
    records = list(records)
    retval = [r for r in records if in_universe(r)]
    count('returns.outside_universe', len(records) - len(retval))
    return retval


def _nearest_rank(values: Sequence[float], percentile: int) -> float:
    ordered = sorted(values)
    # k = ceil(p * n / 100), in integers to keep 10% of 30 at rank 3
    k = max(1, -(-percentile * len(ordered) // 100))
    return ordered[k - 1]


def nyse_size_breakpoint(records: Iterable[ReturnRecord],
                         date: datetime.date,
                         percentile: int = NYSE_BREAKPOINT_PERCENTILE
                         ) -> float:
    """
    Nearest-rank percentile of the market caps of NYSE records on `date`.
    Records without a market cap do not take part.
    """
    caps = [
        r.market_cap for r in records
        if r.date == date and r.exchange is Exchange.NYSE
        and r.market_cap is not None]
    if not caps:
        raise BreakpointUndefined(
            'no NYSE market caps on {}'.format(date.isoformat()))
    return _nearest_rank(caps, percentile)


def size_breakpoints(records: Iterable[ReturnRecord],
                     percentile: int = NYSE_BREAKPOINT_PERCENTILE
                     ) -> Dict[datetime.date, float]:
    """Breakpoints for every date that has NYSE market caps."""
    caps = {}
    for r in records:
        if r.exchange is Exchange.NYSE and r.market_cap is not None:
            caps.setdefault(r.date, []).append(r.market_cap)
    return {d: _nearest_rank(v, percentile) for d, v in sorted(caps.items())}


def classify_size(record, breakpoint: float) -> SizeClass:
    """Small iff the record's market cap is strictly below `breakpoint`."""
    if record.market_cap is None:
        raise RecordException('{} {} has no market cap'.format(
            record.firm_id, record.date))
    if record.market_cap < breakpoint:
        return SizeClass.SMALL
    return SizeClass.NON_SMALL


class TradingCalendar:
    """
    Ordered trading dates with the exchange close (and open) in the
    exchange's timezone. Individual dates may close early.
    """

    def __init__(self, dates: Iterable[datetime.date],
                 close: datetime.time = DEFAULT_CLOSE,
                 timezone: Union[str, datetime.tzinfo] = DEFAULT_TIMEZONE,
                 early_closes: Optional[Dict[datetime.date,
                                             datetime.time]] = None,
                 open_time: datetime.time = DEFAULT_OPEN):
        self.dates = tuple(dates)
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise CalendarException(
                    'calendar dates must be strictly increasing: {} then {}'
                    .format(a, b))
        self.close = close
        self.open_time = open_time
        self.tz = timezone if isinstance(timezone, datetime.tzinfo) \
            else pytz.timezone(timezone)
        self.early_closes = dict(early_closes or {})

    def __len__(self):
        return len(self.dates)

    def __iter__(self):
        return iter(self.dates)

    def __contains__(self, date: datetime.date):
        i = bisect.bisect_left(self.dates, date)
        return i < len(self.dates) and self.dates[i] == date

    def __repr__(self):
        if not self.dates:
            return 'TradingCalendar()'
        return 'TradingCalendar({} .. {}, close={} {})'.format(
            self.dates[0], self.dates[-1], self.close.strftime('%H:%M'),
            self.tz.zone)

    @property
    def first(self) -> datetime.date:
        return self.dates[0]

    @property
    def last(self) -> datetime.date:
        return self.dates[-1]

    def index(self, date: datetime.date) -> int:
        i = bisect.bisect_left(self.dates, date)
        if i == len(self.dates) or self.dates[i] != date:
            raise CalendarException('{} is not a trading day'.format(date))
        return i

    def next_trading_day(self, date: datetime.date) -> datetime.date:
        """First trading date strictly after `date`."""
        i = bisect.bisect_right(self.dates, date)
        if i == len(self.dates):
            raise CalendarException(
                'calendar ends before a session after {}'.format(date))
        return self.dates[i]

    def shift(self, date: datetime.date, sessions: int) -> datetime.date:
        """The trading date `sessions` sessions after trading date `date`."""
        i = self.index(date) + sessions
        if not 0 <= i < len(self.dates):
            raise CalendarException(
                '{} sessions from {} is outside the calendar'.format(
                    sessions, date))
        return self.dates[i]

    def close_time(self, date: datetime.date) -> datetime.time:
        return self.early_closes.get(date, self.close)

    def close_at(self, date: datetime.date) -> datetime.datetime:
        return self.tz.localize(
            datetime.datetime.combine(date, self.close_time(date)))

    def localize(self, ts: datetime.datetime) -> datetime.datetime:
        if ts.tzinfo is None:
            raise CalendarException('timestamp {} has no offset'.format(ts))
        return ts.astimezone(self.tz)


def load_calendar(source: Source) -> TradingCalendar:
    """
    Read a JSONL calendar: one `{"date": ..., "close": "HH:MM",
    "timezone": "<IANA name>"}` object per trading date. `close` and
    `timezone` may be omitted after the first line; a `close` that differs
    from the first line's is an early close on that date.
    """
    days = read_records(source, CalendarDay, Format.JSONL)
    if not days:
        raise CalendarException('calendar is empty')
    days.sort(key=lambda d: d.date)
    close = days[0].close or DEFAULT_CLOSE
    tz = days[0].timezone or pytz.timezone(DEFAULT_TIMEZONE)
    early = {}
    for day in days:
        if day.timezone is not None and day.timezone.zone != tz.zone:
            raise ParseError(
                'calendar mixes timezones {} and {}'.format(
                    tz.zone, day.timezone.zone), field='timezone')
        if day.close is not None and day.close != close:
            early[day.date] = day.close
    return TradingCalendar(
        [d.date for d in days], close=close, timezone=tz, early_closes=early)


def weekday_calendar(start: datetime.date, end: datetime.date,
                     holidays: Iterable[datetime.date] = (),
                     **kwargs) -> TradingCalendar:
    """Monday to Friday between `start` and `end`, minus `holidays`."""
    holidays = set(holidays)
    dates = []
    d = start
    while d <= end:
        if d.weekday() < 5 and d not in holidays:
            dates.append(d)
        d += datetime.timedelta(days=1)
    return TradingCalendar(dates, **kwargs)
