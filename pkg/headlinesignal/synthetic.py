"""
Seeded synthetic data.

`generate_corpus` builds a small calendar, return file and headline feed
whose returns load on the sign of the headlines as the lexicon scorer
reads them. `simulate_panel` draws estimation panels with known
coefficients.
"""
import datetime
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .market_data import TradingCalendar, weekday_calendar
from .news_ingest import EXCLUDED_CATEGORIES, passes_filters
from .records.base_records import (
    CalendarDay, HeadlineRecord, PanelObservation, ReturnRecord)
from .records.codec import dump_records
from .records.types import Exchange, Format, SizeClass, StoryType
from .signal_builder import assign_effective_date

logger = logging.getLogger('headlinesignal.synthetic')

DEFAULT_SEED = 0
DEFAULT_FIRMS = 20
DEFAULT_DAYS = 60
DEFAULT_HEADLINES = 200
DEFAULT_START = datetime.date(2021, 10, 1)
#: return loading on the firm-day headline signal
DEFAULT_BETA = 0.01
RETURN_NOISE = 0.01

FIRM_NAMES = (
    'Acme Industries', 'Birch Analytics', 'Cobalt Mining', 'Delta Foods',
    'Elm Street Bancorp', 'Fjord Shipping', 'Granite Telecom',
    'Harbor Pharmaceuticals', 'Iris Semiconductors', 'Juniper Retail',
    'Kestrel Aerospace', 'Lumen Utilities', 'Maple Insurance',
    'Nimbus Software', 'Orchid Biotech', 'Pioneer Railways',
    'Quartz Materials', 'Redwood Energy', 'Summit Hotels', 'Tundra Motors',
)

POSITIVE_TEMPLATES = (
    '{name} beats quarterly profit estimates',
    '{name} wins multiyear contract with federal agency',
    '{name} raises dividend after strong quarter',
    '{name} announces share buyback program',
    '{name} receives approval for flagship product',
    '{name} stock upgraded by analysts on margin outlook',
)
NEGATIVE_TEMPLATES = (
    '{name} misses revenue estimates as costs climb',
    '{name} faces fraud probe by regulators',
    '{name} announces layoffs amid weak orders',
    '{name} issues recall of faulty units',
    '{name} chief executive resigns unexpectedly',
    '{name} downgraded on slowing demand',
)
NEUTRAL_TEMPLATES = (
    '{name} to present at industry conference',
    '{name} names new chief financial officer',
    '{name} schedules annual shareholder meeting',
    '{name} moves headquarters to new campus',
)
DUPLICATE_SUFFIX = ' (update)'


@dataclass
class SyntheticCorpus:
    calendar: TradingCalendar
    returns: List[ReturnRecord]
    headlines: List[HeadlineRecord]
    #: sign of each headline as written, keyed by story id
    signs: Dict[str, int]

    def calendar_days(self) -> List[CalendarDay]:
        days = []
        for i, date in enumerate(self.calendar):
            if i == 0:
                days.append(CalendarDay(
                    date=date, close=self.calendar.close,
                    timezone=self.calendar.tz))
            else:
                days.append(CalendarDay(date=date))
        return days

    def write(self, directory: str) -> Dict[str, str]:
        """Write calendar.jsonl, returns.csv and headlines.jsonl."""
        os.makedirs(directory, exist_ok=True)
        paths = {
            'calendar': os.path.join(directory, 'calendar.jsonl'),
            'returns': os.path.join(directory, 'returns.csv'),
            'headlines': os.path.join(directory, 'headlines.jsonl'),
        }
        outputs = (
            ('calendar', self.calendar_days(), CalendarDay, Format.JSONL),
            ('returns', self.returns, ReturnRecord, Format.CSV),
            ('headlines', self.headlines, HeadlineRecord, Format.JSONL),
        )
        for name, records, record_type, fmt in outputs:
            with open(paths[name], 'wb') as fp:
                fp.write(dump_records(records, record_type, fmt))
        logger.info('wrote synthetic corpus to %s', directory)
        return paths


def _trading_days(start: datetime.date, n_days: int) -> TradingCalendar:
    # seven calendar days hold at least five weekdays
    end = start + datetime.timedelta(days=2 * n_days + 7)
    dates = weekday_calendar(start, end).dates[:n_days]
    return TradingCalendar(dates)


def _firms(rng: np.random.Generator, n_firms: int):
    """(firm_id, name, exchange, share_code, base market cap) per firm."""
    firms = []
    for i in range(n_firms):
        if i == n_firms - 1 and n_firms > 2:
            exchange = Exchange.OTHER
        elif i % 3 == 2:
            exchange = Exchange.NASDAQ
        elif i % 7 == 6:
            exchange = Exchange.AMEX
        else:
            exchange = Exchange.NYSE
        # NASDAQ and AMEX names skew small
        scale = 0.05 if exchange in (Exchange.NASDAQ, Exchange.AMEX) else 1.0
        cap = float(np.exp(rng.normal(8.0, 1.0))) * scale
        name = FIRM_NAMES[i % len(FIRM_NAMES)]
        if i >= len(FIRM_NAMES):
            name = '{} {}'.format(name, i // len(FIRM_NAMES) + 1)
        firms.append(('F{:02d}'.format(i + 1), name, exchange,
                      10 + i % 2, cap))
    return firms


def _headline(rng, story_no, firm, published_at, sign):
    templates = {1: POSITIVE_TEMPLATES, -1: NEGATIVE_TEMPLATES,
                 0: NEUTRAL_TEMPLATES}[sign]
    text = templates[int(rng.integers(len(templates)))].format(name=firm[1])
    relevance = 100
    category = 'corporate'
    similarity_days = float(rng.integers(90, 366))
    story_type = StoryType.FULL_ARTICLE if rng.random() < 0.7 \
        else StoryType.PRESS_RELEASE
    draw = rng.random()
    if draw < 0.08:
        relevance = int(rng.integers(40, 100))
    elif draw < 0.12:
        category = sorted(EXCLUDED_CATEGORIES)[int(rng.integers(2))]
    elif draw < 0.20:
        similarity_days = float(rng.integers(0, 90))
    elif draw < 0.24:
        story_type = StoryType.OTHER
    return HeadlineRecord(
        story_id='S{:05d}'.format(story_no), firm_id=firm[0],
        firm_name=firm[1], published_at=published_at, headline=text,
        relevance=relevance, category=category,
        event_similarity_days=similarity_days, story_type=story_type,
        vendor_sentiment=round(float(rng.normal(0.0, 0.5)), 4))


def generate_corpus(seed: int = DEFAULT_SEED, n_firms: int = DEFAULT_FIRMS,
                    n_days: int = DEFAULT_DAYS,
                    n_headlines: int = DEFAULT_HEADLINES,
                    beta: float = DEFAULT_BETA,
                    start: datetime.date = DEFAULT_START,
                    duplicate_share: float = 0.1) -> SyntheticCorpus:
    if n_days < 3:
        raise ValueError('need at least 3 trading days')
    rng = np.random.default_rng(seed)
    calendar = _trading_days(start, n_days)
    firms = _firms(rng, n_firms)

    headlines, signs = [], {}
    n_duplicates = int(round(n_headlines * duplicate_share))
    for story_no in range(1, n_headlines - n_duplicates + 1):
        firm = firms[int(rng.integers(n_firms))]
        # leave the last session free so every signal has a return
        date = calendar.dates[int(rng.integers(n_days - 2))]
        minutes = int(rng.integers(6 * 60, 20 * 60))
        local = calendar.tz.localize(datetime.datetime.combine(
            date, datetime.time(minutes // 60, minutes % 60)))
        sign = int(rng.choice((-1, 0, 1), p=(0.35, 0.3, 0.35)))
        record = _headline(rng, story_no, firm, local, sign)
        headlines.append(record)
        signs[record.story_id] = sign

    originals = list(headlines)
    for story_no in range(len(originals) + 1, n_headlines + 1):
        source = originals[int(rng.integers(len(originals)))]
        published_at = source.published_at + datetime.timedelta(minutes=1)
        if assign_effective_date(published_at, calendar) != \
                assign_effective_date(source.published_at, calendar):
            published_at = source.published_at
        record = source.replace(
            story_id='S{:05d}'.format(story_no),
            headline=source.headline + DUPLICATE_SUFFIX,
            published_at=published_at)
        headlines.append(record)
        signs[record.story_id] = signs[source.story_id]

    signal = _firm_day_signal(headlines, signs, calendar)
    returns = _returns(rng, firms, calendar, signal, beta)
    headlines.sort(key=lambda r: (r.published_at, r.story_id))
    logger.info('generated %d headlines and %d returns (seed %d)',
                len(headlines), len(returns), seed)
    return SyntheticCorpus(calendar, returns, headlines, signs)


def _firm_day_signal(headlines, signs, calendar
                     ) -> Dict[Tuple[str, datetime.date], float]:
    groups = {}
    for r in headlines:
        if not passes_filters(r):
            continue
        key = (r.firm_id, assign_effective_date(r.published_at, calendar))
        groups.setdefault(key, []).append(signs[r.story_id])
    return {k: sum(v) / len(v) for k, v in groups.items()}


def _returns(rng, firms, calendar, signal, beta) -> List[ReturnRecord]:
    market = rng.normal(0.0, 0.005, size=len(calendar))
    returns = []
    for firm_id, _, exchange, share_code, cap in firms:
        alpha = rng.normal(0.0, 0.001)
        growth = 1.0
        for t, date in enumerate(calendar):
            ret = alpha + market[t] + rng.normal(0.0, RETURN_NOISE) \
                + beta * signal.get((firm_id, date), 0.0)
            growth *= 1 + ret
            returns.append(ReturnRecord(
                firm_id=firm_id, date=date, ret=round(float(ret), 6),
                market_cap=round(cap * growth, 3), share_code=share_code,
                exchange=exchange))
    returns.sort(key=lambda r: (r.date, r.firm_id))
    return returns


def simulate_panel(seed: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None,
                   n_firms: int = 20, n_dates: int = 20,
                   beta: float = 0.002, vendor_beta: float = 0.0,
                   noise: float = RETURN_NOISE,
                   small_share: float = 0.3,
                   start: datetime.date = DEFAULT_START
                   ) -> List[PanelObservation]:
    """
    A balanced panel with ret = firm effect + date effect
    + beta * chatgpt_score + vendor_beta * vendor_score + noise, where
    chatgpt_score is drawn from {-1, 0, 1} and vendor_score is independent
    standard normal.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    dates = _trading_days(start, n_dates).dates
    firm_effects = rng.normal(0.0, 0.002, size=n_firms)
    date_effects = rng.normal(0.0, 0.005, size=n_dates)
    n_small = int(round(n_firms * small_share))
    panel = []
    for i in range(n_firms):
        size = SizeClass.SMALL if i < n_small else SizeClass.NON_SMALL
        for t, date in enumerate(dates):
            score = float(rng.integers(-1, 2))
            vendor = float(rng.normal())
            ret = firm_effects[i] + date_effects[t] + beta * score \
                + vendor_beta * vendor + rng.normal(0.0, noise)
            panel.append(PanelObservation(
                firm_id='F{:03d}'.format(i + 1), date=date,
                ret_next=float(ret), chatgpt_score=score,
                vendor_score=vendor, effective_date=date, n_headlines=1,
                market_cap=100.0 if size is SizeClass.SMALL else 10000.0,
                size_class=size))
    return panel
