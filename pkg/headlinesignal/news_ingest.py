"""
Headline feed parsing, the relevance/novelty filters and near-duplicate
removal.
"""
import datetime
import logging
import re
import unicodedata
from collections import OrderedDict
from typing import Iterable, List, Mapping, Union

from .exceptions import ParseError, RecordException
from .market_data import TradingCalendar
from .records.base_records import HeadlineRecord
from .records.codec import Source, read_records
from .records.context import count
from .records.types import Format, StoryType
from .text_distance import similarity

logger = logging.getLogger('headlinesignal.news_ingest')

REQUIRED_RELEVANCE = 100
KEPT_STORY_TYPES = frozenset((StoryType.FULL_ARTICLE, StoryType.PRESS_RELEASE))
#: categories that only report the day's price move
EXCLUDED_CATEGORIES = frozenset(('stock-gain', 'stock-loss'))
#: a story is novel only if no similar one ran in this many days
MIN_EVENT_SIMILARITY_DAYS = 90
DEFAULT_SIMILARITY_THRESHOLD = 0.6

_WHITESPACE = re.compile(r'\s+')


def parse_headlines(source: Source, fmt: Union[Format, str] = Format.JSONL
                    ) -> List[HeadlineRecord]:
    records = read_records(source, HeadlineRecord, fmt)
    logger.info('parsed %d headlines', len(records))
    count('headlines.parsed', len(records))
    return records


def passes_filters(record: HeadlineRecord) -> bool:
    return record.relevance == REQUIRED_RELEVANCE \
        and record.story_type in KEPT_STORY_TYPES \
        and record.category.strip().lower() not in EXCLUDED_CATEGORIES \
        and record.event_similarity_days > MIN_EVENT_SIMILARITY_DAYS


def filter_headlines(records: Iterable[HeadlineRecord]
                     ) -> List[HeadlineRecord]:
    """
    Keep stories with relevance 100, of type full article or press release,
    outside the stock-gain/stock-loss categories and with more than 90 event
    similarity days.
    """
    records = list(records)
    retval = [r for r in records if passes_filters(r)]
    count('headlines.filtered_out', len(records) - len(retval))
    logger.info('filters kept %d of %d headlines', len(retval), len(records))
    return retval


def normalize_headline(text: str) -> str:
    """NFC, case-folded, whitespace runs collapsed to one space."""
    text = unicodedata.normalize('NFC', text).casefold()
    return _WHITESPACE.sub(' ', text).strip()


def calendar_days(records: Iterable[HeadlineRecord],
                  calendar: TradingCalendar
                  ) -> 'OrderedDict[str, datetime.date]':
    """Local calendar date (exchange timezone) of every story."""
    return OrderedDict(
        (r.story_id, calendar.localize(r.published_at).date())
        for r in records)


def dedup_firm_day(records: Iterable[HeadlineRecord], threshold: float,
                   effective_day: Mapping[str, datetime.date]
                   ) -> List[HeadlineRecord]:
    """
    Drop near-duplicate headlines of the same firm on the same day.

    Within each (firm_id, day) group, taken in (published_at, story_id)
    order, a headline is dropped when its similarity to any headline already
    kept in the group exceeds `threshold`. Kept records come back in input
    order.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ParseError(
            'similarity threshold must be in [0, 1]', field='threshold',
            value=threshold)
    records = list(records)

    groups = OrderedDict()
    for r in records:
        try:
            day = effective_day[r.story_id]
        except KeyError:
            raise RecordException('no day for story {}'.format(r.story_id))
        groups.setdefault((r.firm_id, day), []).append(r)

    kept_ids = set()
    for group in groups.values():
        group.sort(key=lambda r: (r.published_at, r.story_id))
        kept = []
        for r in group:
            text = normalize_headline(r.headline)
            if any(similarity(text, k) > threshold for k in kept):
                logger.debug('dropping %s as near duplicate', r.story_id)
                continue
            kept.append(text)
            kept_ids.add(r.story_id)

    retval = [r for r in records if r.story_id in kept_ids]
    count('headlines.dedup_dropped', len(records) - len(retval))
    return retval
