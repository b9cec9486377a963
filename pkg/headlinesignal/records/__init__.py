from .base_records import (
    CalendarDay, FirmDaySignal, HeadlineRecord, PanelObservation,
    PortfolioDay, Record, ReturnRecord, SentimentScore)
from .codec import dump_records, guess_format, read_records
from .context import Counters, CurrentContext, count, enter_context

__all__ = [
    'CalendarDay', 'FirmDaySignal', 'HeadlineRecord', 'PanelObservation',
    'PortfolioDay', 'Record', 'ReturnRecord', 'SentimentScore',
    'dump_records', 'guess_format', 'read_records', 'Counters',
    'CurrentContext', 'count', 'enter_context']
