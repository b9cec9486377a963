import datetime
from unittest import TestCase, main

import pytz

from headlinesignal.exceptions import (
    DuplicateKeyError, ParseError, RecordException)
from headlinesignal.market_data import weekday_calendar
from headlinesignal.news_ingest import (
    calendar_days, dedup_firm_day, filter_headlines, normalize_headline,
    parse_headlines)
from headlinesignal.records import Counters, HeadlineRecord, enter_context
from headlinesignal.records.types import StoryType
from headlinesignal.text_distance import similarity

NEW_YORK = pytz.timezone('America/New_York')
DAY = datetime.date(2021, 10, 5)


def at(hour, minute=0, day=DAY):
    return NEW_YORK.localize(datetime.datetime.combine(
        day, datetime.time(hour, minute)))


def headline(story_id, text='Acme wins contract', firm_id='ACME',
             published_at=None, **kwargs):
    values = dict(
        story_id=story_id, firm_id=firm_id, firm_name='Acme',
        published_at=published_at or at(9), headline=text, relevance=100,
        category='corporate', event_similarity_days=120.0,
        story_type=StoryType.FULL_ARTICLE)
    values.update(kwargs)
    return HeadlineRecord(**values)


def same_day(records, day=DAY):
    return {r.story_id: day for r in records}


def ids(records):
    return [r.story_id for r in records]


class TestParseHeadlines(TestCase):
    def test_empty(self):
        self.assertEqual(parse_headlines(b''), [])

    def test_counts_and_errors(self):
        line = (b'{"story_id":"S1","firm_id":"A","firm_name":"Acme",'
                b'"published_at":"2021-10-05T09:00:00-04:00",'
                b'"headline":"Acme wins contract","relevance":100,'
                b'"category":"corporate","event_similarity_days":120,'
                b'"story_type":"full-article"}\n')
        counters = Counters()
        with enter_context(counters=counters):
            records = parse_headlines(line)
        self.assertEqual(ids(records), ['S1'])
        self.assertIsNone(records[0].vendor_sentiment)
        self.assertEqual(counters['headlines.parsed'], 1)

        self.assertRaises(ParseError, parse_headlines,
                          line.replace(b'100', b'101'))
        self.assertRaises(ParseError, parse_headlines,
                          line.replace(b'"Acme wins contract"', b'""'))
        self.assertRaises(DuplicateKeyError, parse_headlines, line + line)


class TestFilters(TestCase):
    def test_each_filter(self):
        records = [
            headline('keep'),
            headline('relevance', relevance=99),
            headline('gain', category='stock-gain'),
            headline('loss', category=' Stock-Loss'),
            headline('similar', event_similarity_days=90.0),
            headline('other', story_type=StoryType.OTHER),
            headline('release', story_type=StoryType.PRESS_RELEASE,
                     event_similarity_days=90.5),
        ]
        counters = Counters()
        with enter_context(counters=counters):
            kept = filter_headlines(records)

        self.assertEqual(ids(kept), ['keep', 'release'])
        self.assertEqual(filter_headlines(kept), kept)
        self.assertEqual(counters['headlines.filtered_out'], 5)


class TestNormalize(TestCase):
    def test_normalize_headline(self):
        self.assertEqual(normalize_headline('  ACME\tWins \n Contract '),
                         'acme wins contract')
        self.assertEqual(normalize_headline('Café'), 'café')
        self.assertEqual(normalize_headline('Straße'), 'strasse')


class TestDedup(TestCase):
    def test_exact_duplicates(self):
        records = [
            headline('S1'),
            headline('S2', published_at=at(9, 5)),
            headline('S3', firm_id='BETA', published_at=at(9, 5)),
        ]
        kept = dedup_firm_day(records, 0.6, same_day(records))

        self.assertEqual(ids(kept), ['S1', 'S3'])

    def test_different_days(self):
        later = DAY + datetime.timedelta(days=1)
        records = [headline('S1'),
                   headline('S2', published_at=at(9, day=later))]
        days = {'S1': DAY, 'S2': later}

        self.assertEqual(ids(dedup_firm_day(records, 0.6, days)),
                         ['S1', 'S2'])

    def test_near_duplicates_around_threshold(self):
        texts = {
            'S1': 'abcdefghij',
            'S2': 'abcdefwxyz',   # 4 edits from S1: similarity 0.6
            'S3': 'abcdefgxyz',   # 3 edits from S1: similarity 0.7
            'S4': 'ACME   Beats earnings estimate',
            'S5': 'acme beats earnings estimates',
        }
        records = [
            headline(story_id, text=text, published_at=at(10, i))
            for i, (story_id, text) in enumerate(sorted(texts.items()))]
        self.assertEqual(similarity('abcdefghij', 'abcdefwxyz'), 0.6)
        self.assertAlmostEqual(similarity('abcdefghij', 'abcdefgxyz'), 0.7)

        counters = Counters()
        with enter_context(counters=counters):
            kept = dedup_firm_day(records, 0.6, same_day(records))

        self.assertEqual(ids(kept), ['S1', 'S2', 'S4'])
        self.assertEqual(counters['headlines.dedup_dropped'], 2)
        self.assertEqual(
            ids(dedup_firm_day(kept, 0.6, same_day(kept))), ids(kept))

    def test_earliest_is_kept(self):
        records = [
            headline('S9', published_at=at(11)),
            headline('S1', published_at=at(10)),
            headline('S5', published_at=at(10)),
        ]
        kept = dedup_firm_day(records, 0.6, same_day(records))

        self.assertEqual(ids(kept), ['S1'])

    def test_output_keeps_input_order(self):
        records = [
            headline('S3', text='Acme raises dividend', published_at=at(12)),
            headline('S1', text='Acme names new auditor after a lengthy '
                     'search by the board', published_at=at(8)),
            headline('S2', text='Acme raises dividend', published_at=at(9)),
        ]
        kept = dedup_firm_day(records, 0.6, same_day(records))

        self.assertEqual(ids(kept), ['S1', 'S2'])

    def test_threshold_limits(self):
        records = [
            headline('S1'),
            headline('S2', published_at=at(9, 1)),
            headline('S3', text='Acme wins a lawsuit', published_at=at(9, 2)),
        ]
        days = same_day(records)

        self.assertEqual(ids(dedup_firm_day(records, 1.0, days)),
                         ['S1', 'S2', 'S3'])
        self.assertEqual(ids(dedup_firm_day(records, 0.0, days)), ['S1'])
        self.assertRaises(ParseError, dedup_firm_day, records, 1.5, days)
        self.assertRaises(ParseError, dedup_firm_day, records, -0.1, days)
        self.assertRaises(RecordException, dedup_firm_day, records, 0.6, {})


class TestCalendarDays(TestCase):
    def test_local_dates(self):
        calendar = weekday_calendar(DAY, DAY + datetime.timedelta(days=7))
        records = [
            headline('S1', published_at=at(23, 30)),
            headline('S2', published_at=datetime.datetime(
                2021, 10, 6, 2, 0, tzinfo=datetime.timezone.utc)),
        ]

        self.assertEqual(list(calendar_days(records, calendar).items()),
                         [('S1', DAY), ('S2', DAY)])


if __name__ == '__main__':
    main()
