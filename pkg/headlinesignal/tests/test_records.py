import datetime
import threading
import time
from unittest import TestCase, main

from headlinesignal.exceptions import DuplicateKeyError, ParseError
from headlinesignal.records import (
    CalendarDay, Counters, CurrentContext, HeadlineRecord, ReturnRecord,
    SentimentScore, count, dump_records, enter_context, guess_format,
    read_records)
from headlinesignal.records.context import GlobalContext
from headlinesignal.records.fields import (
    BoolField, FloatField, IntField, TimeField, TimestampField)
from headlinesignal.records.types import Exchange, Format, Label, StoryType

RETURNS_CSV = (
    b'firm_id,date,ret,market_cap,share_code,exchange\n'
    b'F01,2021-10-01,0.0125,1500.5,10,NYSE\n'
    b'F02,2021-10-01,-0.003,,11,NASDAQ\n'
    b'F01,2021-10-04,0.1,1700.0,10,NYSE\n')

HEADLINES_JSONL = (
    b'{"story_id":"S1","firm_id":"ORCL","firm_name":"Oracle",'
    b'"published_at":"2021-10-05T17:30:00-04:00",'
    b'"headline":"Rimini Street Fined $630,000 in Case Against Oracle",'
    b'"relevance":100,"category":"legal","event_similarity_days":120.0,'
    b'"story_type":"full-article","vendor_sentiment":-0.52}\n'
    b'{"story_id":"S2","firm_id":"ACME","firm_name":"Acme",'
    b'"published_at":"2021-10-06T09:00:00+00:00",'
    b'"headline":"Acme wins contract","relevance":100,"category":"corporate",'
    b'"event_similarity_days":365.0,"story_type":"press-release",'
    b'"vendor_sentiment":null}\n')


class TestFields(TestCase):
    def test_intfield(self):
        field = IntField(min_value=0, max_value=100, name='relevance')

        self.assertEqual(field.parse_text(' 42 '), 42)
        self.assertEqual(field.parse_json(3.0), 3)
        self.assertRaises(ParseError, field.parse_json, 3.5)
        self.assertRaises(ParseError, field.parse_json, True)
        self.assertRaises(ParseError, field.parse_text, '101')
        self.assertRaises(ParseError, field.parse_text, 'abc')

    def test_floatfield(self):
        field = FloatField(greater_than=-1.0, name='ret')

        self.assertEqual(field.parse_text('-0.5'), -0.5)
        self.assertEqual(field.to_text(0.1), '0.1')
        self.assertRaises(ParseError, field.parse_text, '-1')
        self.assertRaises(ParseError, field.parse_text, 'nan')
        self.assertRaises(ParseError, field.parse_text, 'inf')

    def test_missing_values(self):
        self.assertIsNone(FloatField(required=False).parse_text(''))
        self.assertIsNone(FloatField(required=False).parse_json(None))
        with self.assertRaises(ParseError) as cm:
            FloatField(name='ret').parse_text('')
        self.assertEqual(cm.exception.field, 'ret')

    def test_timestampfield(self):
        field = TimestampField()

        ts = field.parse_text('2021-10-05T21:30:00Z')
        self.assertEqual(ts.utcoffset(), datetime.timedelta(0))
        self.assertEqual(
            ts, field.parse_text('2021-10-05T17:30:00-04:00'))
        self.assertRaises(ParseError, field.parse_text, '2021-10-05T17:30:00')

    def test_timefield(self):
        field = TimeField()

        self.assertEqual(field.parse_text('13:00'), datetime.time(13, 0))
        self.assertEqual(field.to_text(datetime.time(16, 0)), '16:00')

    def test_boolfield(self):
        field = BoolField()

        self.assertIs(field.parse_text('1'), True)
        self.assertIs(field.parse_text('False'), False)
        self.assertRaises(ParseError, field.parse_json, 1)


class TestRecords(TestCase):
    def test_constructor_validates(self):
        self.assertRaises(ParseError, lambda: ReturnRecord(
            firm_id='F01', date=datetime.date(2021, 10, 1), ret=-1.5,
            share_code=10, exchange=Exchange.NYSE))
        self.assertRaises(ParseError, lambda: ReturnRecord(
            firm_id='F01', date=datetime.date(2021, 10, 1), ret=0.01,
            market_cap=0.0, share_code=10, exchange=Exchange.NYSE))
        self.assertRaises(ParseError, lambda: ReturnRecord(
            firm_id='F01', date=datetime.date(2021, 10, 1), ret=0.01))
        self.assertRaises(TypeError, lambda: ReturnRecord(colour='red'))

    def test_enum_lookup(self):
        score = SentimentScore(story_id='S1', model_id='m', value=1,
                               label='yes')
        self.assertIs(score.label, Label.YES)

    def test_replace_and_key(self):
        record = ReturnRecord(
            firm_id='F01', date='2021-10-01', ret=0.01, share_code=10,
            exchange='nyse')
        other = record.replace(ret=0.02)

        self.assertEqual(record.key(), ('F01', datetime.date(2021, 10, 1)))
        self.assertEqual(other.ret, 0.02)
        self.assertEqual(record.ret, 0.01)
        self.assertNotEqual(record, other)


class TestCodec(TestCase):
    def test_csv_round_trip(self):
        records = read_records(RETURNS_CSV, ReturnRecord, Format.CSV)

        self.assertEqual(len(records), 3)
        self.assertEqual(records[0].ret, 0.0125)
        self.assertIsNone(records[1].market_cap)
        self.assertIs(records[1].exchange, Exchange.NASDAQ)
        self.assertEqual(
            dump_records(records, ReturnRecord, Format.CSV), RETURNS_CSV)

    def test_jsonl_round_trip(self):
        records = read_records(HEADLINES_JSONL, HeadlineRecord, 'jsonl')

        self.assertEqual([r.story_id for r in records], ['S1', 'S2'])
        self.assertEqual(records[0].vendor_sentiment, -0.52)
        self.assertIs(records[1].story_type, StoryType.PRESS_RELEASE)
        self.assertEqual(
            dump_records(records, HeadlineRecord, Format.JSONL),
            HEADLINES_JSONL)

    def test_empty_streams(self):
        header = b'firm_id,date,ret,market_cap,share_code,exchange\n'
        self.assertEqual(read_records(header, ReturnRecord), [])
        self.assertEqual(read_records(b'', ReturnRecord), [])
        self.assertEqual(read_records(b'\n\n', HeadlineRecord, 'jsonl'), [])

    def test_byte_order_mark(self):
        records = read_records(b'\xef\xbb\xbf' + RETURNS_CSV, ReturnRecord)
        self.assertEqual(len(records), 3)

    def test_error_names_line_and_field(self):
        data = RETURNS_CSV.replace(b'-0.003', b'-1.5')
        with self.assertRaises(ParseError) as cm:
            read_records(data, ReturnRecord)
        self.assertEqual(cm.exception.line, 3)
        self.assertEqual(cm.exception.field, 'ret')

    def test_jsonl_error_line(self):
        data = HEADLINES_JSONL.replace(b'"relevance":100,"category":"c',
                                       b'"relevance":101,"category":"c')
        with self.assertRaises(ParseError) as cm:
            read_records(data, HeadlineRecord, Format.JSONL)
        self.assertEqual(cm.exception.line, 2)
        self.assertEqual(cm.exception.field, 'relevance')

        with self.assertRaises(ParseError) as cm:
            read_records(HEADLINES_JSONL + b'{not json\n', HeadlineRecord,
                         Format.JSONL)
        self.assertEqual(cm.exception.line, 3)

    def test_invalid_utf8(self):
        data = RETURNS_CSV.replace(b'F02', b'F\xff2')
        with self.assertRaises(ParseError) as cm:
            read_records(data, ReturnRecord)
        self.assertEqual(cm.exception.line, 3)

    def test_header_problems(self):
        self.assertRaises(ParseError, read_records,
                          b'firm_id,date,ret\nF01,2021-10-01,0.1\n',
                          ReturnRecord)
        self.assertRaises(
            ParseError, read_records,
            RETURNS_CSV.replace(b'exchange\n', b'exchange,colour\n', 1),
            ReturnRecord)

    def test_ragged_rows(self):
        short = RETURNS_CSV.replace(b'F02,2021-10-01,-0.003,,11,NASDAQ',
                                    b'F02,2021-10-01,-0.003')
        with self.assertRaises(ParseError) as cm:
            read_records(short, ReturnRecord)
        self.assertEqual(cm.exception.line, 3)

        long = RETURNS_CSV.replace(b'NASDAQ', b'NASDAQ,extra')
        with self.assertRaises(ParseError) as cm:
            read_records(long, ReturnRecord)
        self.assertEqual(cm.exception.line, 3)

    def test_blank_lines_keep_numbering(self):
        data = RETURNS_CSV.replace(b'NASDAQ\n', b'NASDAQ\n\n')
        self.assertEqual(len(read_records(data, ReturnRecord)), 3)
        with self.assertRaises(ParseError) as cm:
            read_records(data.replace(b'0.1,', b'-2,'), ReturnRecord)
        self.assertEqual(cm.exception.line, 5)
        self.assertEqual(cm.exception.field, 'ret')

    def test_duplicate_key(self):
        data = RETURNS_CSV + b'F02,2021-10-01,0.01,,11,NASDAQ\n'
        self.assertRaises(DuplicateKeyError, read_records, data,
                          ReturnRecord)

    def test_calendar_day(self):
        days = read_records(
            b'{"date":"2021-11-26","close":"13:00",'
            b'"timezone":"America/New_York"}\n{"date":"2021-11-29"}\n',
            CalendarDay, Format.JSONL)

        self.assertEqual(days[0].close, datetime.time(13, 0))
        self.assertEqual(days[0].timezone.zone, 'America/New_York')
        self.assertIsNone(days[1].close)

    def test_guess_format(self):
        self.assertIs(guess_format('a/b/headlines.jsonl'), Format.JSONL)
        self.assertIs(guess_format('returns.csv'), Format.CSV)


class TestContext(TestCase):
    def test_nested_access(self):
        CurrentContext['test_nested_access'] = 1

        with enter_context(test_nested_access=2):
            self.assertEqual(2, CurrentContext['test_nested_access'])

            with enter_context():
                self.assertEqual(2, CurrentContext['test_nested_access'])
                CurrentContext['test_nested_access'] = 3
                self.assertEqual(3, CurrentContext['test_nested_access'])

            self.assertEqual(2, CurrentContext['test_nested_access'])

        self.assertEqual(1, CurrentContext['test_nested_access'])

    def test_nested_delete(self):
        CurrentContext['test_nested_delete'] = 1

        with enter_context():
            del CurrentContext['test_nested_delete']
            self.assertRaises(
                KeyError, lambda: CurrentContext['test_nested_delete'])
            self.assertIsNone(CurrentContext.get('test_nested_delete'))

        self.assertEqual(1, CurrentContext['test_nested_delete'])

    def test_threads(self):
        GlobalContext['test_threads'] = 1

        def test_fun(arg):
            self.assertEqual(1, CurrentContext['test_threads'])
            CurrentContext['test_threads'] = arg
            time.sleep(0.01)
            self.assertEqual(arg, CurrentContext['test_threads'])

        threads = [threading.Thread(target=test_fun, args=(n,))
                   for n in (2, 3, 4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        self.assertEqual(1, GlobalContext['test_threads'])


class TestCounters(TestCase):
    def test_count_in_context(self):
        counters = Counters()

        count('outside.any.context')
        with enter_context(counters=counters):
            count('rows')
            count('rows', 4)
            count('dropped', 0)

        self.assertEqual(counters['rows'], 5)
        self.assertEqual(counters.as_dict(), {'dropped': 0, 'rows': 5})

    def test_worker_threads_do_not_inherit(self):
        counters = Counters()

        with enter_context(counters=counters):
            worker = threading.Thread(target=count, args=('rows',))
            worker.start()
            worker.join()

        self.assertEqual(counters['rows'], 0)

    def test_update(self):
        a, b = Counters(), Counters()
        a.add('x', 2)
        b.add('x', 3)
        b.add('y')
        a.update(b)

        self.assertEqual(a.items(), [('x', 5), ('y', 1)])


if __name__ == '__main__':
    main()
