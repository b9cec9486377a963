"""Record classes: one validated row of an input or artifact file."""
from collections import OrderedDict
from typing import Any, List, Mapping, Optional, Type, TypeVar

from ..exceptions import ParseError
from .fields import (
    BoolField, DateField, EnumField, Field, FloatField, IntField,
    StringField, TimeField, TimestampField, ZoneField)
from .types import Exchange, Label, SizeClass, StoryType


class FieldContainer(type):
    def __new__(cls, name, bases, classdict):
        retval = super().__new__(cls, name, bases, classdict)
        retval.FIELDS = OrderedDict()
        for supercls in reversed(bases):
            if hasattr(supercls, 'FIELDS'):
                retval.FIELDS.update(supercls.FIELDS.items())
        retval.FIELDS.update(
            (k, v) for (k, v) in classdict.items() if isinstance(v, Field))
        for k in retval.KEY:
            if k not in retval.FIELDS:
                raise TypeError("Key column {} is not a field of {}".format(
                    k, name))
        return retval


RecordType = TypeVar('RecordType', bound='Record')


class Record(metaclass=FieldContainer):
    #: names of the columns that are unique within a dataset
    KEY = ()

    def __init__(self, *args, **kwargs):
        self._values = {}
        if len(args) > len(self.FIELDS):
            raise TypeError("{} takes at most {} positional values".format(
                self.__class__.__name__, len(self.FIELDS)))
        for (name, field), arg in zip(self.FIELDS.items(), args):
            setattr(self, name, arg)
        for name, arg in kwargs.items():
            if name not in self.FIELDS:
                raise TypeError("{} has no field {!r}".format(
                    self.__class__.__name__, name))
            setattr(self, name, arg)
        self.check_required()

    def check_required(self, line: Optional[int] = None):
        for name, field in self.FIELDS.items():
            if field.required and field not in self._values:
                raise ParseError('value is required', line=line, field=name)

    @classmethod
    def columns(cls) -> List[str]:
        return list(cls.FIELDS)

    def key(self) -> tuple:
        return tuple(getattr(self, k) for k in self.KEY)

    def as_dict(self):
        return OrderedDict(self.items())

    def items(self):
        return [
            (name, getattr(self, name))
            for (name, field) in self.FIELDS.items()]

    def replace(self: RecordType, **kwargs) -> RecordType:
        values = dict(self.items())
        values.update(kwargs)
        return self.__class__(**values)

    def __eq__(self, other):
        if other.__class__ is not self.__class__:
            return NotImplemented
        return self.items() == other.items()

    __hash__ = None

    def __repr__(self):
        return "{}({})".format(
            self.__class__.__name__,
            ", ".join(
                "{}={}".format(k, self.FIELDS[k].represent(v))
                for (k, v) in self.items() if v is not None))

    @classmethod
    def check_columns(cls, names, line: Optional[int] = None):
        unknown = [n for n in names if n not in cls.FIELDS]
        if unknown:
            raise ParseError(
                'unknown column(s) {}'.format(', '.join(map(repr, unknown))),
                line=line)
        missing = [
            n for n, f in cls.FIELDS.items() if f.required and n not in names]
        if missing:
            raise ParseError(
                'missing column(s) {}'.format(', '.join(map(repr, missing))),
                line=line)

    @classmethod
    def _build(cls: Type[RecordType], row: Mapping[str, Any], line, parse
               ) -> RecordType:
        cls.check_columns(list(row), line=line)
        retval = cls.__new__(cls)
        retval._values = {}
        for name, field in cls.FIELDS.items():
            try:
                value = parse(field, row.get(name))
            except ParseError as exc:
                raise ParseError(
                    exc.reason, line=line,
                    field=name, value=exc.value)
            if value is not None:
                retval._values[field] = value
        return retval

    @classmethod
    def from_text_row(cls: Type[RecordType], row: Mapping[str, str],
                      line: Optional[int] = None) -> RecordType:
        return cls._build(row, line, lambda f, v: f.parse_text(v))

    @classmethod
    def from_json_row(cls: Type[RecordType], row: Mapping[str, Any],
                      line: Optional[int] = None) -> RecordType:
        if not isinstance(row, Mapping):
            raise ParseError('expected a JSON object', line=line)
        return cls._build(row, line, lambda f, v: f.parse_json(v))

    def to_text_row(self) -> 'OrderedDict[str, str]':
        return OrderedDict(
            (name, '' if v is None else self.FIELDS[name].to_text(v))
            for name, v in self.items())

    def to_json_row(self) -> 'OrderedDict[str, Any]':
        return OrderedDict(
            (name, None if v is None else self.FIELDS[name].to_json(v))
            for name, v in self.items())


class ReturnRecord(Record):
    """One CRSP-style daily stock return."""
    KEY = ('firm_id', 'date')

    firm_id = StringField(non_empty=True)
    date = DateField()
    ret = FloatField(greater_than=-1.0)
    market_cap = FloatField(required=False, greater_than=0.0)
    share_code = IntField()
    exchange = EnumField(data_type=Exchange)


class HeadlineRecord(Record):
    """One vendor headline with its relevance and novelty tags."""
    KEY = ('story_id',)

    story_id = StringField(non_empty=True)
    firm_id = StringField(non_empty=True)
    firm_name = StringField(non_empty=True)
    published_at = TimestampField()
    headline = StringField(non_empty=True)
    relevance = IntField(min_value=0, max_value=100)
    category = StringField()
    event_similarity_days = FloatField(min_value=0.0)
    story_type = EnumField(data_type=StoryType)
    # the vendor's own sentiment, kept as an opaque regressor
    vendor_sentiment = FloatField(required=False)


class CalendarDay(Record):
    KEY = ('date',)

    date = DateField()
    close = TimeField(required=False)
    timezone = ZoneField(required=False)


class SentimentScore(Record):
    KEY = ('story_id',)

    story_id = StringField(non_empty=True)
    model_id = StringField(non_empty=True)
    value = IntField(choices=(-1, 0, 1))
    label = EnumField(data_type=Label, required=False)
    rationale = StringField(required=False)
    # set when an unparseable response was scored as UNKNOWN
    fallback = BoolField(required=False)


class FirmDaySignal(Record):
    KEY = ('firm_id', 'effective_date')

    firm_id = StringField(non_empty=True)
    effective_date = DateField()
    chatgpt_score = FloatField(min_value=-1.0, max_value=1.0)
    vendor_score = FloatField(required=False)
    n_headlines = IntField(min_value=1)


class PanelObservation(Record):
    """A signal paired with the return of the session it predicts."""
    KEY = ('firm_id', 'date')

    firm_id = StringField(non_empty=True)
    date = DateField()
    ret_next = FloatField(greater_than=-1.0)
    chatgpt_score = FloatField(min_value=-1.0, max_value=1.0)
    vendor_score = FloatField(required=False)
    effective_date = DateField()
    n_headlines = IntField(min_value=1)
    market_cap = FloatField(required=False, greater_than=0.0)
    size_class = EnumField(data_type=SizeClass, required=False)


class PortfolioDay(Record):
    KEY = ('date',)

    date = DateField()
    long_return = FloatField()
    short_return = FloatField()
    long_short_return = FloatField()
    n_long = IntField(min_value=0)
    n_short = IntField(min_value=0)
    cum_long = FloatField()
    cum_short = FloatField()
    cum_long_short = FloatField()
    # 'long-empty', 'short-empty' or both, '+'-joined
    flag = StringField(required=False)
