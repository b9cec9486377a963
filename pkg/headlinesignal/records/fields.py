"""
Column descriptors for records.

A field converts one column between its text (CSV cell), JSON and Python
representations and validates the Python value. Fields are descriptors:
the value lives in the owning record's `_values`.
"""
import datetime
import math
from enum import Enum
from typing import Any, Optional

import pytz

from ..exceptions import ParseError


class Field:
    REPR_FORMAT = "{!r}"
    DATA_TYPE = None

    def __init__(self, required=True, data_type=None, name=None):
        self.required = required
        self.data_type = data_type or self.DATA_TYPE
        self.name = name

    def __set_name__(self, owner, name):
        if self.name is None:
            self.name = name

    def from_text(self, v: str) -> Any:
        return self.coerce(v)

    def to_text(self, v: Any) -> str:
        return str(v)

    def from_json(self, v: Any) -> Any:
        return self.coerce(v)

    def to_json(self, v: Any) -> Any:
        return v

    def parse_text(self, v: Optional[str]) -> Any:
        """Parse a CSV cell; an empty cell is a missing value."""
        if v is None or v == '':
            return self._missing()
        try:
            value = self.from_text(v)
        except ParseError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ParseError(
                'cannot parse {!r}: {}'.format(v, exc), field=self.name,
                value=v)
        self.validate(value)
        return value

    def parse_json(self, v: Any) -> Any:
        if v is None:
            return self._missing()
        try:
            value = self.from_json(v)
        except ParseError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ParseError(
                'cannot parse {!r}: {}'.format(v, exc), field=self.name,
                value=v)
        self.validate(value)
        return value

    def _missing(self):
        if self.required:
            raise ParseError('value is required', field=self.name)
        return None

    def coerce(self, data: Any) -> Any:
        if self.data_type and not isinstance(data, self.data_type):
            return self.data_type(data)
        return data

    def validate(self, data: Any) -> None:
        pass

    def represent(self, data: Any) -> str:
        return self.REPR_FORMAT.format(data)

    def __set__(self, instance, value: Any):
        if value is None:
            instance._values.pop(self, None)
            return
        v = self.coerce(value)
        self.validate(v)
        instance._values[self] = v

    def __delete__(self, instance):
        del instance._values[self]

    def __get__(self, instance, objtype=None):
        if instance is None:
            return self
        return instance._values.get(self, None)


class StringField(Field):
    DATA_TYPE = str

    def __init__(self, *args, non_empty=False, **kwargs):
        self.non_empty = non_empty
        super().__init__(*args, **kwargs)

    def parse_text(self, v):
        if v == '' and self.non_empty:
            raise ParseError('must not be empty', field=self.name)
        return super().parse_text(v)

    def validate(self, data: str) -> None:
        if self.non_empty and not data.strip():
            raise ParseError('must not be empty', field=self.name, value=data)


class IntField(Field):
    DATA_TYPE = int

    def __init__(self, *args, min_value=None, max_value=None, choices=None,
                 **kwargs):
        self.min_value = min_value
        self.max_value = max_value
        self.choices = frozenset(choices) if choices is not None else None
        super().__init__(*args, **kwargs)

    def from_text(self, v: str) -> int:
        return int(v.strip())

    def coerce(self, data: Any) -> int:
        if isinstance(data, bool):
            raise ParseError('boolean is not an integer', field=self.name)
        if isinstance(data, float):
            if not data.is_integer():
                raise ParseError(
                    'not an integer: {!r}'.format(data), field=self.name)
            return int(data)
        return super().coerce(data)

    def validate(self, data: int) -> None:
        if self.min_value is not None and data < self.min_value:
            raise ParseError(
                'must be >= {}'.format(self.min_value), field=self.name,
                value=data)
        if self.max_value is not None and data > self.max_value:
            raise ParseError(
                'must be <= {}'.format(self.max_value), field=self.name,
                value=data)
        if self.choices is not None and data not in self.choices:
            raise ParseError(
                'must be one of {}'.format(sorted(self.choices)),
                field=self.name, value=data)


class FloatField(Field):
    DATA_TYPE = float

    def __init__(self, *args, greater_than=None, min_value=None,
                 max_value=None, choices=None, **kwargs):
        self.greater_than = greater_than
        self.min_value = min_value
        self.max_value = max_value
        self.choices = frozenset(choices) if choices is not None else None
        super().__init__(*args, **kwargs)

    def from_text(self, v: str) -> float:
        return float(v.strip())

    def to_text(self, v: float) -> str:
        return repr(float(v))

    def coerce(self, data: Any) -> float:
        if isinstance(data, bool):
            raise ParseError('boolean is not a number', field=self.name)
        return float(data)

    def validate(self, data: float) -> None:
        if not math.isfinite(data):
            raise ParseError('must be finite', field=self.name, value=data)
        if self.greater_than is not None and not data > self.greater_than:
            raise ParseError(
                'must be > {}'.format(self.greater_than), field=self.name,
                value=data)
        if self.min_value is not None and data < self.min_value:
            raise ParseError(
                'must be >= {}'.format(self.min_value), field=self.name,
                value=data)
        if self.max_value is not None and data > self.max_value:
            raise ParseError(
                'must be <= {}'.format(self.max_value), field=self.name,
                value=data)
        if self.choices is not None and data not in self.choices:
            raise ParseError(
                'must be one of {}'.format(sorted(self.choices)),
                field=self.name, value=data)


class DateField(Field):
    DATA_TYPE = datetime.date

    def from_text(self, v: str) -> datetime.date:
        return datetime.date.fromisoformat(v.strip())

    def to_text(self, v: datetime.date) -> str:
        return v.isoformat()

    def to_json(self, v: datetime.date) -> str:
        return v.isoformat()

    def from_json(self, v: Any) -> datetime.date:
        return self.from_text(v)

    def coerce(self, data: Any) -> datetime.date:
        if isinstance(data, datetime.datetime):
            raise ParseError(
                'expected a date, got a timestamp', field=self.name)
        if isinstance(data, str):
            return self.from_text(data)
        return data


class TimestampField(Field):
    """An ISO-8601 timestamp that must carry a UTC offset."""
    DATA_TYPE = datetime.datetime

    def from_text(self, v: str) -> datetime.datetime:
        v = v.strip()
        if v.endswith('Z'):
            v = v[:-1] + '+00:00'
        return self.coerce(datetime.datetime.fromisoformat(v))

    def to_text(self, v: datetime.datetime) -> str:
        return v.isoformat()

    def to_json(self, v: datetime.datetime) -> str:
        return v.isoformat()

    def from_json(self, v: Any) -> datetime.datetime:
        return self.from_text(v)

    def coerce(self, data: Any) -> datetime.datetime:
        if isinstance(data, str):
            return self.from_text(data)
        if data.tzinfo is None or data.utcoffset() is None:
            raise ParseError(
                'timestamp needs a UTC offset', field=self.name, value=data)
        return data


class EnumField(Field):
    """Stores an `Enum` member; the wire value is the member's value."""

    def __init__(self, *args, **kwargs):
        if 'data_type' not in kwargs:
            raise TypeError("Must specify data_type")
        super().__init__(*args, **kwargs)
        self._lookup = {}
        for member in self.data_type:
            self._lookup[str(member.value).lower()] = member
            self._lookup[member.name.lower()] = member
            self._lookup[member.name.lower().replace('_', '')] = member

    def from_text(self, v: str) -> Enum:
        return self.coerce(v.strip())

    def to_text(self, v: Enum) -> str:
        return str(v.value)

    def to_json(self, v: Enum) -> Any:
        return v.value

    def coerce(self, data: Any) -> Enum:
        if isinstance(data, self.data_type):
            return data
        key = str(data).lower()
        if key not in self._lookup:
            raise ParseError(
                'unknown {} {!r}'.format(self.data_type.__name__, data),
                field=self.name, value=data)
        return self._lookup[key]

    def represent(self, data: Enum) -> str:
        return repr(data)


class ZoneField(Field):
    """IANA timezone name."""

    def coerce(self, data: Any):
        if isinstance(data, datetime.tzinfo):
            return data
        try:
            return pytz.timezone(str(data))
        except pytz.UnknownTimeZoneError:
            raise ParseError(
                'unknown timezone {!r}'.format(data), field=self.name,
                value=data)

    def to_text(self, v) -> str:
        return v.zone

    def to_json(self, v) -> str:
        return v.zone


class TimeField(Field):
    """Wall-clock time of day, `HH:MM` or `HH:MM:SS`."""
    DATA_TYPE = datetime.time

    def from_text(self, v: str) -> datetime.time:
        return datetime.time.fromisoformat(v.strip())

    def from_json(self, v: Any) -> datetime.time:
        return self.from_text(v)

    def to_text(self, v: datetime.time) -> str:
        return v.strftime('%H:%M') if not v.second else v.isoformat()

    def to_json(self, v: datetime.time) -> str:
        return self.to_text(v)

    def coerce(self, data: Any) -> datetime.time:
        if isinstance(data, str):
            return self.from_text(data)
        return data


class BoolField(Field):
    DATA_TYPE = bool
    _TEXT = {'true': True, '1': True, 'false': False, '0': False}

    def from_text(self, v: str) -> bool:
        return self._TEXT[v.strip().lower()]

    def to_text(self, v: bool) -> str:
        return 'true' if v else 'false'

    def coerce(self, data: Any) -> bool:
        if isinstance(data, bool):
            return data
        if isinstance(data, str):
            return self.from_text(data)
        raise ParseError('not a boolean: {!r}'.format(data), field=self.name)
