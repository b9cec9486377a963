"""
Reading and writing record files.

Inputs are UTF-8 byte streams in CSV (header row required) or JSONL (one
object per line, blank lines ignored). Line numbers in errors are 1-based
lines of the source, the CSV header being line 1.
"""
import csv
import io
import json
import re
from typing import IO, Iterable, Iterator, List, Type, TypeVar, Union

import pandas as pd

from ..exceptions import DuplicateKeyError, ParseError
from .base_records import Record
from .types import Format

RecordType = TypeVar('RecordType', bound=Record)
Source = Union[bytes, IO[bytes]]
_PARSER_LINE = re.compile(r"line (\d+)")


def _map_format(fmt: Union[Format, str]) -> Format:
    if isinstance(fmt, Format):
        return fmt
    try:
        return Format(str(fmt).lower())
    except ValueError:
        raise ParseError("format must be one of {}".format(
            [f.value for f in Format]), value=fmt)


def decode(source: Source) -> str:
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        text = bytes(data).decode('utf-8')
    except UnicodeDecodeError as exc:
        line = bytes(data)[:exc.start].count(b'\n') + 1
        raise ParseError('stream is not valid UTF-8', line=line)
    # a leading byte order mark is not part of the first column name
    return text[1:] if text.startswith('\ufeff') else text


def read_records(source: Source, record_type: Type[RecordType],
                 fmt: Union[Format, str] = Format.CSV) -> List[RecordType]:
    """
    Parse and validate every row of `source` as `record_type`, keeping the
    input order. Rows repeating a key of `record_type.KEY` are an error.
    """
    fmt = _map_format(fmt)
    text = decode(source)
    rows = _iter_csv(text, record_type) if fmt is Format.CSV \
        else _iter_jsonl(text, record_type)

    retval = []
    seen = {}
    for line, record in rows:
        if record_type.KEY:
            key = record.key()
            if key in seen:
                raise DuplicateKeyError(
                    'line {}: duplicate {} {!r} (first seen on line {})'
                    .format(line, '/'.join(record_type.KEY), key, seen[key]))
            seen[key] = line
        retval.append(record)
    return retval


def _iter_csv(text: str, record_type: Type[RecordType]
              ) -> Iterator[tuple]:
    if not text.strip():
        return
    try:
        frame = pd.read_csv(
            io.StringIO(text), header=None, dtype=str,
            keep_default_na=False, skip_blank_lines=False)
    except pd.errors.ParserError as exc:
        match = _PARSER_LINE.search(str(exc))
        raise ParseError(str(exc).strip(),
                         line=int(match.group(1)) if match else None)
    rows = frame.itertuples(index=False, name=None)
    header = list(next(rows))
    record_type.check_columns(header, line=1)
    if len(set(header)) != len(header):
        raise ParseError('repeated column in header', line=1)
    # blank lines come back as all-missing rows, short rows as partly missing
    for line, row in enumerate(rows, start=2):
        missing = sum(1 for cell in row if pd.isna(cell))
        if missing == len(row):
            continue
        if missing:
            raise ParseError(
                'expected {} cells, got {}'.format(
                    len(header), len(header) - missing),
                line=line)
        yield line, record_type.from_text_row(dict(zip(header, row)), line)


def _iter_jsonl(text: str, record_type: Type[RecordType]
                ) -> Iterator[tuple]:
    for line, raw in enumerate(text.split('\n'), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except ValueError as exc:
            raise ParseError('invalid JSON: {}'.format(exc), line=line)
        yield line, record_type.from_json_row(obj, line)


def dump_records(records: Iterable[Record], record_type: Type[Record],
                 fmt: Union[Format, str] = Format.CSV) -> bytes:
    """Serialize records; output is deterministic for equal input."""
    fmt = _map_format(fmt)
    out = io.StringIO(newline='')
    if fmt is Format.CSV:
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(record_type.columns())
        for record in records:
            writer.writerow(record.to_text_row().values())
    else:
        for record in records:
            out.write(json.dumps(
                record.to_json_row(), ensure_ascii=False,
                separators=(',', ':')))
            out.write('\n')
    return out.getvalue().encode('utf-8')


def guess_format(path: str) -> Format:
    return Format.JSONL if str(path).endswith(('.jsonl', '.json')) \
        else Format.CSV
