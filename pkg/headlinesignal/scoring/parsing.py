import re

from ..exceptions import ResponseParseError
from ..records.base_records import Record
from ..records.fields import EnumField, StringField
from ..records.types import Label, Score

_VERDICT = re.compile(
    r"^[^A-Za-z0-9]*(UNKNOWN|YES|NO)\b[^A-Za-z0-9]*(.*)$", re.IGNORECASE)

LABEL_SCORES = {
    Label.YES: Score.POSITIVE,
    Label.UNKNOWN: Score.NEUTRAL,
    Label.NO: Score.NEGATIVE,
}


class ScorerVerdict(Record):
    label = EnumField(data_type=Label)
    rationale = StringField(required=False)
    raw_response = StringField(non_empty=True)


def parse_response(raw: str) -> ScorerVerdict:
    """
    The first non-empty line must start with YES, NO or UNKNOWN (any case,
    surrounding quotes or markup ignored). The remaining non-empty lines
    form the rationale; a single-line answer keeps the rest of its line.
    """
    if not raw or not raw.strip():
        raise ResponseParseError('empty response', raw=raw)
    lines = [line.strip() for line in raw.splitlines()]
    lines = [line for line in lines if line]
    first, rest = lines[0], lines[1:]
    match = _VERDICT.match(first)
    if match is None:
        raise ResponseParseError(
            'no YES/NO/UNKNOWN verdict in {!r}'.format(first[:80]), raw=raw)
    label = Label(match.group(1).upper())
    if rest:
        rationale = ' '.join(rest)
    else:
        rationale = match.group(2).strip()
    return ScorerVerdict(
        label=label, rationale=rationale or None, raw_response=raw)


def map_label(label: Label) -> int:
    return int(LABEL_SCORES[label])
