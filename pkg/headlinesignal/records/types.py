from enum import Enum, IntEnum


class EnumRepr(Enum):
    def __repr__(self):
        return "{}.{}".format(self.__class__.__name__, self.name)


class Exchange(EnumRepr):
    NYSE = 'NYSE'
    AMEX = 'AMEX'
    NASDAQ = 'NASDAQ'
    OTHER = 'OTHER'


#: exchanges that make up the study universe
MAJOR_EXCHANGES = frozenset((Exchange.NYSE, Exchange.AMEX, Exchange.NASDAQ))
#: common stocks
COMMON_SHARE_CODES = frozenset((10, 11))


class SizeClass(EnumRepr):
    SMALL = 'small'
    NON_SMALL = 'non-small'


class StoryType(EnumRepr):
    FULL_ARTICLE = 'full-article'
    PRESS_RELEASE = 'press-release'
    OTHER = 'other'


class Term(EnumRepr):
    SHORT = 'short'
    LONG = 'long'


class Label(EnumRepr):
    YES = 'YES'
    NO = 'NO'
    UNKNOWN = 'UNKNOWN'


class Score(IntEnum):
    NEGATIVE = -1
    NEUTRAL = 0
    POSITIVE = 1


class FixedEffect(EnumRepr):
    FIRM = 'firm'
    DATE = 'date'


class Format(EnumRepr):
    CSV = 'csv'
    JSONL = 'jsonl'


class DedupDay(EnumRepr):
    EFFECTIVE = 'effective'
    CALENDAR = 'calendar'


class ReturnConvention(EnumRepr):
    CLOSE_TO_CLOSE = 'close_to_close'
    OPEN_TO_OPEN = 'open_to_open'


class Weighting(EnumRepr):
    EQUAL = 'equal'
    VALUE = 'value'


class PortfolioRule(EnumRepr):
    SIGN_SPLIT = 'sign-split'
