"""
Offline backend: answers from a signed keyword lexicon.

The headline is read back from the `Headline:` line of the prompt; each
positive word scores +1 and each negative word -1. A positive total answers
YES, a negative one NO, zero UNKNOWN. Same prompt, same answer.
"""
import json
import pkgutil
import re
from typing import Iterable, Optional
from urllib.parse import parse_qs, urlsplit

from ..exceptions import ConfigException
from .common import ScorerBackend
from .signals import LEXICON_RESOURCE

_WORD = re.compile(r"[a-z]+(?:'[a-z]+)?")


class LexiconBackend(ScorerBackend):

    def __init__(self, uri: str = 'mock://',
                 positive: Optional[Iterable[str]] = None,
                 negative: Optional[Iterable[str]] = None):
        super().__init__()
        self.uri = uri
        lexicon_path = parse_qs(urlsplit(uri).query).get('lexicon', [None])[0]
        if lexicon_path:
            try:
                with open(lexicon_path, encoding='utf-8') as fp:
                    lexicon = json.load(fp)
            except (OSError, ValueError) as exc:
                raise ConfigException(
                    'cannot load lexicon {}: {}'.format(lexicon_path, exc))
        else:
            lexicon = json.loads(
                pkgutil.get_data(__package__, LEXICON_RESOURCE))
        try:
            self.positive = frozenset(
                w.lower() for w in (positive or lexicon['positive']))
            self.negative = frozenset(
                w.lower() for w in (negative or lexicon['negative']))
        except (KeyError, TypeError, AttributeError):
            raise ConfigException(
                'lexicon needs "positive" and "negative" word lists')

    @staticmethod
    def headline_of(prompt: str) -> str:
        return prompt.rsplit('Headline:', 1)[-1].strip()

    def _complete(self, prompt, model_id, temperature):
        words = _WORD.findall(self.headline_of(prompt).lower())
        good = sorted({w for w in words if w in self.positive})
        bad = sorted({w for w in words if w in self.negative})
        total = sum(w in self.positive for w in words) \
            - sum(w in self.negative for w in words)
        if total > 0:
            return 'YES\n\nThe headline signals {} for the company.'.format(
                ', '.join(good))
        if total < 0:
            return 'NO\n\nThe headline signals {} for the company.'.format(
                ', '.join(bad))
        return 'UNKNOWN\n\nThe headline carries no clear signal.'
