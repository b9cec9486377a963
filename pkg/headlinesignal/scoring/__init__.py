"""
Headline scoring with a language model.

Backends are chosen by uri:

- `mock://` answers offline from a keyword lexicon
  (`mock://?lexicon=/path/to/lexicon.json` for a custom one),
- `replay://path/to/responses.jsonl` replays recorded responses,
- `https://...` posts chat-completion requests.
"""
from urllib.parse import urlsplit

from ..exceptions import ConfigException
from ._scoring import Scorer, score_headline
from .backend_http import HttpChatBackend, TokenBucket
from .backend_mock import LexiconBackend
from .backend_replay import ReplayBackend
from .cache import ScoreCache, cache_key
from .common import ScorerBackend
from .parsing import ScorerVerdict, map_label, parse_response
from .prompt import PromptRequest, build_prompt, load_template, prompt_hash


def create_backend(uri: str, **options) -> ScorerBackend:
    scheme = urlsplit(uri).scheme
    if scheme == 'mock':
        return LexiconBackend(uri)
    if scheme == 'replay':
        return ReplayBackend(uri)
    if scheme in ('http', 'https'):
        return HttpChatBackend(uri, **options)
    raise ConfigException('unknown scorer backend: {!r}'.format(uri))


__all__ = [
    'Scorer', 'score_headline', 'create_backend', 'ScorerBackend',
    'HttpChatBackend', 'TokenBucket', 'LexiconBackend', 'ReplayBackend',
    'ScoreCache', 'cache_key', 'ScorerVerdict', 'map_label',
    'parse_response', 'PromptRequest', 'build_prompt', 'load_template',
    'prompt_hash']
