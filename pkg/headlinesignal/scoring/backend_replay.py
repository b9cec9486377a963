"""Backend that replays recorded responses, keyed by prompt hash."""
import json
import logging
from urllib.parse import urlsplit

from ..exceptions import BackendException, ConfigException, ParseError
from .common import ScorerBackend
from .prompt import prompt_hash

logger = logging.getLogger('headlinesignal.scoring.replay')


class ReplayBackend(ScorerBackend):
    """
    Reads a JSONL file of `{"prompt_hash": ..., "raw_response": ...}`
    objects. Pass `replay://path/to/file.jsonl` or the path itself.
    """

    def __init__(self, uri: str):
        super().__init__()
        self.uri = uri
        parsed = urlsplit(uri)
        self.path = parsed.netloc + parsed.path \
            if parsed.scheme == 'replay' else uri
        self.responses = {}
        try:
            fp = open(self.path, encoding='utf-8')
        except OSError as exc:
            raise ConfigException(
                'cannot read recorded responses: {}'.format(exc))
        with fp:
            for line, raw in enumerate(fp, start=1):
                if not raw.strip():
                    continue
                try:
                    obj = json.loads(raw)
                    self.responses[obj['prompt_hash']] = obj['raw_response']
                except (ValueError, KeyError, TypeError) as exc:
                    raise ParseError(
                        'invalid recorded response: {}'.format(exc),
                        line=line)
        logger.info('loaded %d recorded responses from %s',
                    len(self.responses), self.path)

    def _complete(self, prompt, model_id, temperature):
        h = prompt_hash(prompt)
        try:
            return self.responses[h]
        except KeyError:
            raise BackendException('no recorded response for prompt {}'
                                   .format(h[:12]))
