"""
Common base of the scorer backends.
"""
import logging
import threading

logger = logging.getLogger('headlinesignal.scoring.backend')


class ScorerBackend:
    """
    A backend turns a rendered prompt into the raw text of a reply.
    Subclasses implement `_complete`; `complete` counts invocations so
    cache behaviour can be checked against `calls`.
    """
    uri = None

    def __init__(self):
        self._calls_lock = threading.Lock()
        self.calls = 0

    def complete(self, prompt: str, model_id: str, temperature: float
                 ) -> str:
        with self._calls_lock:
            self.calls += 1
        logger.debug('> %s %s (%d chars)', self.__class__.__name__,
                     model_id, len(prompt))
        raw = self._complete(prompt, model_id, temperature)
        logger.debug('< %r', raw[:120])
        return raw

    def _complete(self, prompt: str, model_id: str, temperature: float
                  ) -> str:
        raise NotImplementedError  # pragma: no coverage

    def close(self):
        """Release connections, if any."""

    def __repr__(self):
        return '{}({!r})'.format(self.__class__.__name__, self.uri)
