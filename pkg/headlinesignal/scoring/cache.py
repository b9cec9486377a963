"""
Append-only response cache.

One JSON object per line: key, model_id, prompt_hash, raw_response, label,
timestamp. A key present in the cache is never sent to a backend again.
"""
import datetime
import json
import logging
import os
import threading
from typing import Callable, Dict, Optional, Tuple

from ..exceptions import ParseError, ResponseParseError
from .parsing import parse_response

logger = logging.getLogger('headlinesignal.scoring.cache')

_FIELDS = ('key', 'model_id', 'prompt_hash', 'raw_response', 'label',
           'timestamp')


def cache_key(model_id: str, prompt_hash: str) -> str:
    return '{}:{}'.format(model_id, prompt_hash)


class ScoreCache:
    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._entries: Dict[str, dict] = {}
        self._lock = threading.Lock()
        self._key_locks: Dict[str, threading.Lock] = {}
        if path and os.path.exists(path):
            self._load(path)

    def _load(self, path):
        with open(path, encoding='utf-8') as fp:
            for line, raw in enumerate(fp, start=1):
                if not raw.strip():
                    continue
                try:
                    entry = json.loads(raw)
                except ValueError as exc:
                    raise ParseError(
                        'invalid cache entry: {}'.format(exc), line=line)
                missing = [f for f in _FIELDS[:4] if f not in entry]
                if missing:
                    raise ParseError('cache entry lacks {}'.format(
                        ', '.join(missing)), line=line)
                # first entry wins; the file is append-only
                self._entries.setdefault(entry['key'], entry)
        logger.info('loaded %d cached responses from %s',
                    len(self._entries), path)

    def __len__(self):
        return len(self._entries)

    def __contains__(self, key: str):
        return key in self._entries

    def get(self, key: str) -> Optional[dict]:
        return self._entries.get(key)

    def fetch(self, model_id: str, prompt_hash: str,
              query: Callable[[], str]) -> Tuple[dict, bool]:
        """
        Return the entry for (model_id, prompt_hash) and whether it was a
        hit. On a miss `query` produces the raw response, which is stored
        before returning. Concurrent calls for one key query once.
        """
        key = cache_key(model_id, prompt_hash)
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                return entry, True
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            entry = self._entries.get(key)
            if entry is not None:
                return entry, True
            raw = query()
            try:
                label = parse_response(raw).label.value
            except ResponseParseError:
                label = None
            entry = {
                'key': key,
                'model_id': model_id,
                'prompt_hash': prompt_hash,
                'raw_response': raw,
                'label': label,
                'timestamp': datetime.datetime.now(
                    datetime.timezone.utc).isoformat(),
            }
            self._append(entry)
            return entry, False

    def _append(self, entry: dict):
        with self._lock:
            self._entries[entry['key']] = entry
            # later callers find the entry before they reach for a lock
            self._key_locks.pop(entry['key'], None)
            if self.path:
                directory = os.path.dirname(self.path)
                if directory:
                    os.makedirs(directory, exist_ok=True)
                with open(self.path, 'a', encoding='utf-8') as fp:
                    fp.write(json.dumps(entry, ensure_ascii=False,
                                        sort_keys=True))
                    fp.write('\n')
