import contextlib
import threading
from collections import Counter

_DELETED = object()
_local = threading.local()


class Context(dict):
    """
    One scope of run settings. Keys missing here are looked up in the
    enclosing scope; deleting a key hides it for this scope only.
    """

    def __init__(self, _parent=None, **kwargs):
        super().__init__(**kwargs)
        self.parent = _parent

    def __getitem__(self, key):
        scope = self
        while scope is not None:
            if dict.__contains__(scope, key):
                value = dict.__getitem__(scope, key)
                if value is _DELETED:
                    raise KeyError('{} deleted in context'.format(key))
                return value
            scope = scope.parent
        raise KeyError(key)

    def __delitem__(self, key):
        dict.__setitem__(self, key, _DELETED)

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default


def _stack():
    if not hasattr(_local, 'stack'):
        _local.stack = [Context(_parent=GlobalContext)]
    return _local.stack


class _CurrentContext:
    """Item access on the innermost scope of the calling thread."""

    def __getitem__(self, key):
        return _stack()[-1][key]

    def __setitem__(self, key, value):
        _stack()[-1][key] = value

    def __delitem__(self, key):
        del _stack()[-1][key]

    def get(self, key, default=None):
        return _stack()[-1].get(key, default)


@contextlib.contextmanager
def enter_context(**kwargs):
    stack = _stack()
    stack.append(Context(_parent=stack[-1], **kwargs))
    try:
        yield stack[-1]
    finally:
        stack.pop()


GlobalContext = Context()
CurrentContext = _CurrentContext()


class Counters:
    """
    Thread-safe named counters. A run installs one with
    `enter_context(counters=Counters())`; pipeline stages then report
    through `count()`.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._counts = Counter()

    def add(self, name: str, n: int = 1):
        with self._lock:
            self._counts[name] += n

    def update(self, other: 'Counters'):
        for name, n in other.items():
            self.add(name, n)

    def __getitem__(self, name: str) -> int:
        with self._lock:
            return self._counts[name]

    def items(self):
        with self._lock:
            return sorted(self._counts.items())

    def as_dict(self):
        return dict(self.items())

    def __repr__(self):
        return "Counters({!r})".format(self.as_dict())


def count(name: str, n: int = 1):
    """Add `n` to the counter `name` of the active context, if any."""
    counters = CurrentContext.get('counters')
    if counters is not None:
        counters.add(name, n)
