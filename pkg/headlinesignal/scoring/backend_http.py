"""
Chat-completion backend over HTTPS.

Throttling and retries are set in the uri query string, for example:
`https://api.openai.com/v1/chat/completions?rate=3&retries=5&in_flight=2`
"""
import logging
import os
import threading
import time
from typing import Callable, Optional
from urllib.parse import parse_qs, urlsplit, urlunsplit

import requests
from tenacity import (
    Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt,
    wait_exponential)

from ..exceptions import BackendException, ConfigException, RateLimited
from .common import ScorerBackend
from .signals import (
    DEFAULT_API_KEY_ENV, DEFAULT_BACKOFF, DEFAULT_BURST, DEFAULT_IN_FLIGHT,
    DEFAULT_RATE, DEFAULT_RETRIES, DEFAULT_TIMEOUT, MAX_BACKOFF)

logger = logging.getLogger('headlinesignal.scoring.http')


class _Transient(BackendException):
    """Server or connection trouble worth another attempt."""


class TokenBucket:
    """
    Allows `rate` acquisitions per second on average with bursts of up to
    `burst`. `acquire` blocks until a token is available.
    """

    def __init__(self, rate: float, burst: int = 1,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if rate <= 0:
            raise ValueError('rate must be positive')
        if burst < 1:
            raise ValueError('burst must be at least 1')
        self.rate = float(rate)
        self.burst = int(burst)
        self._clock = clock
        self._sleep = sleep
        self._tokens = float(burst)
        self._stamp = clock()
        self._lock = threading.Lock()

    def _refill(self):
        now = self._clock()
        self._tokens = min(
            self.burst, self._tokens + (now - self._stamp) * self.rate)
        self._stamp = now

    def acquire(self):
        while True:
            with self._lock:
                self._refill()
                if self._tokens >= 1:
                    self._tokens -= 1
                    return
                wait = (1 - self._tokens) / self.rate
            self._sleep(wait)


class HttpChatBackend(ScorerBackend):
    defaults = dict(
        rate=DEFAULT_RATE, burst=DEFAULT_BURST, retries=DEFAULT_RETRIES,
        backoff=DEFAULT_BACKOFF, timeout=DEFAULT_TIMEOUT,
        in_flight=DEFAULT_IN_FLIGHT, api_key_env=DEFAULT_API_KEY_ENV)

    def __init__(self, uri: str, api_key: Optional[str] = None,
                 session: Optional[requests.Session] = None,
                 sleep: Callable[[float], None] = time.sleep, **options):
        super().__init__()
        parsed = urlsplit(uri)
        if parsed.scheme not in ('http', 'https') or not parsed.netloc:
            raise ConfigException('not an http(s) endpoint: {}'.format(uri))
        self.uri = uri
        self.endpoint = urlunsplit(
            (parsed.scheme, parsed.netloc, parsed.path, '', ''))
        qs_parsed = parse_qs(parsed.query)

        def option(name, cast):
            value = options.get(name)
            if value is None:
                value = qs_parsed.get(name, [self.defaults[name]])[0]
            try:
                return cast(value)
            except (TypeError, ValueError):
                raise ConfigException(
                    'invalid value for {}: {!r}'.format(name, value))

        self.rate = option('rate', float)
        self.burst = option('burst', int)
        self.retries = option('retries', int)
        self.backoff = option('backoff', float)
        self.timeout = option('timeout', float)
        self.in_flight = option('in_flight', int)
        if self.retries < 0 or self.in_flight < 1:
            raise ConfigException('retries must be >= 0, in_flight >= 1')
        if self.rate <= 0 or self.burst < 1:
            raise ConfigException('rate must be > 0, burst >= 1')
        api_key_env = option('api_key_env', str)
        self.api_key = api_key or os.environ.get(api_key_env)
        if not self.api_key:
            raise ConfigException(
                'no api key; set {}'.format(api_key_env))
        self.session = session or requests.Session()
        self._sleep = sleep
        self.bucket = TokenBucket(self.rate, self.burst, sleep=sleep)
        self._slots = threading.BoundedSemaphore(self.in_flight)

    def _post(self, prompt, model_id, temperature) -> str:
        self.bucket.acquire()
        body = {
            'model': model_id,
            'temperature': temperature,
            'messages': [{'role': 'user', 'content': prompt}],
        }
        headers = {'Authorization': 'Bearer {}'.format(self.api_key)}
        with self._slots:
            try:
                response = self.session.post(
                    self.endpoint, json=body, headers=headers,
                    timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                raise _Transient('connection failed: {}'.format(exc))
        if response.status_code == 429:
            raise RateLimited('rate limited by endpoint')
        if response.status_code >= 500:
            raise _Transient('server error {}'.format(response.status_code))
        if response.status_code >= 400:
            raise BackendException('request rejected with {}: {}'.format(
                response.status_code, response.text[:200]))
        try:
            content = response.json()['choices'][0]['message']['content']
        except (ValueError, KeyError, IndexError, TypeError):
            raise BackendException('malformed response body')
        if not isinstance(content, str):
            raise BackendException('malformed response body')
        return content

    def _complete(self, prompt, model_id, temperature):
        retrying = Retrying(
            stop=stop_after_attempt(self.retries + 1),
            wait=wait_exponential(multiplier=self.backoff, max=MAX_BACKOFF),
            retry=retry_if_exception_type((_Transient, RateLimited)),
            sleep=self._sleep,
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True)
        try:
            return retrying(self._post, prompt, model_id, temperature)
        except _Transient as exc:
            raise BackendException(
                'gave up after {} attempts: {}'.format(self.retries + 1, exc))

    def close(self):
        self.session.close()
