"""
Headline scoring.

A Scorer renders the prompt for a headline, asks its backend (through the
cache) and maps the verdict to -1, 0 or +1.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional

from ..exceptions import BackendException, ResponseParseError
from ..records.base_records import HeadlineRecord, SentimentScore
from ..records.context import Counters, CurrentContext
from ..records.types import Label, Term
from .cache import ScoreCache
from .common import ScorerBackend
from .parsing import map_label, parse_response
from .prompt import PromptRequest, build_prompt, load_template, prompt_hash
from .signals import DEFAULT_MODEL_ID, TEMPERATURE

logger = logging.getLogger('headlinesignal.scoring')


class Scorer:
    """
    Scores headlines with one backend, model and horizon. With `strict`
    an unparseable response raises; otherwise it counts as UNKNOWN and the
    score is flagged as a fallback. `strict` defaults to the run context's
    setting.
    """

    def __init__(self, backend: ScorerBackend,
                 cache: Optional[ScoreCache] = None,
                 model_id: str = DEFAULT_MODEL_ID, term: Term = Term.SHORT,
                 strict: Optional[bool] = None,
                 template: Optional[str] = None):
        self.backend = backend
        self.cache = cache if cache is not None else ScoreCache()
        self.model_id = model_id
        self.term = term
        if strict is None:
            strict = bool(CurrentContext.get('strict', False))
        self.strict = strict
        self.template = template if template is not None else load_template()
        self.counters = Counters()

    def prompt_for(self, record: HeadlineRecord) -> str:
        request = PromptRequest.for_headline(
            record, term=self.term, model_id=self.model_id)
        return build_prompt(request, self.template)

    def score(self, record: HeadlineRecord) -> SentimentScore:
        prompt = self.prompt_for(record)
        digest = prompt_hash(prompt)
        try:
            entry, hit = self.cache.fetch(
                self.model_id, digest,
                lambda: self.backend.complete(
                    prompt, self.model_id, TEMPERATURE))
        except BackendException as exc:
            raise BackendException(str(exc), story_id=record.story_id)
        self.counters.add('scores.cache_hits' if hit else 'scores.queried')
        raw = entry['raw_response']
        fallback = False
        try:
            verdict = parse_response(raw)
            label, rationale = verdict.label, verdict.rationale
        except ResponseParseError as exc:
            if self.strict:
                raise ResponseParseError(
                    'story {}: {}'.format(record.story_id, exc), raw=raw)
            logger.warning('story %s: %s; scored as UNKNOWN',
                           record.story_id, exc)
            self.counters.add('scores.parse_fallbacks')
            label, rationale, fallback = Label.UNKNOWN, None, True
        return SentimentScore(
            story_id=record.story_id, model_id=self.model_id,
            value=map_label(label), label=label, rationale=rationale,
            fallback=fallback)

    def score_all(self, records: Iterable[HeadlineRecord],
                  jobs: int = 1) -> List[SentimentScore]:
        """Score in input order; `jobs` > 1 queries concurrently."""
        records = list(records)
        self.counters = Counters()
        if jobs <= 1 or len(records) <= 1:
            scores = [self.score(record) for record in records]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                scores = list(pool.map(self.score, records))
        # worker threads do not share the run context
        counters = CurrentContext.get('counters')
        if counters is not None:
            counters.update(self.counters)
        logger.info('scored %d headlines (%d from cache)', len(scores),
                    self.counters['scores.cache_hits'])
        return scores


def score_headline(record: HeadlineRecord, backend: ScorerBackend,
                   cache: Optional[ScoreCache] = None,
                   model_id: str = DEFAULT_MODEL_ID,
                   term: Term = Term.SHORT,
                   strict: Optional[bool] = None) -> SentimentScore:
    return Scorer(backend, cache, model_id=model_id, term=term,
                  strict=strict).score(record)
