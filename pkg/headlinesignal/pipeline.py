"""
The pipeline as a sequence of commands over an output directory.

ingest -> score -> signal -> regress / backtest -> report

Each command reads the artifacts of the commands before it, writes its
own, and records its counters in the run manifest. Running a command
before its prerequisites raises `PipelineDependencyError`.
"""
import contextlib
import datetime
import json
import logging
import os
from typing import Dict, List, Optional, Tuple

from .backtest import form_portfolio, split_by_size
from .config import RunConfig
from .estimation import (
    RegressionResult, estimate, render_table, table_specs)
from .exceptions import (
    CalendarException, EstimationException, PipelineDependencyError)
from .manifest import MANIFEST_NAME, RunManifest
from .market_data import (
    TradingCalendar, filter_universe, load_calendar, load_returns,
    size_breakpoints)
from .news_ingest import (
    calendar_days, dedup_firm_day, filter_headlines, parse_headlines)
from .records import (
    Counters, FirmDaySignal, HeadlineRecord, PanelObservation, PortfolioDay,
    ReturnRecord, SentimentScore, count, dump_records, enter_context,
    guess_format, read_records)
from .records.types import DedupDay, Format
from .scoring import ScoreCache, Scorer, ScorerBackend, create_backend
from .signal_builder import (
    aggregate_firm_day, assign_effective_date, build_panel)
from .utils import read_bytes, within_window, write_bytes, write_text

logger = logging.getLogger('headlinesignal.pipeline')

SAMPLES = ('all', 'small', 'non-small')

ARTIFACTS = {
    'ingest': ('headlines.jsonl', 'returns.csv'),
    'score': ('scores.jsonl',),
    'signal': ('signals.csv', 'panel.csv'),
    'regress': ('regression.json', 'table.txt'),
    'backtest': ('backtest.json',) + tuple(
        'portfolio_{}.csv'.format(s) for s in SAMPLES),
    'report': ('report.txt',),
}
REQUIRES = {
    'ingest': (),
    'score': ('ingest',),
    'signal': ('ingest', 'score'),
    'regress': ('signal',),
    'backtest': ('signal',),
    'report': ('regress', 'backtest'),
}
COMMANDS = ('ingest', 'score', 'signal', 'regress', 'backtest', 'report')


def _json(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)
            + '\n').encode('utf-8')


class Pipeline:
    """
    Runs the commands for one `RunConfig`. Pass `backend` to score with an
    existing backend instead of the one the config names.
    """

    def __init__(self, config: RunConfig,
                 backend: Optional[ScorerBackend] = None):
        self.config = config
        self.backend = backend
        self.output_dir = config.output_dir
        self._calendar = None
        self.manifest = self._open_manifest()

    def __repr__(self):
        return 'Pipeline({!r}, {})'.format(self.output_dir, self.config)

    # -- plumbing -------------------------------------------------------

    def artifact(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def _open_manifest(self) -> RunManifest:
        timestamp = self.config.timestamp or datetime.datetime.now(
            datetime.timezone.utc).isoformat(timespec='seconds')
        if os.path.isfile(self.artifact(MANIFEST_NAME)):
            manifest = RunManifest.read(self.output_dir)
            if manifest.config_hash == self.config.digest:
                manifest.timestamp = timestamp
                return manifest
            logger.info('config changed; starting a new manifest')
        return RunManifest(self.config.digest, timestamp=timestamp)

    def require(self, command: str):
        for prior in REQUIRES[command]:
            for name in ARTIFACTS[prior]:
                if not os.path.isfile(self.artifact(name)):
                    raise PipelineDependencyError(
                        '{} needs {} from the {} command; run `{}` first'
                        .format(command, name, prior, prior),
                        required=prior)

    @contextlib.contextmanager
    def stage(self, command: str):
        self.require(command)
        os.makedirs(self.output_dir, exist_ok=True)
        counters = Counters()
        with enter_context(counters=counters, strict=self.config.strict):
            yield counters
        self.manifest.record_stage(command, counters.as_dict())
        for name in ARTIFACTS[command]:
            self.manifest.add_artifact(name, self.artifact(name))
        self.manifest.write(self.output_dir)
        logger.info('%s done: %s', command, ', '.join(
            '{}={}'.format(k, v) for k, v in counters.items()))

    def _format(self, path: str) -> Format:
        return self.config.input_format or guess_format(path)

    def calendar(self) -> TradingCalendar:
        if self._calendar is None:
            self._calendar = load_calendar(
                read_bytes(self.config.input_path('calendar')))
        return self._calendar

    def _read(self, name: str, record_type, fmt: Format) -> list:
        return read_records(read_bytes(self.artifact(name)), record_type, fmt)

    def _write(self, name: str, records, record_type, fmt: Format):
        write_bytes(self.artifact(name),
                    dump_records(records, record_type, fmt))

    # -- commands -------------------------------------------------------

    def cmd_ingest(self) -> Tuple[List[HeadlineRecord], List[ReturnRecord]]:
        config = self.config
        config.check_inputs()
        with self.stage('ingest'):
            calendar = self.calendar()
            for name in ('returns', 'headlines', 'calendar'):
                self.manifest.add_input(name, config.input_path(name))

            path = config.input_path('returns')
            returns = filter_universe(
                load_returns(read_bytes(path), self._format(path)))
            in_window = [r for r in returns if within_window(
                r.date, config.sample_start, config.sample_end)]
            count('returns.outside_sample', len(returns) - len(in_window))
            returns = in_window

            path = config.input_path('headlines')
            headlines = parse_headlines(read_bytes(path), self._format(path))
            effective = {}
            outside_calendar = outside_sample = 0
            for r in headlines:
                try:
                    day = assign_effective_date(r.published_at, calendar)
                except CalendarException:
                    outside_calendar += 1
                    continue
                if not within_window(day, config.sample_start,
                                     config.sample_end):
                    outside_sample += 1
                    continue
                effective[r.story_id] = day
            count('headlines.outside_calendar', outside_calendar)
            count('headlines.outside_sample', outside_sample)
            headlines = filter_headlines(
                r for r in headlines if r.story_id in effective)
            if config.dedup_day is DedupDay.CALENDAR:
                days = calendar_days(headlines, calendar)
            else:
                days = effective
            kept = dedup_firm_day(
                headlines, config.similarity_threshold, days)
            count('headlines.kept', len(kept))

            self._write('headlines.jsonl', kept, HeadlineRecord, Format.JSONL)
            self._write('returns.csv', returns, ReturnRecord, Format.CSV)
        return kept, returns

    def cmd_score(self) -> List[SentimentScore]:
        config = self.config
        with self.stage('score'):
            headlines = self._read(
                'headlines.jsonl', HeadlineRecord, Format.JSONL)
            backend = self.backend or create_backend(
                config.backend_uri, **config.scorer_options)
            try:
                scorer = Scorer(
                    backend, ScoreCache(config.cache_path),
                    model_id=config.model_id, term=config.term,
                    strict=config.strict)
                scores = scorer.score_all(headlines, jobs=config.jobs)
            finally:
                if backend is not self.backend:
                    backend.close()
            count('scores.total', len(scores))
            self._write('scores.jsonl', scores, SentimentScore, Format.JSONL)
        return scores

    def cmd_signal(self) -> List[PanelObservation]:
        config = self.config
        with self.stage('signal'):
            calendar = self.calendar()
            headlines = self._read(
                'headlines.jsonl', HeadlineRecord, Format.JSONL)
            scores = {s.story_id: s for s in self._read(
                'scores.jsonl', SentimentScore, Format.JSONL)}
            unscored = [h.story_id for h in headlines
                        if h.story_id not in scores]
            if unscored:
                raise PipelineDependencyError(
                    '{} headlines have no score (first {}); rerun `score`'
                    .format(len(unscored), unscored[0]), required='score')
            signals = aggregate_firm_day(
                [(h, scores[h.story_id]) for h in headlines], calendar)

            returns = self._read('returns.csv', ReturnRecord, Format.CSV)
            # NYSE breakpoints come from the whole universe
            breakpoints = size_breakpoints(returns)
            if config.require_news:
                covered = {h.firm_id for h in headlines}
                with_news = [r for r in returns if r.firm_id in covered]
                count('returns.no_news', len(returns) - len(with_news))
                returns = with_news
            panel = build_panel(
                signals, returns, calendar, extra_lag=config.extra_lag,
                convention=config.return_convention,
                breakpoints=breakpoints)

            self._write('signals.csv', signals, FirmDaySignal, Format.CSV)
            self._write('panel.csv', panel, PanelObservation, Format.CSV)
        return panel

    def cmd_regress(self) -> List[RegressionResult]:
        config = self.config
        with self.stage('regress'):
            panel = self._read('panel.csv', PanelObservation, Format.CSV)
            results, failures, columns = [], [], {}
            for i, spec in enumerate(table_specs()):
                try:
                    result = estimate(panel, spec, tol=config.tolerance,
                                      max_iter=config.max_iter)
                except EstimationException as exc:
                    logger.warning('%s: %s', spec.label, exc)
                    failures.append({'spec': spec.to_dict(),
                                     'error': exc.__class__.__name__,
                                     'message': str(exc)})
                    continue
                results.append(result)
                columns[id(result)] = '({})'.format(i % 3 + 1)
            if not results:
                raise EstimationException(
                    'no regression could be estimated: {}'.format(
                        failures[0]['message']))
            count('regression.failed', len(failures))
            write_bytes(self.artifact('regression.json'), _json({
                'config_hash': config.digest,
                'results': [r.to_dict() for r in results],
                'failures': failures,
            }))
            tables = []
            for sample in SAMPLES:
                chosen = [r for r in results if r.spec.sample == sample]
                if not chosen:
                    continue
                tables.append('Sample: {}\n'.format(sample) + render_table(
                    chosen, [columns[id(r)] for r in chosen]))
            write_text(self.artifact('table.txt'), '\n'.join(tables))
        return results

    def cmd_backtest(self) -> Dict[str, object]:
        config = self.config
        with self.stage('backtest'):
            panel = self._read('panel.csv', PanelObservation, Format.CSV)
            small, non_small = split_by_size(panel)
            series = {}
            for sample, rows in zip(SAMPLES, (panel, small, non_small)):
                series[sample] = form_portfolio(
                    rows, weighting=config.weighting,
                    cost_bps=config.cost_bps)
                self._write('portfolio_{}.csv'.format(sample),
                            series[sample].days, PortfolioDay, Format.CSV)
            write_bytes(self.artifact('backtest.json'), _json({
                'config_hash': config.digest,
                'weighting': config.weighting.value,
                'cost_bps': config.cost_bps,
                'summaries': {k: v.summary() for k, v in series.items()},
            }))
        return series

    def cmd_report(self) -> str:
        with self.stage('report'):
            with open(self.artifact('backtest.json'), encoding='utf-8') as fp:
                backtest = json.load(fp)
            with open(self.artifact('table.txt'), encoding='utf-8') as fp:
                table = fp.read()
            lines = ['Config {}'.format(self.config.digest), '',
                     'Next-day return regressions', '', table.rstrip('\n'),
                     '', 'Long-short portfolios ({} weighted, {} bps)'.format(
                         backtest['weighting'], backtest['cost_bps']), '']
            for sample in SAMPLES:
                lines.append('{:<10} {}'.format(sample, _summary_line(
                    backtest['summaries'][sample])))
            report = '\n'.join(lines) + '\n'
            write_text(self.artifact('report.txt'), report)
            # digests of everything written so far
            for command in COMMANDS:
                for name in ARTIFACTS[command]:
                    path = self.artifact(name)
                    if os.path.isfile(path):
                        self.manifest.add_artifact(name, path)
        return report

    def run(self, commands=COMMANDS):
        for command in commands:
            getattr(self, 'cmd_' + command)()
        return self.manifest


def _fmt(value, spec):
    return 'n/a' if value is None else spec.format(value)


def _summary_line(summary: dict) -> str:
    return 'days={} mean={} sharpe={} max_dd={} total={}'.format(
        summary['n_days'], _fmt(summary['mean_long_short'], '{:.5f}'),
        _fmt(summary['sharpe'], '{:.2f}'),
        _fmt(summary['max_drawdown'], '{:.4f}'),
        _fmt(summary['total_return'], '{:.4f}'))
