"""
Run configuration.

A YAML file is merged over `DEFAULTS` and validated into a `RunConfig`.
Relative paths are taken relative to the directory of the config file.
Secrets never live in the file: `scorer.api_key_env` names the environment
variable holding the API key.
"""
import copy
import datetime
import hashlib
import json
import logging
import os
from typing import Any, Dict, Optional

import yaml

from .exceptions import ConfigException
from .records.types import (
    DedupDay, Format, ReturnConvention, Term, Weighting)
from .scoring.signals import DEFAULT_API_KEY_ENV, DEFAULT_MODEL_ID

logger = logging.getLogger('headlinesignal.config')

DEFAULTS = {
    'inputs': {
        'returns': None,
        'headlines': None,
        'calendar': None,
        'format': None,
    },
    'cache': {
        'path': None,
    },
    'scorer': {
        'backend': 'mock://',
        'model_id': DEFAULT_MODEL_ID,
        'term': 'short',
        'strict': False,
        'api_key_env': DEFAULT_API_KEY_ENV,
        'rate': None,
        'retries': None,
        'backoff': None,
        'timeout': None,
    },
    'ingest': {
        'similarity_threshold': 0.6,
        'dedup_day': 'effective',
        'sample_start': None,
        'sample_end': None,
    },
    'signal': {
        'return_convention': 'close_to_close',
        'extra_lag': 0,
        'require_news': False,
    },
    'regression': {
        'tolerance': 1e-10,
        'max_iter': 10000,
    },
    'backtest': {
        'weighting': 'equal',
        'cost_bps': 0.0,
    },
    'output_dir': 'output',
    'jobs': 1,
    'seed': 0,
    'run': {
        'timestamp': None,
    },
}

#: keys that do not change any result and stay out of the config hash
UNHASHED = ('output_dir', 'jobs')
INPUTS = ('returns', 'headlines', 'calendar')


def merge(base: dict, override: dict, path: str = '') -> dict:
    """Deep-merge `override` into a copy of `base`; unknown keys fail."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        where = '{}{}'.format(path, key)
        if key not in base:
            raise ConfigException('unknown config key {!r}'.format(where))
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigException(
                    'config key {!r} must be a mapping'.format(where))
            merged[key] = merge(base[key], value, where + '.')
        else:
            merged[key] = value
    return merged


def _date(value, key) -> Optional[datetime.date]:
    if value is None or isinstance(value, datetime.date):
        return value
    try:
        return datetime.date.fromisoformat(str(value))
    except ValueError:
        raise ConfigException('{} must be an ISO date, got {!r}'.format(
            key, value))


def _enum(enum, value, key):
    try:
        return enum(value)
    except ValueError:
        raise ConfigException('{} must be one of {}, got {!r}'.format(
            key, ', '.join(e.value for e in enum), value))


def _number(cast, value, key, minimum=None):
    try:
        number = cast(value)
    except (TypeError, ValueError):
        raise ConfigException('{} must be a number, got {!r}'.format(
            key, value))
    if minimum is not None and number < minimum:
        raise ConfigException('{} must be >= {}, got {!r}'.format(
            key, minimum, value))
    return number


class RunConfig:
    """The validated configuration of one pipeline run."""

    def __init__(self, values: Optional[Dict[str, Any]] = None,
                 base_dir: str = '.'):
        self.values = merge(DEFAULTS, values or {})
        self.base_dir = base_dir
        self._validate()

    def _validate(self):
        v = self.values
        ingest, signal, scorer = v['ingest'], v['signal'], v['scorer']
        threshold = _number(float, ingest['similarity_threshold'],
                            'ingest.similarity_threshold')
        if not 0.0 <= threshold <= 1.0:
            raise ConfigException(
                'ingest.similarity_threshold must be in [0, 1], got {!r}'
                .format(threshold))
        self.similarity_threshold = threshold
        self.dedup_day = _enum(DedupDay, ingest['dedup_day'],
                               'ingest.dedup_day')
        self.sample_start = _date(ingest['sample_start'],
                                  'ingest.sample_start')
        self.sample_end = _date(ingest['sample_end'], 'ingest.sample_end')
        if self.sample_start and self.sample_end and \
                self.sample_start > self.sample_end:
            raise ConfigException('ingest.sample_start is after sample_end')
        self.input_format = None
        if v['inputs']['format'] is not None:
            self.input_format = _enum(Format, v['inputs']['format'],
                                      'inputs.format')
        self.return_convention = _enum(
            ReturnConvention, signal['return_convention'],
            'signal.return_convention')
        self.extra_lag = _number(int, signal['extra_lag'],
                                 'signal.extra_lag', 0)
        self.require_news = bool(signal['require_news'])
        self.term = _enum(Term, scorer['term'], 'scorer.term')
        self.strict = bool(scorer['strict'])
        self.backend_uri = str(scorer['backend'])
        self.model_id = str(scorer['model_id'])
        # unset options fall back to the backend uri's query string
        self.scorer_options = {'api_key_env': str(scorer['api_key_env'])}
        for name, cast in (('rate', float), ('retries', int),
                           ('backoff', float), ('timeout', float)):
            if scorer[name] is not None:
                self.scorer_options[name] = _number(
                    cast, scorer[name], 'scorer.' + name, 0)
        for name in ('rate', 'timeout'):
            if self.scorer_options.get(name, 1) <= 0:
                raise ConfigException('scorer.{} must be > 0, got {!r}'
                                      .format(name, scorer[name]))
        self.tolerance = _number(float, v['regression']['tolerance'],
                                 'regression.tolerance', 0)
        self.max_iter = _number(int, v['regression']['max_iter'],
                                'regression.max_iter', 1)
        self.weighting = _enum(Weighting, v['backtest']['weighting'],
                               'backtest.weighting')
        self.cost_bps = _number(float, v['backtest']['cost_bps'],
                                'backtest.cost_bps', 0)
        self.jobs = _number(int, v['jobs'], 'jobs', 1)
        self.seed = _number(int, v['seed'], 'seed', 0)
        self.timestamp = v['run']['timestamp']
        if self.timestamp is not None:
            self.timestamp = str(self.timestamp)

    def path(self, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        return os.path.normpath(os.path.join(self.base_dir, value))

    def input_path(self, name: str) -> str:
        path = self.path(self.values['inputs'][name])
        if path is None:
            raise ConfigException('inputs.{} is not configured'.format(name))
        return path

    @property
    def output_dir(self) -> str:
        return self.path(self.values['output_dir'])

    @property
    def cache_path(self) -> Optional[str]:
        return self.path(self.values['cache']['path'])

    def check_inputs(self):
        """Every configured input must exist."""
        for name in INPUTS:
            path = self.input_path(name)
            if not os.path.isfile(path):
                raise ConfigException(
                    'inputs.{} not found: {}'.format(name, path))

    def override(self, values: Dict[str, Any]) -> 'RunConfig':
        """A copy with `values` merged in; None leaves a key alone."""
        def prune(d):
            return {k: prune(v) if isinstance(v, dict) else v
                    for k, v in d.items() if v is not None}
        return RunConfig(merge(self.values, prune(values)), self.base_dir)

    def canonical(self) -> dict:
        return json.loads(json.dumps(
            {k: v for k, v in self.values.items() if k not in UNHASHED},
            sort_keys=True, default=str))

    @property
    def digest(self) -> str:
        payload = json.dumps(self.canonical(), sort_keys=True,
                             separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def __repr__(self):
        return 'RunConfig({})'.format(self.digest[:12])


def load_config(path: Optional[str] = None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, encoding='utf-8') as fp:
            values = yaml.safe_load(fp)
    except OSError as exc:
        raise ConfigException('cannot read config {}: {}'.format(path, exc))
    except yaml.YAMLError as exc:
        raise ConfigException('invalid YAML in {}: {}'.format(path, exc))
    if values is None:
        values = {}
    if not isinstance(values, dict):
        raise ConfigException('config {} must be a mapping'.format(path))
    config = RunConfig(values, base_dir=os.path.dirname(
        os.path.abspath(path)))
    logger.info('loaded config %s (%s)', path, config.digest[:12])
    return config


def write_config(path: str, values: Dict[str, Any]):
    """Write `values` as YAML after checking they form a valid config."""
    RunConfig(values)
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        yaml.safe_dump(values, fp, sort_keys=True, default_flow_style=False)
