"""
Run manifests: what went in, what came out, and the stage counters.
"""
import hashlib
import json
import logging
import os
from typing import Dict, Mapping, Optional

from . import __version__
from .exceptions import ConfigException
from .scoring.signals import PROMPT_VERSION

logger = logging.getLogger('headlinesignal.manifest')

MANIFEST_NAME = 'manifest.json'


def file_digest(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as fp:
        for chunk in iter(lambda: fp.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


class RunManifest:
    """
    Paths are stored relative to the output directory (artifacts) or as
    configured (inputs) so manifests of identical runs are identical.
    """

    def __init__(self, config_hash: str, inputs: Mapping = None,
                 artifacts: Mapping[str, str] = None,
                 stages: Mapping[str, Mapping[str, int]] = None,
                 timestamp: Optional[str] = None):
        self.config_hash = config_hash
        self.inputs = dict(inputs or {})
        self.artifacts = dict(artifacts or {})
        self.stages = {k: dict(v) for k, v in (stages or {}).items()}
        self.timestamp = timestamp
        self.versions = {
            'headlinesignal': __version__,
            'prompt': PROMPT_VERSION,
        }

    @property
    def counters(self) -> Dict[str, int]:
        merged = {}
        for counters in self.stages.values():
            for name, n in counters.items():
                merged[name] = merged.get(name, 0) + n
        return dict(sorted(merged.items()))

    def record_stage(self, stage: str, counters: Mapping[str, int]):
        """Replace the counters of `stage`, so reruns do not add up."""
        self.stages[stage] = dict(counters)

    def add_input(self, name: str, path: str):
        self.inputs[name] = {'path': os.path.basename(path),
                             'sha256': file_digest(path)}

    def add_artifact(self, name: str, path: str):
        self.artifacts[name] = file_digest(path)

    def reconcile(self) -> Dict[str, bool]:
        """
        Stage boundary checks: every parsed row is either dropped or passed
        on, and every signal is either matched or dropped.
        """
        c = self.counters
        checks = {}
        if 'headlines.parsed' in c and 'headlines.kept' in c:
            checks['headlines'] = c['headlines.parsed'] == (
                c.get('headlines.outside_sample', 0)
                + c.get('headlines.outside_calendar', 0)
                + c.get('headlines.filtered_out', 0)
                + c.get('headlines.dedup_dropped', 0)
                + c['headlines.kept'])
        if 'signals.built' in c and 'panel.matched' in c:
            checks['panel'] = c['signals.built'] == (
                c['panel.matched'] + c.get('panel.dropped_signals', 0))
        if 'scores.total' in c:
            checks['scores'] = c['scores.total'] == (
                c.get('scores.queried', 0) + c.get('scores.cache_hits', 0))
        return checks

    def as_dict(self) -> dict:
        return {
            'config_hash': self.config_hash,
            'versions': self.versions,
            'inputs': self.inputs,
            'artifacts': self.artifacts,
            'stages': self.stages,
            'counters': self.counters,
            'reconciled': self.reconcile(),
            'timestamp': self.timestamp,
        }

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + '\n'

    def write(self, output_dir: str) -> str:
        path = os.path.join(output_dir, MANIFEST_NAME)
        with open(path, 'w', encoding='utf-8', newline='\n') as fp:
            fp.write(self.dumps())
        logger.info('wrote manifest %s', path)
        return path

    @classmethod
    def read(cls, output_dir: str) -> 'RunManifest':
        path = os.path.join(output_dir, MANIFEST_NAME)
        try:
            with open(path, encoding='utf-8') as fp:
                data = json.load(fp)
        except OSError as exc:
            raise ConfigException('cannot read manifest: {}'.format(exc))
        manifest = cls(
            data['config_hash'], data.get('inputs'), data.get('artifacts'),
            data.get('stages'), data.get('timestamp'))
        manifest.versions = data.get('versions', manifest.versions)
        return manifest

    def verify(self, output_dir: str) -> Dict[str, bool]:
        """Recompute artifact digests; True where they still match."""
        result = {}
        for name, digest in sorted(self.artifacts.items()):
            path = os.path.join(output_dir, name)
            result[name] = os.path.isfile(path) and \
                file_digest(path) == digest
        return result
