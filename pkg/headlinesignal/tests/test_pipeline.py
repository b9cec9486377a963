import contextlib
import io
import json
import os
import shutil
import tempfile
from unittest import TestCase, main

from headlinesignal.cli import main as cli_main
from headlinesignal.config import RunConfig, write_config
from headlinesignal.exceptions import PipelineDependencyError
from headlinesignal.manifest import MANIFEST_NAME, RunManifest
from headlinesignal.pipeline import ARTIFACTS, COMMANDS, Pipeline
from headlinesignal.records import HeadlineRecord, read_records
from headlinesignal.records.types import Format
from headlinesignal.scoring import LexiconBackend
from headlinesignal.synthetic import generate_corpus

TIMESTAMP = '2021-12-31T00:00:00+00:00'
GOLDEN = os.path.join(os.path.dirname(__file__), 'fixtures',
                      'golden_digests.json')
#: set to rewrite GOLDEN from the current run
RECORD_GOLDEN = 'HEADLINESIGNAL_RECORD_GOLDEN'


def run_cli(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), \
            contextlib.redirect_stderr(stderr):
        code = cli_main(list(argv) + ['--quiet'])
    return code, stdout.getvalue(), stderr.getvalue()


def last_json(text):
    return json.loads(text.strip().splitlines()[-1])


class TestPipeline(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.mkdtemp()
        cls.paths = generate_corpus(seed=0).write(
            os.path.join(cls.directory, 'data'))
        cls.outputs = []
        for name in ('first', 'second'):
            config = cls.config(output_dir=os.path.join(cls.directory, name))
            Pipeline(config).run()
            cls.outputs.append(config.output_dir)

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.directory)

    @classmethod
    def config(cls, **values):
        values.setdefault('inputs', dict(cls.paths))
        values.setdefault('run', {'timestamp': TIMESTAMP})
        return RunConfig(values)

    def test_artifacts_written(self):
        first = self.outputs[0]
        for command in COMMANDS:
            for name in ARTIFACTS[command]:
                self.assertTrue(os.path.isfile(os.path.join(first, name)),
                                name)

    def test_reruns_are_byte_identical(self):
        first, second = self.outputs
        names = sorted(os.listdir(first))
        self.assertEqual(names, sorted(os.listdir(second)))
        self.assertIn(MANIFEST_NAME, names)
        for name in names:
            with open(os.path.join(first, name), 'rb') as a, \
                    open(os.path.join(second, name), 'rb') as b:
                self.assertEqual(a.read(), b.read(), name)

    def test_golden_digests(self):
        digests = RunManifest.read(self.outputs[0]).artifacts
        if os.environ.get(RECORD_GOLDEN):
            with open(GOLDEN, 'w', encoding='utf-8') as fp:
                json.dump(digests, fp, indent=2, sort_keys=True)
                fp.write('\n')
        if not os.path.isfile(GOLDEN):
            self.skipTest('no golden digests; record them with {}=1'
                          .format(RECORD_GOLDEN))
        with open(GOLDEN, encoding='utf-8') as fp:
            golden = json.load(fp)

        self.assertEqual(sorted(golden), sorted(
            name for command in COMMANDS for name in ARTIFACTS[command]))
        for name, digest in sorted(golden.items()):
            self.assertEqual(digests.get(name), digest, name)

    def test_manifest(self):
        manifest = RunManifest.read(self.outputs[0])

        self.assertEqual(manifest.timestamp, TIMESTAMP)
        self.assertEqual(manifest.config_hash,
                         self.config(output_dir='x').digest)
        self.assertEqual(sorted(manifest.stages), sorted(COMMANDS))
        self.assertEqual(manifest.inputs['headlines']['path'],
                         'headlines.jsonl')
        reconciled = manifest.reconcile()
        self.assertEqual(sorted(reconciled),
                         ['headlines', 'panel', 'scores'])
        self.assertTrue(all(reconciled.values()), reconciled)
        self.assertGreater(manifest.counters['headlines.dedup_dropped'], 0)
        self.assertGreater(manifest.counters['headlines.filtered_out'], 0)
        self.assertTrue(all(manifest.verify(self.outputs[0]).values()))

    def test_verify_detects_changes(self):
        copy = os.path.join(self.directory, 'tampered')
        shutil.copytree(self.outputs[0], copy)
        with open(os.path.join(copy, 'report.txt'), 'a') as fp:
            fp.write('edited\n')
        os.remove(os.path.join(copy, 'table.txt'))
        result = RunManifest.read(copy).verify(copy)

        self.assertFalse(result['report.txt'])
        self.assertFalse(result['table.txt'])
        self.assertTrue(result['panel.csv'])

    def test_report(self):
        with open(os.path.join(self.outputs[0], 'report.txt'),
                  encoding='utf-8') as fp:
            lines = fp.read().splitlines()

        self.assertEqual(lines[0], 'Config {}'.format(
            self.config(output_dir='x').digest))
        self.assertIn('Sample: all', lines)
        for sample in ('all', 'small', 'non-small'):
            self.assertTrue(any(
                line.startswith(sample.ljust(10) + ' days=')
                for line in lines), sample)

    def test_regression_results(self):
        with open(os.path.join(self.outputs[0], 'regression.json'),
                  encoding='utf-8') as fp:
            regression = json.load(fp)

        self.assertEqual(len(regression['results'])
                         + len(regression['failures']), 9)
        first = regression['results'][0]
        self.assertEqual(first['spec']['sample'], 'all')
        self.assertEqual(first['spec']['regressors'], ['chatgpt_score'])
        self.assertGreater(first['coefficients']['chatgpt_score'], 0.0)

    def test_kept_headlines_are_deduplicated(self):
        with open(os.path.join(self.outputs[0], 'headlines.jsonl'),
                  'rb') as fp:
            kept = read_records(fp.read(), HeadlineRecord, Format.JSONL)
        self.assertFalse(any(r.headline.endswith(' (update)')
                             for r in kept))

    def test_commands_need_their_inputs(self):
        pipeline = Pipeline(self.config(
            output_dir=os.path.join(self.directory, 'fresh')))
        with self.assertRaises(PipelineDependencyError) as cm:
            pipeline.cmd_regress()
        self.assertEqual(cm.exception.required, 'signal')
        with self.assertRaises(PipelineDependencyError) as cm:
            pipeline.cmd_score()
        self.assertEqual(cm.exception.required, 'ingest')

    def test_supplied_backend(self):
        backend = LexiconBackend()
        config = self.config(
            output_dir=os.path.join(self.directory, 'supplied'))
        pipeline = Pipeline(config, backend=backend)
        pipeline.run(('ingest', 'score'))

        manifest = RunManifest.read(config.output_dir)
        self.assertEqual(backend.calls, manifest.counters['scores.queried'])
        self.assertLessEqual(backend.calls,
                             manifest.counters['headlines.kept'])
        with open(os.path.join(config.output_dir, 'scores.jsonl'),
                  'rb') as a, \
                open(os.path.join(self.outputs[0], 'scores.jsonl'),
                     'rb') as b:
            self.assertEqual(a.read(), b.read())


class TestCommandLine(TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.dir = self.directory.name

    def tearDown(self):
        self.directory.cleanup()

    def test_synth_then_run(self):
        data = os.path.join(self.dir, 'data')
        code, out, _ = run_cli('synth', '--output-dir', data)
        self.assertEqual(code, 0)
        config_path = out.strip()
        self.assertEqual(config_path, os.path.join(data, 'config.yaml'))

        code, out, err = run_cli('run', '--config', config_path)
        self.assertEqual(code, 0, err)
        self.assertTrue(out.startswith('Config '))
        self.assertTrue(os.path.isfile(
            os.path.join(data, 'output', MANIFEST_NAME)))

        code, _, err = run_cli('report', '--config', config_path,
                               '--output-dir', os.path.join(self.dir, 'new'))
        self.assertEqual(code, 2)
        self.assertEqual(last_json(err)['error'], 'PipelineDependencyError')

    def test_missing_config(self):
        code, _, err = run_cli(
            'run', '--config', os.path.join(self.dir, 'absent.yaml'))
        self.assertEqual(code, 2)
        self.assertEqual(last_json(err)['error'], 'ConfigException')

    def test_missing_input(self):
        config_path = os.path.join(self.dir, 'config.yaml')
        write_config(config_path, {'inputs': {
            'returns': 'returns.csv', 'headlines': 'headlines.jsonl',
            'calendar': 'calendar.jsonl'}})
        code, out, err = run_cli('ingest', '--config', config_path)

        self.assertEqual(code, 2)
        self.assertEqual(out, '')
        error = last_json(err)
        self.assertEqual(error['error'], 'ConfigException')
        self.assertIn('inputs.returns', error['message'])

    def test_unusable_backends(self):
        data = os.path.join(self.dir, 'data')
        run_cli('synth', '--output-dir', data)
        inputs = {'returns': 'returns.csv', 'headlines': 'headlines.jsonl',
                  'calendar': 'calendar.jsonl'}
        missing = os.path.join(self.dir, 'absent')
        for n, backend in enumerate((
                'replay://' + os.path.join(missing, 'responses.jsonl'),
                'mock://?lexicon=' + os.path.join(missing, 'lexicon.json'),
                'https://api.example.com/v1/chat/completions?rate=0')):
            config_path = os.path.join(data, 'backend{}.yaml'.format(n))
            write_config(config_path, {
                'inputs': inputs, 'scorer': {'backend': backend},
                'output_dir': 'out{}'.format(n)})
            code, _, err = run_cli('ingest', '--config', config_path)
            self.assertEqual(code, 0, err)

            code, out, err = run_cli('score', '--config', config_path)
            self.assertEqual(code, 2, backend)
            self.assertEqual(out, '')
            self.assertEqual(last_json(err)['error'], 'ConfigException')

    def test_invalid_override(self):
        code, _, err = run_cli('ingest', '--similarity-threshold', '2')
        self.assertEqual(code, 2)
        self.assertIn('similarity_threshold', last_json(err)['message'])


if __name__ == '__main__':
    main()
