"""
Command line interface.

    python -m headlinesignal synth --output-dir data
    python -m headlinesignal run --config data/config.yaml

Exit code 0 on success. Failures print a one-line JSON object
`{"error": ..., "message": ...}` to stderr and exit with 2 for
configuration and ordering errors, 1 otherwise.
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from . import __version__
from .config import load_config, write_config
from .exceptions import (
    ConfigException, HeadlineSignalException, PipelineDependencyError)
from .pipeline import COMMANDS, Pipeline
from .synthetic import (
    DEFAULT_DAYS, DEFAULT_FIRMS, DEFAULT_HEADLINES, generate_corpus)

logger = logging.getLogger('headlinesignal.cli')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML run configuration')
    common.add_argument('--output-dir', help='overrides output_dir')
    common.add_argument('--jobs', type=int, help='scoring worker threads')
    common.add_argument('--seed', type=int, help='overrides seed')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='INFO logging; twice for DEBUG')
    common.add_argument('--quiet', action='store_true',
                        help='warnings and errors only')

    parser = argparse.ArgumentParser(
        prog='headlinesignal',
        description='Score news headlines with a language model and test '
                    'whether the scores predict next-day stock returns.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    synth = commands.add_parser(
        'synth', parents=[common],
        help='write a seeded synthetic corpus and a config for it')
    synth.add_argument('--firms', type=int, default=DEFAULT_FIRMS)
    synth.add_argument('--days', type=int, default=DEFAULT_DAYS)
    synth.add_argument('--headlines', type=int, default=DEFAULT_HEADLINES)

    helps = {
        'ingest': 'filter and deduplicate headlines, filter returns',
        'score': 'score the kept headlines',
        'signal': 'build firm-day signals and the return panel',
        'regress': 'estimate the fixed-effect regressions',
        'backtest': 'form the long-short portfolios',
        'report': 'render the report and finish the manifest',
        'run': 'all of the above in order',
    }
    for name in COMMANDS + ('run',):
        sub = commands.add_parser(name, parents=[common], help=helps[name])
        if name in ('ingest', 'run'):
            sub.add_argument('--similarity-threshold', type=float)
            sub.add_argument('--dedup-day', choices=('effective', 'calendar'))
    return parser


def configure_logging(verbose: int = 0, quiet: bool = False):
    if quiet:
        level = logging.WARNING
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def _overrides(args) -> dict:
    output_dir = args.output_dir
    if output_dir is not None:
        output_dir = os.path.abspath(output_dir)
    return {
        'output_dir': output_dir,
        'jobs': args.jobs,
        'seed': args.seed,
        'ingest': {
            'similarity_threshold': getattr(
                args, 'similarity_threshold', None),
            'dedup_day': getattr(args, 'dedup_day', None),
        },
    }


def cmd_synth(args, config) -> str:
    directory = config.output_dir
    corpus = generate_corpus(
        seed=config.seed, n_firms=args.firms, n_days=args.days,
        n_headlines=args.headlines)
    paths = corpus.write(directory)
    config_path = os.path.join(directory, 'config.yaml')
    write_config(config_path, {
        'inputs': {name: os.path.basename(path)
                   for name, path in sorted(paths.items())},
        'scorer': {'backend': 'mock://'},
        'output_dir': 'output',
        'seed': config.seed,
        'run': {'timestamp': '2000-01-01T00:00:00+00:00'},
    })
    return config_path


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        config = load_config(args.config).override(_overrides(args))
        if args.command == 'synth':
            print(cmd_synth(args, config))
            return EXIT_OK
        pipeline = Pipeline(config)
        if args.command == 'run':
            pipeline.run()
        else:
            getattr(pipeline, 'cmd_' + args.command)()
        if args.command in ('report', 'run'):
            with open(pipeline.artifact('report.txt'),
                      encoding='utf-8') as fp:
                sys.stdout.write(fp.read())
        return EXIT_OK
    except (HeadlineSignalException, OSError) as exc:
        logger.debug('failed', exc_info=True)
        sys.stderr.write(json.dumps({
            'error': exc.__class__.__name__, 'message': str(exc)}) + '\n')
        if isinstance(exc, (ConfigException, PipelineDependencyError)):
            return EXIT_USAGE
        return EXIT_FAILURE
