#!/usr/bin/python3
# -*- coding: utf-8 -*-
"""
Example script: generate the synthetic corpus, run every command with the
offline lexicon scorer and print the report.
"""
import logging
import os
import sys
import tempfile

from headlinesignal.config import RunConfig
from headlinesignal.pipeline import Pipeline
from headlinesignal.synthetic import generate_corpus


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO)
    directory = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp()
    paths = generate_corpus(seed=0).write(directory)
    config = RunConfig({
        'inputs': paths,
        'scorer': {'backend': 'mock://'},
        'output_dir': os.path.join(directory, 'output'),
    })
    pipeline = Pipeline(config)
    pipeline.run()
    with open(pipeline.artifact('report.txt')) as fp:
        print(fp.read())
    print('artifacts in', pipeline.output_dir)
