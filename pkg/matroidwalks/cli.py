from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import argparse
import io
import json
import logging
import sys
from fractions import Fraction

import pandas as pd

from matroidwalks.catalog import build_instance, catalog_names
from matroidwalks.config import DEFAULT_EPSILON, DEFAULT_RANDOM_FUNCTIONS, DEFAULT_RESTARTS, \
    ENTROPY_TOL, FORMATS, SUITES, ExperimentConfig
from matroidwalks.errors import MatroidWalksError, SizeCapExceeded
from matroidwalks.suites import run_suite

logger = logging.getLogger('matroidwalks.cli')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_SIZE_CAP = 3

CATALOG = 'catalog'


def _serialisable(value):
    if isinstance(value, Fraction):
        return '{}/{}'.format(value.numerator, value.denominator)
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, default=_serialisable)
    return value


def _serialisable_table(table):
    table = table.copy()
    for column in table.columns:
        if table[column].dtype == object:
            table[column] = table[column].map(_serialisable)
    return table


def render(table, format):
    table = _serialisable_table(table)
    if format == 'csv':
        return table.to_csv(index=False)
    return table.to_json(orient='records', double_precision=15) + '\n'


def run(config):
    """
    Runs one suite on one instance, or on every bundled instance for `--matroid catalog`, and
    writes the report.

    :return: tuple of the exit status and the report table
    """
    if config.suite == 'theta-scan':
        names = [None]
    elif config.matroid == CATALOG:
        names = catalog_names()
    else:
        names = [config.matroid]

    frames = []
    passed = True
    for name in names:
        wc = build_instance(name) if name is not None else None
        result = run_suite(config, wc)
        table = result.table.copy()
        table.insert(0, 'matroid', name if name is not None else 'theta-family')
        frames.append(table)
        passed = passed and result.passed
        logger.info('{} on {}: {}'.format(config.suite, name, 'passed' if result.passed
                                          else 'FAILED'))

    table = pd.concat(frames, ignore_index=True, sort=False)
    output = render(table, config.format)
    if config.out is None:
        sys.stdout.write(output)
    else:
        with io.open(config.out, 'w', encoding='utf-8') as handle:
            handle.write(output)

    return (EXIT_OK if passed else EXIT_FAILED), table


def _parser():
    parser = argparse.ArgumentParser(
        prog='matroidwalks',
        description='Checks on random walks over weighted matroid complexes')
    parser.add_argument('--matroid',
                        help='descriptor path, bundled instance name or "catalog" for all of '
                             'them ({})'.format(', '.join(catalog_names())))
    parser.add_argument('--suite', required=True, choices=SUITES)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--restarts', type=int, default=DEFAULT_RESTARTS)
    parser.add_argument('--eps', type=float, default=DEFAULT_EPSILON)
    parser.add_argument('--tol', type=float, default=ENTROPY_TOL)
    parser.add_argument('--random-functions', type=int, default=DEFAULT_RANDOM_FUNCTIONS)
    parser.add_argument('--out')
    parser.add_argument('--format', choices=FORMATS, default='csv')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    return parser


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK

    logging.basicConfig()
    if args.verbose >= 2:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.verbose == 1:
        logging.getLogger().setLevel(logging.INFO)

    try:
        config = ExperimentConfig(args.suite, matroid=args.matroid, seed=args.seed,
                                  restarts=args.restarts, eps=args.eps, tol=args.tol,
                                  out=args.out, format=args.format,
                                  random_functions=args.random_functions)
        status, _ = run(config)
    except SizeCapExceeded as e:
        logger.error(str(e))
        return EXIT_SIZE_CAP
    except (MatroidWalksError, ValueError, KeyError, IOError) as e:
        logger.error(str(e))
        return EXIT_INVALID
    return status
