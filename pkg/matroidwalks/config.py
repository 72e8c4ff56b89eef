from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import os

from matroidwalks.errors import InvalidParameters

MAX_GROUND_SET = 30
MAX_LEVEL_SIZE = 20000
MAX_AXIOM_CHECK = 16
MAX_SCP_CHECK = 12
MAX_NCD_CHECK = 20
MAX_EXACT_TIE_STATES = 128

DEFAULT_RESTARTS = 200
DEFAULT_EPSILON = 0.25
DEFAULT_RANDOM_FUNCTIONS = 1000

# Tolerances
LINEAR_ALGEBRA_TOL = 1e-12
ENTROPY_TOL = 1e-10
OPTIMIZER_TOL = 1e-6
EIGENVALUE_TOL = 1e-9
QUADRATIC_BOUND_TOL = 1e-9
SPECTRAL_MATCH_TOL = 1e-9

TAIL_GRID_STEP = 0.25

THREADS_VARIABLE = 'MW_THREADS'
# Read by numpy's BLAS when a worker process starts
BLAS_THREAD_VARIABLES = ('OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS', 'MKL_NUM_THREADS')

SUITES = ('axioms', 'walks', 'constants', 'contraction', 'mixing', 'concentration',
          'slc', 'scp', 'theta-scan')
RANDOMISED_SUITES = frozenset(['walks', 'constants', 'contraction', 'slc'])
FORMATS = ('csv', 'json')


def n_workers(requested=None):
    """
    Number of worker processes to use, capped by the `MW_THREADS` environment variable.

    :param requested: number of workers the caller would like, defaults to the cap
    :return: at least one
    """
    cap = os.environ.get(THREADS_VARIABLE)
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise InvalidParameters('{} should be an integer, got {!r}'.format(THREADS_VARIABLE,
                                                                               cap))
    if requested is None:
        requested = cap if cap is not None else 1
    if cap is not None:
        requested = min(requested, cap)
    return max(1, int(requested))


class ExperimentConfig(object):
    """
    Settings of one CLI run.
    """

    def __init__(self, suite, matroid=None, seed=None, restarts=DEFAULT_RESTARTS,
                 eps=DEFAULT_EPSILON, tol=ENTROPY_TOL, out=None, format='csv',
                 random_functions=DEFAULT_RANDOM_FUNCTIONS):
        self.suite = suite
        self.matroid = matroid
        self.seed = seed
        self.restarts = restarts
        self.eps = eps
        self.tol = tol
        self.out = out
        self.format = format
        self.random_functions = random_functions

        self._validate()

    def _validate(self):
        if self.suite not in SUITES:
            raise InvalidParameters('Unknown suite {!r}, expecting one of {}'.format(
                self.suite, ', '.join(SUITES)))
        if self.suite in RANDOMISED_SUITES and self.seed is None:
            raise InvalidParameters('Suite {!r} is randomised and needs --seed'.format(self.suite))
        if self.matroid is None and self.suite != 'theta-scan':
            raise InvalidParameters('Suite {!r} needs --matroid'.format(self.suite))
        if self.restarts < 1:
            raise InvalidParameters('Need at least one restart, got {}'.format(self.restarts))
        if not (0 < self.eps):
            raise InvalidParameters('eps should be positive, got {!r}'.format(self.eps))
        if self.tol < 0:
            raise InvalidParameters('tol should be non-negative, got {!r}'.format(self.tol))
        if self.format not in FORMATS:
            raise InvalidParameters('Unknown format {!r}'.format(self.format))

    def as_dict(self):
        return dict(suite=self.suite, matroid=self.matroid, seed=self.seed,
                    restarts=self.restarts, eps=self.eps, tol=self.tol, format=self.format,
                    random_functions=self.random_functions)
