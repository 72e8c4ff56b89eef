"""
Multi-restart infimum searches for the modified log-Sobolev constant rho(P) and the
log-Sobolev constant alpha(P) of a reversible kernel.

The search parametrises f = exp(x) renormalised to E_pi f = 1 and minimises the ratio with
L-BFGS-B and its closed-form gradient. Any value it reports is the ratio at an actual
function, hence an upper bound on the constant.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
import multiprocessing
import os
import time
from collections import namedtuple
from contextlib import contextmanager

import numpy as np
import pandas as pd
from scipy.optimize import minimize
from scipy.special import logsumexp, xlogy

from matroidwalks.config import BLAS_THREAD_VARIABLES, DEFAULT_RESTARTS, OPTIMIZER_TOL, \
    n_workers
from matroidwalks.errors import InvalidArgument, InvalidParameters
from matroidwalks.functionals import _check_reversible, alpha_indicator_bound, lsc_ratio, \
    mlsc_ratio, spectral_decomposition
from matroidwalks.random_initialisation import normalized_exponential, restart_points
from matroidwalks.walks import LevelFunction

logger = logging.getLogger('matroidwalks.constant_search')

MLSC = 'mlsc'
LSC = 'lsc'

# Ratios are not defined at constant functions
_ENTROPY_FLOOR = 1e-12
_PENALTY = 1e6
_LOG_BOUND = 60.0
_DEFAULT_MAXITER = 500
SANDWICH_SLACK = 0.05

FunctionalReport = namedtuple('FunctionalReport', ['value', 'witness', 'restarts', 'converged'])


def _energy(pi, matrix, g):
    """diag(pi)(I - P) g, symmetric for reversible P."""
    return pi * (g - matrix.dot(g))


def _objective(x, pi, matrix, kind):
    """
    Ratio at f = exp(x) / E_pi exp(x) and its gradient in x.

    With h = f * dR/df the gradient is h - pi f sum(h), the second term coming from the
    normalisation. Both ratios are invariant under scaling f, so the gradient sums to zero.
    """
    support = pi > 0
    log_f = x - logsumexp(x[support] + np.log(pi[support]))
    f = np.exp(log_f)
    mean = pi.dot(f)
    ent = float(pi.dot(xlogy(f, f)) - xlogy(mean, mean))
    if ent < _ENTROPY_FLOOR:
        return _PENALTY, np.zeros_like(x)

    if kind == MLSC:
        energy_log = _energy(pi, matrix, log_f)
        numerator = float(f.dot(energy_log))
        numerator_term = f * energy_log + _energy(pi, matrix, f)
    else:
        root = np.sqrt(f)
        energy_root = _energy(pi, matrix, root)
        numerator = float(root.dot(energy_root))
        numerator_term = root * energy_root

    ratio = numerator / ent
    entropy_term = pi * f * (log_f - np.log(mean))
    h = (numerator_term - ratio * entropy_term) / ent
    return ratio, h - pi * f * h.sum()


def _initializer(pi, matrix, kind, maxiter):
    global g_pi, g_matrix, g_kind, g_maxiter

    g_pi = pi
    g_matrix = matrix
    g_kind = kind
    g_maxiter = maxiter


def _map_function(x0, pi, matrix, kind, maxiter):
    initial, _ = _objective(x0, pi, matrix, kind)
    result = minimize(_objective, x0, args=(pi, matrix, kind), method='L-BFGS-B', jac=True,
                      bounds=[(-_LOG_BOUND, _LOG_BOUND)] * len(x0),
                      options=dict(maxiter=maxiter))

    if result.fun < initial:
        return float(result.fun), result.x, bool(result.success)
    return float(initial), x0, bool(result.success)


def _globalised_map_function(x0):
    global g_pi, g_matrix, g_kind, g_maxiter

    return _map_function(x0, g_pi, g_matrix, g_kind, g_maxiter)


@contextmanager
def _single_threaded_blas():
    """
    Environment in which freshly started workers load numpy with one BLAS thread each.
    """
    saved = dict((name, os.environ.get(name)) for name in BLAS_THREAD_VARIABLES)
    os.environ.update((name, '1') for name in BLAS_THREAD_VARIABLES)
    try:
        yield
    finally:
        for name, value in saved.items():
            if value is None:
                del os.environ[name]
            else:
                os.environ[name] = value


def _search(kernel, kind, restarts, random_state, n_jobs, maxiter):
    _check_reversible(kernel)
    if restarts < 1:
        raise InvalidParameters('Need at least one restart, got {}'.format(restarts))
    if len(kernel) < 2:
        raise InvalidArgument('Infimum search needs at least two states')

    pi = kernel.pi
    matrix = kernel.as_float
    slow_direction = spectral_decomposition(kernel).function
    points = restart_points(pi, restarts, slow_direction=slow_direction,
                            random_state=random_state)

    n_jobs = n_workers(n_jobs)
    start = time.time()
    if n_jobs > 1:
        # Spawned rather than forked, so that the workers pick up the BLAS thread cap
        context = multiprocessing.get_context('spawn')
        with _single_threaded_blas():
            pool = context.Pool(processes=n_jobs,
                                initializer=_initializer,
                                initargs=(pi, matrix, kind, maxiter))
        try:
            results = pool.map(_globalised_map_function, points)
        finally:
            pool.close()
    else:
        # Do not spawn an extra process
        results = [_map_function(x0, pi, matrix, kind, maxiter) for x0 in points]

    best_value, best_x, best_converged = None, None, None
    for value, x, converged in results:
        if best_value is None or value < best_value:
            best_value, best_x, best_converged = value, x, converged

    witness = LevelFunction(kernel.level, kernel.states, normalized_exponential(best_x, pi),
                            normalized=True)
    ratio = mlsc_ratio if kind == MLSC else lsc_ratio
    value = ratio(kernel, witness)

    _extras = dict(kind=kind, kernel=repr(kernel), restarts=restarts, value=value,
                   converged=best_converged, duration=time.time() - start)
    logger.debug('Search {kind} on {kernel}: {value} after {restarts} restarts. '
                 'Converged: {converged}. Took: {duration:.2f} seconds'.format(**_extras),
                 extra=_extras)

    return FunctionalReport(value, witness, restarts, best_converged)


def estimate_mlsc(kernel, restarts=DEFAULT_RESTARTS, random_state=None, n_jobs=None,
                  maxiter=_DEFAULT_MAXITER):
    """
    Upper estimate of rho(P) = inf E(f, log f) / Ent(f).

    :param kernel: reversible `TransitionKernel`
    :param restarts: number of starting points
    :param random_state: seed of the random starting points
    :param n_jobs: worker processes, capped by MW_THREADS
    :param maxiter: iteration budget of each local descent
    :return: `FunctionalReport`
    """
    return _search(kernel, MLSC, restarts, random_state, n_jobs, maxiter)


def estimate_lsc(kernel, restarts=DEFAULT_RESTARTS, random_state=None, n_jobs=None,
                 maxiter=_DEFAULT_MAXITER):
    """
    Upper estimate of alpha(P) = inf E(sqrt f, sqrt f) / Ent(f).
    """
    return _search(kernel, LSC, restarts, random_state, n_jobs, maxiter)


def sandwich_report(kernel, restarts=DEFAULT_RESTARTS, random_state=None, n_jobs=None,
                    slack=SANDWICH_SLACK):
    """
    Spectral gap next to the searched rho and alpha, with the 2 lambda >= rho >= 4 alpha
    consistency flags. A failed flag points at an incomplete search.
    """
    gap = spectral_decomposition(kernel).gap
    rho = estimate_mlsc(kernel, restarts=restarts, random_state=random_state, n_jobs=n_jobs)
    alpha = estimate_lsc(kernel, restarts=restarts, random_state=random_state, n_jobs=n_jobs)
    indicator_bound = alpha_indicator_bound(kernel.stationary)

    report = pd.Series([gap, rho.value, alpha.value, indicator_bound,
                        rho.value <= 2 * gap + slack,
                        4 * alpha.value <= rho.value + slack,
                        alpha.value <= indicator_bound + OPTIMIZER_TOL,
                        rho.converged and alpha.converged],
                       index=['lambda', 'rho_hat', 'alpha_hat', 'alpha_indicator_bound',
                              'rho_below_twice_lambda', 'four_alpha_below_rho',
                              'alpha_below_indicator_bound', 'converged'])

    if not (report['rho_below_twice_lambda'] and report['four_alpha_below_rho']):
        logger.warning('Sandwich inequality off by more than {} on {!r}: lambda={}, rho={}, '
                       'alpha={}'.format(slack, kernel, gap, rho.value, alpha.value))
    return report
