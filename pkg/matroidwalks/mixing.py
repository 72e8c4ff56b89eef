from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
from collections import namedtuple
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np

from matroidwalks.config import DEFAULT_EPSILON, MAX_EXACT_TIE_STATES, MAX_LEVEL_SIZE
from matroidwalks.errors import InvalidArgument, SizeCapExceeded
from matroidwalks.functionals import mixing_bounds

logger = logging.getLogger('matroidwalks.mixing')

MixingResult = namedtuple('MixingResult', ['epsilon', 'exact_t', 'bound_t', 'worst_start', 'error'])

# P^(2^60) not within eps means the chain is not mixing
MAX_DOUBLINGS = 60


def _row_distances(power, pi):
    return 0.5 * np.abs(power - pi[np.newaxis, :]).sum(axis=1)


def distance_to_stationarity(kernel, t):
    """
    max over starting states x of ||P^t(x, .) - pi||_TV
    """
    power = np.linalg.matrix_power(kernel.as_float, int(t))
    return float(_row_distances(power, kernel.pi).max())


def _bound(kernel, eps):
    rate = kernel.guaranteed_rate
    pi_min = kernel.pi[kernel.pi > 0].min()
    if rate is None or not 0 < pi_min < 1 or not 0 < eps < 1:
        return None
    return mixing_bounds(float(rate), pi_min, eps).modified_log_sobolev


def _exact_distances(kernel, t):
    """
    ||P^t(x, .) - pi||_TV for every x in rational arithmetic, through the integer matrix
    D P with D the common denominator of the entries.
    """
    matrix = kernel.matrix
    denominator = reduce(lambda a, b: a * b // gcd(a, b),
                         (Fraction(v).denominator for v in matrix.flat), 1)
    integers = np.array([[int(Fraction(v) * denominator) for v in row] for row in matrix],
                        dtype=object)

    power = np.identity(len(kernel), dtype=int).astype(object)
    base, exponent = integers, int(t)
    while exponent:
        if exponent & 1:
            power = power.dot(base)
        exponent >>= 1
        if exponent:
            base = base.dot(base)

    scale = denominator ** int(t)
    pi = [Fraction(p) for p in kernel.stationary.probabilities]
    return [sum((abs(Fraction(int(entry), scale) - p) for entry, p in zip(row, pi)),
                Fraction(0)) / 2 for row in power]


def _settle_exactly(kernel, eps, t):
    """
    Moves the float answer t to the exact one, using that the distance is non-increasing in t.
    """
    target = Fraction(eps)
    distances = _exact_distances(kernel, t)
    while max(distances) > target:
        t += 1
        distances = _exact_distances(kernel, t)
    while t > 0:
        below = _exact_distances(kernel, t - 1)
        if max(below) > target:
            break
        t, distances = t - 1, below
    return t, int(np.argmax([float(d) for d in distances]))


def exact_mixing_time(kernel, eps=DEFAULT_EPSILON):
    """
    Smallest t with max_x ||P^t(x, .) - pi||_TV <= eps.

    Powers P^(2^j) are squared up until they are within eps, then t is assembled bit by bit
    from the highest one down. Rounding is tracked as a running bound on the entrywise error.

    :param kernel: `TransitionKernel`
    :param eps: total variation target
    :return: `MixingResult`; `exact_t` is None when the chain does not get within eps
    """
    if eps <= 0:
        raise InvalidArgument('eps should be positive, got {!r}'.format(eps))
    if len(kernel) > MAX_LEVEL_SIZE:
        raise SizeCapExceeded('Exact mixing time is limited to {:,} states, got {:,}'.format(
            MAX_LEVEL_SIZE, len(kernel)))

    pi = kernel.pi
    n_states = len(kernel)
    bound_t = _bound(kernel, eps)
    unit_error = n_states * np.finfo(float).eps

    distances = _row_distances(np.eye(n_states), pi)
    if eps >= 1 or distances.max() <= eps:
        return MixingResult(eps, 0, bound_t, int(distances.argmax()), 0.0)

    powers = [kernel.as_float]
    errors = [unit_error]
    while _row_distances(powers[-1], pi).max() > eps:
        if len(powers) > MAX_DOUBLINGS:
            logger.warning('{!r} is not within {} of stationarity after 2^{} steps'.format(
                kernel, eps, MAX_DOUBLINGS))
            return MixingResult(eps, None, bound_t, None, errors[-1])
        powers.append(powers[-1].dot(powers[-1]))
        errors.append(2 * errors[-1] + unit_error)

    # Largest t with distance still above eps, assembled from the powers
    current = np.eye(n_states)
    error = 0.0
    t = 0
    for j in range(len(powers) - 1, -1, -1):
        candidate = current.dot(powers[j])
        if _row_distances(candidate, pi).max() > eps:
            current = candidate
            error += errors[j] + unit_error
            t += 2 ** j

    final = current.dot(powers[0])
    distances = _row_distances(final, pi)
    error += errors[0] + unit_error

    _extras = dict(kernel=repr(kernel), eps=eps, t=t + 1, distance=distances.max(), error=error)
    logger.debug('Mixing time of {kernel} at eps={eps}: {t} (distance {distance}, '
                 'rounding error up to {error})'.format(**_extras), extra=_extras)
    tolerance = n_states * error
    previous = _row_distances(current, pi).max()
    if abs(distances.max() - eps) > tolerance and abs(previous - eps) > tolerance:
        return MixingResult(eps, t + 1, bound_t, int(distances.argmax()), error)

    if kernel.exact and n_states <= MAX_EXACT_TIE_STATES:
        exact_t, worst = _settle_exactly(kernel, eps, t + 1)
        _extras = dict(kernel=repr(kernel), eps=eps, float_t=t + 1, exact_t=exact_t)
        logger.debug('Settled near tie of {kernel} at eps={eps} exactly: {float_t} -> {exact_t}'
                     .format(**_extras), extra=_extras)
        return MixingResult(eps, exact_t, bound_t, worst, 0.0)

    logger.warning('Distance {} at t={} is within rounding error of eps={}'.format(
        distances.max(), t + 1, eps))
    return MixingResult(eps, t + 1, bound_t, int(distances.argmax()), error)
