from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import numpy as np
from scipy.special import logsumexp

from matroidwalks.errors import InvalidArgument

# Starting points of the infimum search
SPECTRAL_STEP = 1e-3
INDICATOR_HEIGHT = 40.0
RANDOM_SCALE_DOMAIN = (0.5, 3.0)


def _random_scales(random, bounds, size):
    """
    Draws `size` amplitudes for the Gaussian restarts, uniformly between `bounds`.
    The log-space directions get rescaled by these before normalisation.
    """
    low, high = bounds
    if not low < high:
        raise InvalidArgument('Empty amplitude range {!r}'.format(bounds))
    return random.uniform(low, high, size=size)


def normalized_exponential(x, pi):
    """
    f = exp(x) scaled so that E_pi f = 1, computed in log space.
    """
    pi = np.asarray(pi, dtype=float)
    support = pi > 0
    log_mean = logsumexp(x[support] + np.log(pi[support]))
    return np.exp(x - log_mean)


def random_level_function_generator(pi, random_state=None):
    """
    Returns a generator of non-negative functions with E_pi f = 1, drawn as exponentials of
    i.i.d. standard normals and then normalised.

    :param pi: distribution over the states, as an array
    :param random_state: random seed
    """
    pi = np.asarray(pi, dtype=float)
    random = np.random.RandomState(random_state)
    while True:
        yield normalized_exponential(random.randn(len(pi)), pi)


def random_distribution_generator(n_states, random_state=None):
    """
    Returns a generator of distributions over `n_states` states, as exponentials of standard
    normals normalised to sum to one.
    """
    random = np.random.RandomState(random_state)
    while True:
        weights = np.exp(random.randn(n_states))
        yield weights / weights.sum()


def random_point_generator(dimension, random_state=None):
    random = np.random.RandomState(random_state)
    while True:
        yield random.randn(dimension)


def restart_points(pi, n_restarts, slow_direction=None, random_state=None):
    """
    Starting points, in log space, for the restarts of the infimum search.

    The first ones are deterministic: a small step along the slowest spectral direction, then
    approximate indicators of the states in increasing order of stationary mass. The rest are
    standard normals scaled by a random factor.

    :param pi: stationary distribution as an array
    :param n_restarts: number of points to return
    :param slow_direction: eigenfunction of the second largest eigenvalue, if known
    :param random_state: random seed
    :return: list of arrays
    """
    pi = np.asarray(pi, dtype=float)
    n_states = len(pi)
    points = []

    if slow_direction is not None:
        direction = np.asarray(slow_direction, dtype=float)
        scale = np.abs(direction).max()
        if scale > 0:
            points.append(SPECTRAL_STEP * direction / scale)

    for state in np.argsort(pi, kind='mergesort'):
        if len(points) >= n_restarts // 2:
            break
        indicator = np.zeros(n_states)
        indicator[state] = INDICATOR_HEIGHT
        points.append(indicator)

    random = np.random.RandomState(random_state)
    while len(points) < n_restarts:
        scale = _random_scales(random, RANDOM_SCALE_DOMAIN, 1)[0]
        points.append(scale * random.randn(n_states))

    return points[:n_restarts]
