"""
Functionals of a distribution pi and non-negative functions f on its states.

Everything here works in double precision; `LevelDistribution` and `LevelFunction` inputs are
accepted as well as plain arrays. Logarithms are natural and 0 log 0 = 0.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
from collections import namedtuple

import numpy as np
from scipy.special import xlogy

from matroidwalks.config import LINEAR_ALGEBRA_TOL
from matroidwalks.errors import InvalidArgument, InvalidDistribution, InvalidFunction, \
    InvalidKernel

logger = logging.getLogger('matroidwalks.functionals')

SpectralDecomposition = namedtuple('SpectralDecomposition',
                                   ['gap', 'second_eigenvalue', 'function', 'ratio', 'degenerate'])

MixingBounds = namedtuple('MixingBounds', ['spectral', 'log_sobolev', 'modified_log_sobolev'])


def _probabilities(pi):
    if hasattr(pi, 'stationary'):
        return pi.pi
    if hasattr(pi, 'as_float'):
        return pi.as_float
    return np.asarray(pi, dtype=float)


def _values(f):
    values = getattr(f, 'values', f)
    return np.asarray(values, dtype=float)


def _non_negative(f):
    values = _values(f)
    if np.any(values < 0):
        raise InvalidFunction('Function should be non-negative, got minimum {}'.format(
            values.min()))
    return values


def expectation(pi, f):
    return float(_probabilities(pi).dot(_values(f)))


def variance(pi, f):
    pi = _probabilities(pi)
    values = _values(f)
    mean = pi.dot(values)
    return float(pi.dot((values - mean) ** 2))


def entropy(pi, f):
    """
    Ent_pi(f) = E(f log f) - E(f) log E(f), for non-negative f.
    """
    pi = _probabilities(pi)
    values = _non_negative(f)
    mean = pi.dot(values)
    mean_term = xlogy(mean, mean)
    # Clipped at zero, the difference of two nearly equal terms can be -1e-17
    return max(float(pi.dot(xlogy(values, values)) - mean_term), 0.0)


def _check_reversible(kernel):
    if not kernel.reversible:
        raise InvalidKernel('Dirichlet forms are only defined for reversible kernels here, '
                            'got {!r}'.format(kernel))


def _dirichlet_matrix(pi, matrix, f, g):
    return float((pi * f).dot(g - matrix.dot(g)))


def _dirichlet_symmetric(pi, matrix, f, g):
    flows = pi[:, np.newaxis] * matrix
    df = f[:, np.newaxis] - f[np.newaxis, :]
    dg = g[:, np.newaxis] - g[np.newaxis, :]
    return float(0.5 * (flows * df * dg).sum())


def dirichlet(kernel, f, g=None, form='matrix'):
    """
    E_P(f, g) = f^T diag(pi) (I - P) g.

    :param kernel: reversible `TransitionKernel`
    :param f: function on the states
    :param g: second function, defaults to `f`
    :param form: 'matrix' for the expression above or 'symmetric' for
        1/2 sum pi(x) P(x,y) (f(x) - f(y)) (g(x) - g(y))
    """
    _check_reversible(kernel)
    f = _values(f)
    g = f if g is None else _values(g)
    if form == 'matrix':
        return _dirichlet_matrix(kernel.pi, kernel.as_float, f, g)
    elif form == 'symmetric':
        return _dirichlet_symmetric(kernel.pi, kernel.as_float, f, g)
    raise InvalidArgument('Unknown Dirichlet form {!r}'.format(form))


def mlsc_ratio(kernel, f):
    """E(f, log f) / Ent(f), the ratio whose infimum is the modified log-Sobolev constant."""
    values = _non_negative(f)
    ent = entropy(kernel, values)
    if ent == 0:
        raise InvalidFunction('Ratio is undefined for functions with zero entropy')
    with np.errstate(divide='ignore'):
        logs = np.log(values)
    if np.any(values == 0):
        # log f is unbounded at zeros
        return float('inf')
    return dirichlet(kernel, values, logs) / ent


def lsc_ratio(kernel, f):
    """E(sqrt f, sqrt f) / Ent(f), the ratio whose infimum is the log-Sobolev constant."""
    values = _non_negative(f)
    ent = entropy(kernel, values)
    if ent == 0:
        raise InvalidFunction('Ratio is undefined for functions with zero entropy')
    root = np.sqrt(values)
    return dirichlet(kernel, root, root) / ent


def kl_divergence(tau, pi):
    """
    D(tau || pi) = sum tau(x) log(tau(x) / pi(x)).
    """
    tau = _probabilities(tau)
    pi = _probabilities(pi)
    if abs(tau.sum() - 1) > 1e-9:
        raise InvalidDistribution('Distribution sums to {}, not 1'.format(tau.sum()))
    support = tau > 0
    assert np.all(pi[support] > 0), 'tau puts mass outside of the support of pi'
    return max(float((tau[support] * np.log(tau[support] / pi[support])).sum()), 0.0)


def total_variation(tau, pi):
    return float(0.5 * np.abs(_probabilities(tau) - _probabilities(pi)).sum())


def pinsker_holds(tau, pi, tol=1e-10):
    """2 ||tau - pi||_TV^2 <= D(tau || pi)"""
    return 2 * total_variation(tau, pi) ** 2 <= kl_divergence(tau, pi) + tol


def spectral_decomposition(kernel):
    """
    Spectral gap of a reversible kernel, together with the slowest eigenfunction and its
    variational ratio E(f, f) / Var(f).
    """
    _check_reversible(kernel)
    if len(kernel) == 1:
        logger.warning('Single-state chain, spectral gap taken to be 1')
        return SpectralDecomposition(1.0, 0.0, np.ones(1), float('nan'), True)

    eigenvalues, eigenvectors = np.linalg.eigh(kernel.symmetrized)
    second = eigenvalues[-2]
    function = eigenvectors[:, -2] / np.sqrt(kernel.pi)

    var = variance(kernel, function)
    ratio = dirichlet(kernel, function) / var if var > 0 else float('nan')
    gap = float(1 - second)
    if np.isfinite(ratio):
        assert abs(ratio - gap) <= 1e-8 * max(1.0, abs(gap)), \
            'Variational ratio {} differs from the spectral gap {}'.format(ratio, gap)
    return SpectralDecomposition(gap, float(second), function, ratio, False)


def spectral_gap(kernel):
    """
    1 minus the second largest eigenvalue of the kernel.
    """
    return spectral_decomposition(kernel).gap


def alpha_indicator_bound(pi):
    """
    min over states of 1 / -log pi(x), the log-Sobolev ratio bound from indicators.
    """
    pi = _probabilities(pi)
    pi = pi[pi > 0]
    if len(pi) < 2 or np.any(pi >= 1):
        raise InvalidArgument('Indicator bound needs a distribution over at least two states')
    return float((1.0 / -np.log(pi)).min())


def mixing_bounds(rate, pi_min, eps, gap=None, alpha=None):
    """
    Mixing time upper bounds from the three functional inequalities.

    :param rate: modified log-Sobolev constant (or a lower bound on it), e.g. 1/k for the
        k-th down-up walk
    :param pi_min: smallest stationary probability
    :param eps: total variation target
    :param gap: spectral gap, for the Poincare form
    :param alpha: log-Sobolev constant, for the log-Sobolev form
    :return: `MixingBounds`, fields are None when undefined
    """
    if not 0 < pi_min < 1:
        raise InvalidArgument('pi_min should be in (0, 1), got {!r}'.format(pi_min))
    if not 0 < eps < 1:
        raise InvalidArgument('eps should be in (0, 1), got {!r}'.format(eps))

    # Entropy forms need log log 1/pi_min > 0, i.e. pi_min < 1/e
    entropy_term = None
    if np.log(1 / pi_min) > 1:
        entropy_term = np.log(np.log(1 / pi_min)) + np.log(1 / (2 * eps ** 2))

    spectral = None
    if gap is not None and gap > 0:
        spectral = float((0.5 * np.log(1 / pi_min) + np.log(1 / (2 * eps))) / gap)

    log_sobolev = None
    if alpha is not None and alpha > 0 and entropy_term is not None:
        log_sobolev = float(entropy_term / (4 * alpha))

    modified = None
    if rate is not None and rate > 0 and entropy_term is not None:
        modified = float(entropy_term / rate)

    return MixingBounds(spectral, log_sobolev, modified)


def mlsi_bound(k, pi_min, eps):
    """
    k (log log 1/pi_min + log 1/(2 eps^2)), None when pi_min >= 1/e.
    """
    return mixing_bounds(1.0 / k, pi_min, eps).modified_log_sobolev


def density(tau, pi):
    """D^{-1} tau, the function whose entropy under pi is D(tau || pi)."""
    tau = _probabilities(tau)
    pi = _probabilities(pi)
    ans = np.zeros_like(tau)
    positive = pi > 0
    ans[positive] = tau[positive] / pi[positive]
    return ans


def identity_holds(lhs, rhs, tol=LINEAR_ALGEBRA_TOL):
    return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))
