"""
Numerical checks of the entropy contraction of the up operators and of its consequences:
one step relative entropy decay of the walks, the chain rules of entropy over the levels and
the modified log-Sobolev bound of level-one link walks.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import itertools
import logging
from collections import namedtuple
from fractions import Fraction

import numpy as np
import pandas as pd
from cached_property import cached_property

from matroidwalks.bitmask import cardinality, format_mask
from matroidwalks.complex import conditional_distribution, contract, level_distribution, \
    pair_weight_matrix
from matroidwalks.config import DEFAULT_RANDOM_FUNCTIONS, DEFAULT_RESTARTS, ENTROPY_TOL, \
    OPTIMIZER_TOL, QUADRATIC_BOUND_TOL
from matroidwalks.constant_search import estimate_mlsc
from matroidwalks.errors import InvalidArgument, InvalidDistribution, InvalidFunction
from matroidwalks.functionals import density, entropy, expectation, identity_holds, \
    kl_divergence, pinsker_holds, spectral_gap, total_variation
from matroidwalks.random_initialisation import random_level_function_generator
from matroidwalks.walks import DOWN_UP, LevelFunction, down_operator, push_down_operator, \
    up_down_walk, up_operator

logger = logging.getLogger('matroidwalks.contraction')

InequalityCheck = namedtuple('InequalityCheck', ['lhs', 'rhs', 'passed'])
PdownCheck = namedtuple('PdownCheck', ['lhs', 'rhs', 'passed', 'expectation_preserved'])
OneStepCheck = namedtuple('OneStepCheck', ['lhs', 'rhs', 'passed', 'pdown_passed',
                                           'pinsker_passed'])
ChainRuleCheck = namedtuple('ChainRuleCheck', ['lhs', 'rhs', 'passed', 'mixture_identity',
                                               'sum_entropy_bound'])
PushDownCheck = namedtuple('PushDownCheck', ['deviation', 'passed', 'expectation_preserved',
                                             'measure_identity'])
LinkReport = namedtuple('LinkReport', ['search', 'passed', 'quadratic_max', 'quadratic_passed',
                                       'gap', 'gap_passed'])


def _values(f, size, level):
    if isinstance(f, LevelFunction):
        if f.level != level:
            raise InvalidFunction('Function lives on level {}, expecting {}'.format(f.level, level))
        f = f.values
    values = np.asarray(f, dtype=float)
    if len(values) != size:
        raise InvalidFunction('Got {} values for {} states'.format(len(values), size))
    if np.any(values < 0):
        raise InvalidFunction('Function should be non-negative')
    return values


class LevelChecks(object):
    """
    Entropy identities and inequalities relating level k to the levels below it. Everything that
    does not depend on the tested function is computed once, so one instance can check many
    random functions.
    """

    def __init__(self, wc, k):
        if not 2 <= k <= wc.rank:
            raise InvalidArgument('Level checks are stated for 2 <= k <= r={}, got {}'.format(
                wc.rank, k))
        self.wc = wc
        self.k = k
        self._push_down_cache = {}

    @cached_property
    def pi(self):
        return level_distribution(self.wc, self.k)

    @cached_property
    def pi_lower(self):
        return level_distribution(self.wc, self.k - 1)

    @cached_property
    def pi_vertices(self):
        return level_distribution(self.wc, 1)

    @cached_property
    def up(self):
        """P-up_{k-1} as doubles."""
        return up_operator(self.wc, self.k - 1).as_float

    @cached_property
    def up_to_vertices(self):
        """P-up_1 ... P-up_{k-1} as doubles."""
        product = np.eye(len(self.pi))
        for level in range(self.k - 1, 0, -1):
            product = up_operator(self.wc, level).as_float.dot(product)
        return product

    def _decomposition(self, lower, size):
        mixture = np.empty(len(self.pi), dtype=object)
        mixture.fill(Fraction(0))
        conditionals = []
        for base, mass in zip(lower.states, lower.probabilities):
            conditional = conditional_distribution(self.wc, base, size)
            mixture = mixture + mass * conditional.probabilities
            conditionals.append(conditional.as_float)
        return np.array(conditionals), bool(np.all(mixture == self.pi.probabilities))

    @cached_property
    def link_decomposition(self):
        return self._decomposition(self.pi_lower, 1)

    @cached_property
    def vertex_decomposition(self):
        return self._decomposition(self.pi_vertices, self.k - 1)

    def entropy_contraction(self, f, tol=ENTROPY_TOL):
        """Ent_{pi_k}(f) >= k/(k-1) Ent_{pi_{k-1}}(P-up_{k-1} f)"""
        values = _values(f, len(self.pi), self.k)
        lhs = entropy(self.pi, values)
        rhs = self.k / (self.k - 1) * entropy(self.pi_lower, self.up.dot(values))
        return InequalityCheck(lhs, rhs, lhs >= rhs - tol)

    def _chain_rule(self, values, lower, pushed, decomposition, tol):
        conditionals, mixture_identity = decomposition
        local = sum(float(mass) * entropy(conditional, values)
                    for mass, conditional in zip(lower.probabilities, conditionals))
        lhs = entropy(self.pi, values)
        rhs = local + entropy(lower, pushed)
        return ChainRuleCheck(lhs, rhs, abs(lhs - rhs) <= tol, mixture_identity,
                              local >= lhs / self.k - tol)

    def chain_rule(self, f, tol=ENTROPY_TOL):
        """
        Ent_{pi_k}(f) = sum over K in M(k-1) of pi_{k-1}(K) Ent_{pi_{K,1}}(f)
        + Ent_{pi_{k-1}}(f^(k-1)), with pi_k = sum pi_{k-1}(K) pi_{K,1} exactly.
        """
        values = _values(f, len(self.pi), self.k)
        return self._chain_rule(values, self.pi_lower, self.up.dot(values),
                                self.link_decomposition, tol)

    def vertex_chain_rule(self, f, tol=ENTROPY_TOL):
        """
        Ent_{pi_k}(f) = sum over v of pi_1(v) Ent_{pi_{v,k-1}}(f) + Ent_{pi_1}(f^(1)), with
        pi_k = sum pi_1(v) pi_{v,k-1} exactly.
        """
        values = _values(f, len(self.pi), self.k)
        return self._chain_rule(values, self.pi_vertices, self.up_to_vertices.dot(values),
                                self.vertex_decomposition, tol)

    def _push_down_matrices(self, i):
        """
        f^(i) as a matrix product and through the conditional expectations E_{pi_{J,k-i}} f.
        """
        if not 1 <= i <= self.k - 1:
            raise InvalidArgument('Push down from level {} needs 1 <= i <= {}, got {}'.format(
                self.k, self.k - 1, i))
        if i not in self._push_down_cache:
            product = push_down_operator(self.wc, self.k, i).as_float
            conditionals = np.array([conditional_distribution(self.wc, mask, self.k - i).as_float
                                     for mask in self.wc.level(i)])
            self._push_down_cache[i] = product, conditionals, level_distribution(self.wc, i)
        return self._push_down_cache[i]

    @cached_property
    def down(self):
        """P-down_k as doubles."""
        return down_operator(self.wc, self.k).as_float

    def push_down(self, f, i, tol=ENTROPY_TOL):
        """
        f^(i)(J) = E_{pi_{J,k-i}} f pointwise, E_{pi_i} f^(i) = E_{pi_k} f, and for i = k-1 the
        measure identity pi_{k-1} f^(k-1) = (pi_k f)^T P-down_k.
        """
        values = _values(f, len(self.pi), self.k)
        product, conditionals, pi_i = self._push_down_matrices(i)
        pushed = product.dot(values)
        deviation = float(np.abs(pushed - conditionals.dot(values)).max())
        preserved = abs(expectation(pi_i, pushed) - expectation(self.pi, values)) <= tol

        measure = True
        if i == self.k - 1:
            upper = self.pi.as_float * values
            measure = bool(np.abs(pi_i.as_float * pushed - upper.dot(self.down)).max() <= tol)
        return PushDownCheck(deviation, deviation <= tol, preserved, measure)


def verify_entropy_contraction(wc, k, f, tol=ENTROPY_TOL):
    """
    Ent_{pi_k}(f) >= k/(k-1) Ent_{pi_{k-1}}(f^(k-1)) where f^(k-1) = P-up_{k-1} f.

    :return: `InequalityCheck` with lhs the entropy at level k
    """
    return LevelChecks(wc, k).entropy_contraction(f, tol=tol)


def verify_chain_rule(wc, k, f, tol=ENTROPY_TOL):
    return LevelChecks(wc, k).chain_rule(f, tol=tol)


def verify_vertex_decomposition(wc, k, f, tol=ENTROPY_TOL):
    return LevelChecks(wc, k).vertex_chain_rule(f, tol=tol)


def verify_push_down(wc, f, i, tol=ENTROPY_TOL):
    return LevelChecks(wc, f.level).push_down(f, i, tol=tol)


def _pdown_check(down, pi_upper, pi_lower, values, tol):
    lifted = down.dot(values)
    lhs = entropy(pi_upper, lifted)
    rhs = entropy(pi_lower, values)
    preserved = identity_holds(expectation(pi_upper, lifted), expectation(pi_lower, values))
    return PdownCheck(lhs, rhs, lhs <= rhs + tol, preserved)


def verify_pdown_entropy(wc, k, f, tol=ENTROPY_TOL):
    """
    Ent_{pi_k}(P-down_k f) <= Ent_{pi_{k-1}}(f) for f on M(k-1), with
    E_{pi_k} P-down_k f = E_{pi_{k-1}} f.
    """
    if not 2 <= k <= wc.rank:
        raise InvalidArgument('Down operator entropy check needs 2 <= k <= r={}, got {}'.format(
            wc.rank, k))
    pi_lower = level_distribution(wc, k - 1)
    values = _values(f, len(pi_lower), k - 1)
    return _pdown_check(down_operator(wc, k).as_float, level_distribution(wc, k), pi_lower,
                        values, tol)


def _check_distribution(kernel, tau):
    tau = np.asarray(tau, dtype=float)
    if len(tau) != len(kernel):
        raise InvalidDistribution('Distribution over {} states given for a kernel over {}'.format(
            len(tau), len(kernel)))
    if np.any(tau < 0) or abs(tau.sum() - 1) > 1e-9:
        raise InvalidDistribution('Not a distribution, sums to {}'.format(tau.sum()))
    return tau


def verify_one_step_kl(kernel, tau, tol=ENTROPY_TOL):
    """
    D(P^T tau || pi) <= (1 - rate) D(tau || pi) for a walk built from a weighted complex,
    with rate 1/k for the down-up walk on M(k) and 1/(k+1) for the up-down walk.

    The intermediate step, that the down operator does not increase entropy, and Pinsker's
    inequality on both distributions are checked along the way.
    """
    tau = _check_distribution(kernel, tau)
    pi = kernel.pi
    evolved = kernel.as_float.T.dot(tau)

    lhs = kl_divergence(evolved, pi)
    rhs = (1 - float(kernel.guaranteed_rate)) * kl_divergence(tau, pi)

    first, second = kernel.factors
    h = density(tau, pi)
    if kernel.walk == DOWN_UP:
        # P = P-down_k P-up_{k-1}, pi_{k-1} = pi_k P-down_k
        pdown = _pdown_check(first.as_float, pi, pi.dot(first.as_float), second.as_float.dot(h),
                             tol)
    else:
        # P = P-up_k P-down_{k+1}, pi_{k+1} = pi_k P-up_k
        pdown = _pdown_check(second.as_float, pi.dot(first.as_float), pi, h, tol)

    pinsker = pinsker_holds(tau, pi, tol) and pinsker_holds(evolved, pi, tol)
    return OneStepCheck(lhs, rhs, lhs <= rhs + tol,
                        pdown.passed and pdown.expectation_preserved, pinsker)


def quadratic_bound_check(wc, mask, n_functions=DEFAULT_RANDOM_FUNCTIONS, random_state=None):
    """
    f^T W_I f <= w(I) for random f with E_{pi_{I,1}} f = 1.

    :return: tuple of the largest f^T W_I f / w(I) seen (1 at f = 1) and the pass flag
    """
    weights = pair_weight_matrix(wc, mask)
    base_weight = float(weights.base_weight)
    pi = weights.element_weights.astype(float) / base_weight

    largest = weights.quadratic_form(np.ones(len(pi))) / base_weight
    generator = random_level_function_generator(pi, random_state=random_state)
    for f in itertools.islice(generator, n_functions):
        largest = max(largest, weights.quadratic_form(f) / base_weight)
    return largest, largest <= 1 + QUADRATIC_BOUND_TOL


def verify_link_mlsc(wc, mask, restarts=DEFAULT_RESTARTS, random_state=None, n_jobs=None,
                     n_functions=DEFAULT_RANDOM_FUNCTIONS):
    """
    Searches the modified log-Sobolev constant of the level-one up-down walk of the link of
    `mask`, expected to be at least 1/2, together with the quadratic bound on W_I and the
    link's spectral gap.
    """
    if not wc.is_independent(mask):
        raise InvalidArgument('{{{}}} is not independent'.format(format_mask(mask)))
    if cardinality(mask) > wc.rank - 2:
        raise InvalidArgument('Link walks need |I| <= r-2={}'.format(wc.rank - 2))

    link = up_down_walk(contract(wc, mask), 1)
    search = estimate_mlsc(link, restarts=restarts, random_state=random_state, n_jobs=n_jobs)
    quadratic_max, quadratic_passed = quadratic_bound_check(wc, mask, n_functions=n_functions,
                                                            random_state=random_state)
    gap = spectral_gap(link)

    report = LinkReport(search, search.value >= 0.5 - OPTIMIZER_TOL, quadratic_max,
                        quadratic_passed, gap, gap >= 0.5 - OPTIMIZER_TOL)
    if not report.passed:
        logger.warning('Link of {{{}}} has a searched rho of {} < 1/2'.format(
            format_mask(mask), search.value))
    return report


def kl_decay_trajectory(kernel, start, steps, tol=ENTROPY_TOL):
    """
    Relative entropy and total variation of the walk started at `start` over `steps` steps,
    next to the (1 - rate)^t log(1/pi(x0)) envelope.

    :return: DataFrame indexed by step
    """
    if start not in kernel.index:
        raise InvalidArgument('{!r} is not a state of {!r}'.format(start, kernel))

    pi = kernel.pi
    rate = float(kernel.guaranteed_rate)
    matrix = kernel.as_float
    tau = np.zeros(len(kernel))
    tau[kernel.index[start]] = 1.0
    initial = -np.log(pi[kernel.index[start]])

    rows = []
    previous = None
    for t in range(int(steps) + 1):
        kl = kl_divergence(tau, pi)
        tv = total_variation(tau, pi)
        contracted = previous is None or kl <= (1 - rate) * previous + tol
        rows.append((t, kl, (1 - rate) ** t * initial, np.exp(-t * rate) * initial, tv,
                     2 * tv ** 2 <= kl + tol, contracted))
        previous = kl
        tau = matrix.T.dot(tau)

    return pd.DataFrame(rows, columns=['t', 'kl', 'envelope', 'exponential_envelope', 'tv',
                                       'pinsker', 'contracted']).set_index('t')
