from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
from collections import namedtuple
from fractions import Fraction

import numpy as np
import pandas as pd
from cached_property import cached_property
from scipy.stats import norm

from matroidwalks.bitmask import cardinality, elements_of, format_mask
from matroidwalks.complex import LevelDistribution, conditional_distribution, level_distribution
from matroidwalks.config import LINEAR_ALGEBRA_TOL, MAX_LEVEL_SIZE
from matroidwalks.errors import InvalidArgument, InvalidFunction, InvalidState, SizeCapExceeded

UP_DOWN = 'up-down'
DOWN_UP = 'down-up'
LINK = 'link'
WALKS = (UP_DOWN, DOWN_UP)

FrequencyCheck = namedtuple('FrequencyCheck', ['frequencies', 'expected', 'multiplier', 'excess',
                                               'passed'])


def _zeros(rows, columns):
    matrix = np.empty((rows, columns), dtype=object)
    matrix.fill(Fraction(0))
    return matrix


def _check_size(*sizes):
    for size in sizes:
        if size > MAX_LEVEL_SIZE:
            raise SizeCapExceeded('Refusing to materialise a matrix over {:,} states '
                                  '(cap {:,})'.format(size, MAX_LEVEL_SIZE))


class RectangularOperator(object):
    """
    Matrix mapping functions on level `target_level` to functions on level `source_level`.
    Rows are indexed by `rows` (subsets of size `source_level`), columns by `columns`.
    """

    def __init__(self, source_level, target_level, rows, columns, matrix):
        self.source_level = source_level
        self.target_level = target_level
        self.rows = rows
        self.columns = columns
        self.matrix = matrix

    @cached_property
    def as_float(self):
        return self.matrix.astype(float)

    def row_sums(self):
        return self.matrix.sum(axis=1)

    def apply(self, values):
        values = np.asarray(values)
        if values.dtype == object:
            return self.matrix.dot(values)
        return self.as_float.dot(values)

    def __repr__(self):
        return 'RectangularOperator(M({}) <- M({}), shape={})'.format(
            self.source_level, self.target_level, self.matrix.shape)


class TransitionKernel(object):
    """
    Row-stochastic matrix over one level together with its stationary distribution.

    Kernels built from a weighted complex hold exact rationals; `as_float` is the double
    precision view used by every spectral and functional computation.
    """

    def __init__(self, level, states, matrix, stationary, walk=None, complex=None,
                 guaranteed_rate=None):
        self._level = level
        self._states = list(states)
        self._matrix = np.asarray(matrix)
        self._stationary = stationary
        self._walk = walk
        self._complex = complex
        self._guaranteed_rate = guaranteed_rate

        if self._matrix.shape != (len(self._states), len(self._states)):
            raise InvalidArgument('Kernel of shape {} does not match {} states'.format(
                self._matrix.shape, len(self._states)))

    @classmethod
    def from_matrix(cls, matrix, stationary, states=None, level=None):
        """
        Wraps an arbitrary transition matrix, e.g. a textbook two-state chain.
        """
        matrix = np.asarray(matrix)
        if states is None:
            states = list(range(matrix.shape[0]))
        if not isinstance(stationary, LevelDistribution):
            stationary = LevelDistribution(level, states, stationary)
        return cls(level, states, matrix, stationary)

    @classmethod
    def cls_logger(cls):
        return logging.getLogger('matroidwalks.walks.TransitionKernel')

    @property
    def level(self):
        return self._level

    @property
    def states(self):
        return self._states

    @property
    def matrix(self):
        return self._matrix

    @property
    def stationary(self):
        return self._stationary

    @property
    def walk(self):
        return self._walk

    @property
    def complex(self):
        return self._complex

    @property
    def guaranteed_rate(self):
        """Lower bound on the modified log-Sobolev constant guaranteed for SLC inputs."""
        return self._guaranteed_rate

    @property
    def exact(self):
        return self._matrix.dtype == object

    def __len__(self):
        return len(self._states)

    @cached_property
    def index(self):
        return dict((state, i) for i, state in enumerate(self._states))

    @cached_property
    def as_float(self):
        return self._matrix.astype(float)

    @cached_property
    def pi(self):
        return np.asarray(self._stationary.probabilities).astype(float)

    @cached_property
    def symmetrized(self):
        """D^{1/2} P D^{-1/2}, symmetric for reversible kernels."""
        root = np.sqrt(self.pi)
        symmetric = root[:, np.newaxis] * self.as_float / root[np.newaxis, :]
        return (symmetric + symmetric.T) / 2

    @cached_property
    def factors(self):
        """
        The two rectangular operators whose product is this kernel.
        """
        if self._complex is None or self._walk not in WALKS:
            raise InvalidArgument('{!r} is not an up-down or down-up walk of a weighted '
                                  'complex'.format(self))
        if self._walk == UP_DOWN:
            return up_operator(self._complex, self._level), \
                down_operator(self._complex, self._level + 1)
        return down_operator(self._complex, self._level), \
            up_operator(self._complex, self._level - 1)

    def _products(self):
        pi = np.asarray(self._stationary.probabilities)
        matrix = self._matrix
        if not self.exact:
            pi = pi.astype(float)
        return pi, matrix

    def is_row_stochastic(self, tol=LINEAR_ALGEBRA_TOL):
        if np.any(self._matrix < 0):
            return False
        sums = self._matrix.sum(axis=1)
        if self.exact:
            return all(s == 1 for s in sums)
        return bool(np.all(np.abs(sums.astype(float) - 1) <= tol))

    def is_reversible(self, tol=LINEAR_ALGEBRA_TOL):
        pi, matrix = self._products()
        flows = pi[:, np.newaxis] * matrix
        if self.exact and pi.dtype == object:
            return bool(np.all(flows == flows.T))
        flows = flows.astype(float)
        return bool(np.all(np.abs(flows - flows.T) <= tol))

    @cached_property
    def reversible(self):
        return self.is_reversible()

    def is_stationary(self, tol=LINEAR_ALGEBRA_TOL):
        pi, matrix = self._products()
        evolved = pi.dot(matrix)
        if self.exact and pi.dtype == object:
            return bool(np.all(evolved == pi))
        return bool(np.all(np.abs(evolved.astype(float) - pi.astype(float)) <= tol))

    def to_frame(self, exact=True):
        """
        CSV-ready view: sparse (row, col, numerator, denominator) rows for exact kernels,
        otherwise the dense double matrix labelled by states.
        """
        labels = [format_mask(s) if isinstance(s, int) else str(s) for s in self._states]
        if exact:
            rows = []
            for i, j in zip(*np.nonzero(self._matrix != 0)):
                entry = Fraction(self._matrix[i, j])
                rows.append((labels[i], labels[j], entry.numerator, entry.denominator))
            return pd.DataFrame(rows, columns=['row', 'col', 'p_numerator', 'p_denominator'])
        return pd.DataFrame(self.as_float, index=labels, columns=labels)

    def __repr__(self):
        return 'TransitionKernel(walk={!r}, level={}, states={})'.format(
            self._walk, self._level, len(self._states))


def up_operator(wc, k):
    """
    P-up_k: rows M(k), columns M(k+1), entry w(J)/w(I) for I inside J.
    """
    if not 0 <= k <= wc.rank - 1:
        raise InvalidArgument('Up operator needs 0 <= k <= r-1={}, got {}'.format(wc.rank - 1, k))

    rows, columns = wc.level(k), wc.level(k + 1)
    _check_size(len(rows), len(columns))
    column_index = wc.index(k + 1)
    matrix = _zeros(len(rows), len(columns))
    for i, mask in enumerate(rows):
        weight = wc.weight(mask)
        for superset in wc.covering_sets(mask):
            matrix[i, column_index[superset]] = wc.weight(superset) / weight
    return RectangularOperator(k, k + 1, rows, columns, matrix)


def down_operator(wc, k):
    """
    P-down_k: rows M(k), columns M(k-1), entry 1/k for each subset obtained by removing
    one element.
    """
    if not 1 <= k <= wc.rank:
        raise InvalidArgument('Down operator needs 1 <= k <= r={}, got {}'.format(wc.rank, k))

    rows, columns = wc.level(k), wc.level(k - 1)
    _check_size(len(rows), len(columns))
    column_index = wc.index(k - 1)
    matrix = _zeros(len(rows), len(columns))
    share = Fraction(1, k)
    for i, mask in enumerate(rows):
        for element in elements_of(mask):
            matrix[i, column_index[mask & ~(1 << element)]] = share
    return RectangularOperator(k, k - 1, rows, columns, matrix)


def adjoint_identity_holds(wc, k):
    """
    D_{k+1} P-down_{k+1} = (P-up_k)^T D_k exactly, with D_k = diag(pi_k).
    """
    pi_k = level_distribution(wc, k).probabilities
    pi_upper = level_distribution(wc, k + 1).probabilities
    down = down_operator(wc, k + 1).matrix
    up = up_operator(wc, k).matrix
    return bool(np.all(pi_upper[:, np.newaxis] * down == up.T * pi_k[np.newaxis, :]))


def compose(first, second):
    """
    Exact product of two operators (or kernels), first applied on the left.
    """
    left = first.matrix if hasattr(first, 'matrix') else first
    right = second.matrix if hasattr(second, 'matrix') else second
    return np.dot(left, right)


def up_down_walk(wc, k):
    """
    Add an element with probability proportional to the weight of the new set, then remove
    a uniformly random element. Defined for 1 <= k <= r-1.
    """
    if not 1 <= k <= wc.rank - 1:
        raise InvalidArgument('Up-down walk is defined for 1 <= k <= r-1={}, got {}'.format(
            wc.rank - 1, k))

    states = wc.level(k)
    _check_size(len(states))
    index = wc.index(k)
    matrix = _zeros(len(states), len(states))
    stay = Fraction(1, k + 1)
    for i, mask in enumerate(states):
        matrix[i, i] = stay
        weight = wc.weight(mask)
        for superset in wc.covering_sets(mask):
            move = wc.weight(superset) / ((k + 1) * weight)
            for element in elements_of(mask):
                matrix[i, index[superset & ~(1 << element)]] = move

    return TransitionKernel(k, states, matrix, level_distribution(wc, k), walk=UP_DOWN,
                            complex=wc, guaranteed_rate=Fraction(1, k + 1))


def down_up_walk(wc, k):
    """
    Remove a uniformly random element, then add one back with probability proportional to
    the weight of the resulting set. Defined for 2 <= k <= r; at k = r this is the
    bases-exchange walk.
    """
    if not 2 <= k <= wc.rank:
        raise InvalidArgument('Down-up walk is defined for 2 <= k <= r={}, got {}'.format(
            wc.rank, k))

    states = wc.level(k)
    _check_size(len(states))
    index = wc.index(k)
    matrix = _zeros(len(states), len(states))
    for i, mask in enumerate(states):
        weight = wc.weight(mask)
        stay = Fraction(0)
        for element in elements_of(mask):
            subset = mask & ~(1 << element)
            subset_weight = wc.weight(subset)
            stay += weight / (k * subset_weight)
            for superset in wc.covering_sets(subset):
                if superset != mask:
                    matrix[i, index[superset]] = wc.weight(superset) / (k * subset_weight)
        matrix[i, i] = stay
        assert sum(matrix[i], Fraction(0)) == 1, \
            'Row {{{}}} of the down-up walk sums to {}'.format(format_mask(mask), sum(matrix[i]))

    return TransitionKernel(k, states, matrix, level_distribution(wc, k), walk=DOWN_UP,
                            complex=wc, guaranteed_rate=Fraction(1, k))


def bases_exchange(wc):
    return down_up_walk(wc, wc.rank)


def walk_kernel(wc, walk, k):
    if walk == UP_DOWN:
        return up_down_walk(wc, k)
    elif walk == DOWN_UP:
        return down_up_walk(wc, k)
    raise InvalidArgument('Unknown walk {!r}, expecting one of {}'.format(walk, WALKS))


def link_walk(wc, base, k):
    """
    The level-one up-down walk of the link of `base` (|base| = k-1), extended by zeros to a
    kernel over M(k). Rows outside of the sets containing `base` are zero; the stationary
    distribution is the conditional pi_{base,1}.
    """
    if cardinality(base) != k - 1 or not wc.is_independent(base):
        raise InvalidArgument('Link base should be an independent set of size k-1={}'.format(k - 1))

    states = wc.level(k)
    index = wc.index(k)
    matrix = _zeros(len(states), len(states))
    for mask in states:
        if mask & base != base:
            continue
        i = index[mask]
        matrix[i, i] = Fraction(1, 2)
        weight = wc.weight(mask)
        for superset in wc.covering_sets(mask):
            added = superset & ~mask
            other = base | added
            matrix[i, index[other]] = wc.weight(superset) / (2 * weight)
    return TransitionKernel(k, states, matrix, conditional_distribution(wc, base, 1), walk=LINK,
                            complex=wc, guaranteed_rate=Fraction(1, 2))


def rwup_decomposition_holds(wc, k):
    """
    Exact check of I - P_k = 2/(k+1) * sum over K in M(k-1) of (I_{S_K} - P_{K,1}) for the
    up-down walk P_k.
    """
    kernel = up_down_walk(wc, k)
    size = len(kernel)
    identity = _zeros(size, size)
    for i in range(size):
        identity[i, i] = Fraction(1)

    total = _zeros(size, size)
    for base in wc.level(k - 1):
        indicator = _zeros(size, size)
        for i, mask in enumerate(kernel.states):
            if mask & base == base:
                indicator[i, i] = Fraction(1)
        total = total + indicator - link_walk(wc, base, k).matrix

    return bool(np.all(identity - kernel.matrix == Fraction(2, k + 1) * total))


def _random_state(random_state):
    if isinstance(random_state, np.random.RandomState):
        return random_state
    return np.random.RandomState(random_state)


def _choose_by_weight(candidates, weights, random):
    """
    Inverse CDF over candidates in ascending order with exact cumulative weights.
    """
    total = sum(weights, Fraction(0))
    target = Fraction(random.random_sample()) * total
    cumulative = Fraction(0)
    for candidate, weight in zip(candidates, weights):
        cumulative += weight
        if target < cumulative:
            return candidate
    return candidates[-1]


def sample_step(wc, walk, k, current, random_state=None):
    """
    One step of the up-down or down-up walk from `current`, computed from the weight table
    without materialising the kernel.
    """
    random = _random_state(random_state)
    if walk == UP_DOWN:
        if not 1 <= k <= wc.rank - 1:
            raise InvalidArgument('Up-down walk is defined for 1 <= k <= r-1, got {}'.format(k))
    elif walk == DOWN_UP:
        if not 2 <= k <= wc.rank:
            raise InvalidArgument('Down-up walk is defined for 2 <= k <= r, got {}'.format(k))
    else:
        raise InvalidArgument('Unknown walk {!r}'.format(walk))

    if current not in wc.index(k):
        raise InvalidState('{{{}}} is not in M({})'.format(format_mask(current), k))

    if walk == DOWN_UP:
        elements = elements_of(current)
        removed = elements[random.randint(len(elements))]
        intermediate = current & ~(1 << removed)
        candidates = wc.covering_sets(intermediate)
        return _choose_by_weight(candidates, [wc.weight(c) for c in candidates], random)

    candidates = wc.covering_sets(current)
    intermediate = _choose_by_weight(candidates, [wc.weight(c) for c in candidates], random)
    elements = elements_of(intermediate)
    removed = elements[random.randint(len(elements))]
    return intermediate & ~(1 << removed)


def one_step_frequencies(wc, kernel, start, draws, random_state=None, sigmas=3.0):
    """
    Compares the frequencies of `draws` independent steps from `start` with the kernel row.

    Every cell must lie within a multinomial sigma bound. The multiplier is `sigmas`
    Bonferroni-adjusted over the cells of positive probability, so that the whole row fails
    with the probability of a single `sigmas` deviation.

    :return: `FrequencyCheck`; `excess` is the largest deviation beyond the bound
    """
    random = _random_state(random_state)
    counts = np.zeros(len(kernel))
    index = kernel.index
    for _ in range(int(draws)):
        counts[index[sample_step(wc, kernel.walk, kernel.level, start, random)]] += 1

    expected = kernel.as_float[index[start]]
    frequencies = counts / draws
    cells = max(int((expected > 0).sum()), 1)
    multiplier = norm.isf(norm.sf(sigmas) / cells)
    bound = multiplier * np.sqrt(expected * (1 - expected) / draws) + LINEAR_ALGEBRA_TOL
    excess = float((np.abs(frequencies - expected) - bound).max())
    return FrequencyCheck(frequencies, expected, multiplier, excess, excess <= 0)


class Sampler(object):
    """
    Runs one walk on one level, holding its own random state.
    """

    def __init__(self, wc, walk=DOWN_UP, k=None, start=None, random_state=None):
        self.wc = wc
        self.walk = walk
        self.k = wc.rank if k is None else k
        self.random = _random_state(random_state)
        self.state = wc.level(self.k)[0] if start is None else start

        if self.state not in wc.index(self.k):
            raise InvalidState('{{{}}} is not in M({})'.format(format_mask(self.state), self.k))

    def step(self):
        self.state = sample_step(self.wc, self.walk, self.k, self.state, self.random)
        return self.state

    def trajectory(self, n_steps):
        """
        Generator over the next `n_steps` states.
        """
        for _ in range(int(n_steps)):
            yield self.step()


class LevelFunction(object):
    """
    Non-negative function on M(k) indexed like `states`.
    """

    def __init__(self, level, states, values, normalized=False):
        values = np.asarray(values)
        if values.dtype != object:
            values = values.astype(float)
        if np.any(values < 0):
            raise InvalidFunction('Level functions should be non-negative')
        if len(values) != len(states):
            raise InvalidFunction('Got {} values for {} states'.format(len(values), len(states)))
        self.level = level
        self.states = list(states)
        self.values = values
        self.normalized = normalized

    @classmethod
    def constant(cls, wc, k, value=1.0):
        states = wc.level(k)
        return cls(k, states, np.repeat(float(value), len(states)))

    def expectation(self, distribution):
        weights = np.asarray(distribution.probabilities)
        if self.values.dtype != object:
            weights = weights.astype(float)
        return weights.dot(self.values)

    def normalize(self, distribution):
        """
        Copy scaled so that its expectation under `distribution` is one.
        """
        mean = self.expectation(distribution)
        if mean == 0:
            raise InvalidFunction('Cannot normalise a function with zero expectation')
        return LevelFunction(self.level, self.states, self.values / mean, normalized=True)

    def __len__(self):
        return len(self.states)


def push_down_operator(wc, k, i):
    """
    P-up_i ... P-up_{k-1} as one exact operator from M(k) to M(i); the identity when i = k.
    """
    if not 1 <= i <= k <= wc.rank:
        raise InvalidArgument('Push down needs 1 <= i <= k <= r={}, got i={}, k={}'.format(
            wc.rank, i, k))

    matrix = _zeros(len(wc.level(k)), len(wc.level(k)))
    np.fill_diagonal(matrix, Fraction(1))
    for level in range(k - 1, i - 1, -1):
        matrix = compose(up_operator(wc, level), matrix)
    return RectangularOperator(i, k, wc.level(i), wc.level(k), matrix)


def push_down(wc, f, i):
    """
    f^(i) = P-up_i ... P-up_{k-1} f^(k): the function going down from level k to level i.
    """
    k = f.level
    if not 1 <= i <= k:
        raise InvalidArgument('Target level should be between 1 and {}, got {}'.format(k, i))
    if np.any(f.values < 0):
        raise InvalidFunction('Level functions should be non-negative')

    values = push_down_operator(wc, k, i).apply(f.values)
    return LevelFunction(i, wc.level(i), values, normalized=f.normalized)
