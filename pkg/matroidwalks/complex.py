from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
from fractions import Fraction
from math import factorial

import numpy as np
import pandas as pd
from cached_property import cached_property

from matroidwalks.bitmask import cardinality, elements_of, format_mask, parse_rational
from matroidwalks.errors import InvalidArgument, InvalidSupport, InvalidWeight


class LevelDistribution(object):
    """
    Distribution over one level M(k), stored as exact rationals in the order of `states`.
    """

    def __init__(self, level, states, probabilities):
        self._level = level
        self._states = list(states)
        self._probabilities = np.asarray(probabilities, dtype=object)

        if len(self._states) != len(self._probabilities):
            raise ValueError('Got {} states but {} probabilities'.format(
                len(self._states), len(self._probabilities)))

    @property
    def level(self):
        return self._level

    @property
    def states(self):
        return self._states

    @property
    def probabilities(self):
        return self._probabilities

    @cached_property
    def as_float(self):
        return self._probabilities.astype(float)

    @cached_property
    def index(self):
        return dict((state, i) for i, state in enumerate(self._states))

    @property
    def support(self):
        return [state for state, p in zip(self._states, self._probabilities) if p > 0]

    def total(self):
        return sum(self._probabilities, Fraction(0))

    def __len__(self):
        return len(self._states)

    def __getitem__(self, state):
        return self._probabilities[self.index[state]]

    def to_series(self):
        return pd.Series(self.as_float, index=[format_mask(s) for s in self._states])


class PairWeightMatrix(object):
    """
    W_I[u][v] = w(I + {u, v}) over the elements outside of I.
    """

    def __init__(self, base, elements, matrix, element_weights, base_weight):
        self.base = base
        self.elements = list(elements)
        self.matrix = matrix
        self.element_weights = element_weights
        self.base_weight = base_weight

    @cached_property
    def as_float(self):
        return self.matrix.astype(float)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.as_float)

    def positive_eigenvalue_count(self, tol=1e-9):
        matrix = self.as_float
        scale = np.abs(matrix).max()
        if scale == 0:
            return 0
        eigenvalues = np.linalg.eigvalsh(matrix / scale)
        return int((eigenvalues > tol).sum())

    def quadratic_form(self, f):
        f = np.asarray(f, dtype=float)
        return float(f.dot(self.as_float).dot(f))


class WeightedComplex(object):
    """
    Independent sets of a matroid stratified by size, M(0), ..., M(r), together with the
    recursive weight w(I) = sum of w(I') over independent I' covering I.

    Immutable once built. Contractions keep the original element labels: the ground set of
    a contraction by I is simply `ground_mask` without the bits of I.
    """

    def __init__(self, n, ground_mask, levels, weights, oracle=None):
        self._n = n
        self._ground_mask = ground_mask
        self._levels = [list(level) for level in levels]
        self._weights = weights
        self._oracle = oracle

    @classmethod
    def cls_logger(cls):
        return logging.getLogger('matroidwalks.complex.WeightedComplex')

    @property
    def n(self):
        return self._n

    @property
    def ground_mask(self):
        return self._ground_mask

    @property
    def ground_elements(self):
        return elements_of(self._ground_mask)

    @property
    def oracle(self):
        return self._oracle

    @property
    def rank(self):
        return len(self._levels) - 1

    @property
    def bases(self):
        return self._levels[-1]

    def level(self, k):
        if not 0 <= k <= self.rank:
            raise InvalidArgument('Level should be between 0 and r={}, got {}'.format(self.rank, k))
        return self._levels[k]

    @property
    def level_sizes(self):
        return [len(level) for level in self._levels]

    @cached_property
    def _indices(self):
        return [dict((mask, i) for i, mask in enumerate(level)) for level in self._levels]

    def index(self, k):
        self.level(k)
        return self._indices[k]

    def weight(self, mask):
        """w(I), zero for dependent sets."""
        return self._weights.get(mask, Fraction(0))

    def is_independent(self, mask):
        return mask in self._weights

    def weights_vector(self, k):
        return np.array([self._weights[mask] for mask in self.level(k)], dtype=object)

    @cached_property
    def Z(self):
        return [sum((self._weights[mask] for mask in level), Fraction(0))
                for level in self._levels]

    def covering_sets(self, mask):
        """Independent sets with exactly one more element than `mask`, ascending."""
        ans = []
        for element in elements_of(self._ground_mask & ~mask):
            extended = mask | (1 << element)
            if extended in self._weights:
                ans.append(extended)
        return ans

    def invariant_report(self):
        """
        Exact checks of the structural identities of the weight table.
        """
        r = self.rank

        recursion = True
        for k in range(r):
            for mask in self._levels[k]:
                if self._weights[mask] != sum((self._weights[s] for s in self.covering_sets(mask)),
                                              Fraction(0)):
                    recursion = False
                    break

        basis_sum = True
        for k, level in enumerate(self._levels):
            multiplier = factorial(r - k)
            for mask in level:
                total = sum((self._weights[b] for b in self.bases if b & mask == mask),
                            Fraction(0))
                if self._weights[mask] != multiplier * total:
                    basis_sum = False
                    break

        z0 = self.Z[0]
        normaliser = all(factorial(k) * z == z0 for k, z in enumerate(self.Z)) and \
            z0 == self.weight(0)
        positive = all(w > 0 for w in self._weights.values())

        return pd.Series([recursion, basis_sum, normaliser, positive],
                         index=['weight_recursion', 'basis_sum', 'normaliser_identity',
                                'positive_weights'])

    def __eq__(self, other):
        return isinstance(other, WeightedComplex) and self._n == other._n and \
            self._ground_mask == other._ground_mask and self._weights == other._weights

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'WeightedComplex(n={}, rank={}, level_sizes={})'.format(
            self._n, self.rank, self.level_sizes)


def build_complex(oracle, basis_weights=None, n=None):
    """
    Builds the weighted complex of `oracle` with the given basis weights.

    :param oracle: independence oracle of a matroid
    :param basis_weights: mapping from basis bitmask to positive rational; all ones if omitted
    :param n: ground set size, defaults to the oracle's
    :return: `WeightedComplex`
    """
    logger = WeightedComplex.cls_logger()
    n = oracle.n if n is None else int(n)
    levels = oracle.levels
    bases = levels[-1]
    r = len(levels) - 1

    if basis_weights is None:
        basis_weights = dict((b, Fraction(1)) for b in bases)

    basis_set = frozenset(bases)
    weights = {}
    for mask, weight in basis_weights.items():
        if mask not in basis_set:
            if oracle.is_independent(mask):
                raise InvalidSupport('Weight given for {{{}}} which is independent but not a '
                                     'basis'.format(format_mask(mask)))
            raise InvalidSupport('Weight given for dependent set {{{}}}'.format(format_mask(mask)))
        weight = parse_rational(weight)
        if weight <= 0:
            raise InvalidWeight('Weight of {{{}}} should be positive, got {}'.format(
                format_mask(mask), weight))
        weights[mask] = weight

    missing = basis_set.difference(weights)
    if missing:
        raise InvalidSupport('No weight given for bases {}'.format(
            sorted('{' + format_mask(m) + '}' for m in missing)))

    ground_mask = (1 << n) - 1
    for k in range(r - 1, -1, -1):
        for mask in levels[k]:
            total = Fraction(0)
            for element in elements_of(ground_mask & ~mask):
                total += weights.get(mask | (1 << element), 0)
            assert total > 0, 'Independent set {{{}}} is not contained in any basis'.format(
                format_mask(mask))
            weights[mask] = total

    wc = WeightedComplex(n, ground_mask, levels, weights, oracle=oracle)
    logger.debug('Built {!r}, w(empty)={}'.format(wc, weights[0]))
    return wc


def _check_independent(wc, mask):
    if not wc.is_independent(mask):
        raise InvalidArgument('{{{}}} is not independent'.format(format_mask(mask)))


def contract(wc, mask):
    """
    Contraction by the independent set `mask`: independent sets J outside of it with
    J + mask independent, weighted by w(J + mask).
    """
    _check_independent(wc, mask)
    size = cardinality(mask)
    if size > wc.rank - 1:
        raise InvalidArgument('Can only contract by sets of size at most r-1={}, got {}'.format(
            wc.rank - 1, size))

    levels = []
    weights = {}
    for k in range(size, wc.rank + 1):
        level = []
        for independent in wc.level(k):
            if independent & mask == mask:
                reduced = independent & ~mask
                level.append(reduced)
                weights[reduced] = wc.weight(independent)
        levels.append(sorted(level))

    return WeightedComplex(wc.n, wc.ground_mask & ~mask, levels, weights)


def level_distribution(wc, k):
    """pi_k(I) = w(I) / Z_k."""
    states = wc.level(k)
    z = wc.Z[k]
    return LevelDistribution(k, states, [wc.weight(mask) / z for mask in states])


def conditional_distribution(wc, mask, k):
    """
    pi_{I,k} defined over M(k + |I|): k! w(J) / w(I) for J containing I, zero elsewhere.
    """
    _check_independent(wc, mask)
    size = cardinality(mask)
    if not 0 <= k <= wc.rank - size:
        raise InvalidArgument('Level should be between 0 and r-|I|={}, got {}'.format(
            wc.rank - size, k))

    states = wc.level(k + size)
    base_weight = wc.weight(mask)
    multiplier = factorial(k)
    probabilities = [multiplier * wc.weight(state) / base_weight if state & mask == mask
                     else Fraction(0) for state in states]

    normaliser = sum((wc.weight(state) for state in states if state & mask == mask),
                     Fraction(0))
    assert normaliser == base_weight / multiplier, \
        'Normaliser of the conditional distribution {} != w(I)/k! = {}'.format(
            normaliser, base_weight / multiplier)

    return LevelDistribution(k + size, states, probabilities)


def pair_weight_matrix(wc, mask):
    """
    W_I over the elements outside of I, with w(I) and the vector of w(I + {u}) attached.
    """
    _check_independent(wc, mask)
    if cardinality(mask) > wc.rank - 2:
        raise InvalidArgument('Pair weight matrix needs |I| <= r-2={}, got {}'.format(
            wc.rank - 2, cardinality(mask)))

    elements = elements_of(wc.ground_mask & ~mask)
    size = len(elements)
    matrix = np.empty((size, size), dtype=object)
    matrix.fill(Fraction(0))
    for a, u in enumerate(elements):
        for b in range(a + 1, size):
            v = elements[b]
            weight = wc.weight(mask | (1 << u) | (1 << v))
            matrix[a, b] = weight
            matrix[b, a] = weight

    element_weights = np.array([wc.weight(mask | (1 << u)) for u in elements], dtype=object)
    return PairWeightMatrix(mask, elements, matrix, element_weights, wc.weight(mask))


def marginal_mass(wc, mask):
    """
    Probability under pi = pi_r that a basis contains I, from both the basis sum and w(I).
    """
    _check_independent(wc, mask)
    r = wc.rank
    z_r = wc.Z[r]
    direct = sum((wc.weight(b) for b in wc.bases if b & mask == mask), Fraction(0)) / z_r
    from_weight = wc.weight(mask) / (factorial(r - cardinality(mask)) * z_r)
    assert direct == from_weight, 'Marginal mass mismatch: {} != {}'.format(direct, from_weight)
    return direct
