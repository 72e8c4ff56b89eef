"""
Negative dependence of distributions over subsets of {0, ..., n-1}: strong log-concavity of the
generating polynomial, the real stability condition for quadratics, the stochastic covering
property and negative cylinder dependence.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import io
import itertools
import json
import logging
from collections import namedtuple
from fractions import Fraction
from functools import reduce
from math import gcd

import networkx as nx
import numpy as np
import pandas as pd
from networkx.algorithms.flow import edmonds_karp

from matroidwalks.bitmask import cardinality, elements_of, format_mask, format_rational, \
    full_mask, parse_mask, parse_rational, subsets_of
from matroidwalks.complex import level_distribution
from matroidwalks.config import EIGENVALUE_TOL, MAX_NCD_CHECK, MAX_SCP_CHECK
from matroidwalks.errors import InvalidArgument, InvalidDistribution, InvalidParameters, \
    SizeCapExceeded, Unsupported
from matroidwalks.random_initialisation import random_point_generator

logger = logging.getLogger('matroidwalks.negdep')

SlcReport = namedtuple('SlcReport', ['passed', 'table', 'disagreements'])
SrpReport = namedtuple('SrpReport', ['passed', 'witness', 'points'])
ScpReport = namedtuple('ScpReport', ['passed', 'witness', 'checked', 'skipped'])
NcdReport = namedtuple('NcdReport', ['passed', 'witness', 'checked'])
PartialHessian = namedtuple('PartialHessian', ['matrix', 'degree', 'degenerate'])

DEFAULT_SRP_TRIALS = 10000
_SRP_BATCH = 1000
_GRID_SMALL = 5
_GRID_SIGNS = 12
_THRESHOLD_BRACKETS = ((0.0, 1.0), (1.0, 6.0))


class BooleanDistribution(object):
    """
    Distribution over subsets of the ground set, stored as exact rational masses.
    """

    def __init__(self, n, mass):
        n = int(n)
        if n < 1:
            raise InvalidParameters('Ground set size should be positive, got {}'.format(n))
        mass = dict((int(mask), parse_rational(value)) for mask, value in mass.items())
        for mask, value in mass.items():
            if mask & ~full_mask(n):
                raise InvalidDistribution('{{{}}} is not within 0..{}'.format(format_mask(mask),
                                                                               n - 1))
            if value < 0:
                raise InvalidDistribution('Negative mass {} on {{{}}}'.format(value,
                                                                              format_mask(mask)))
        self._n = n
        self._mass = dict((mask, value) for mask, value in mass.items() if value > 0)

    @property
    def n(self):
        return self._n

    @property
    def mass(self):
        return self._mass

    @property
    def support(self):
        return sorted(self._mass)

    def total(self):
        return sum(self._mass.values(), Fraction(0))

    def normalize(self):
        total = self.total()
        if total == 0:
            raise InvalidDistribution('Distribution has no mass')
        return BooleanDistribution(self._n, dict((mask, value / total)
                                                 for mask, value in self._mass.items()))

    @property
    def degrees(self):
        return sorted(set(cardinality(mask) for mask in self._mass))

    @property
    def is_homogeneous(self):
        return len(self.degrees) == 1

    def probability(self, event):
        """Mass of the sets satisfying `event`, a predicate on masks."""
        return sum((value for mask, value in self._mass.items() if event(mask)), Fraction(0))

    def marginals(self):
        return [self.probability(lambda mask, bit=1 << i: mask & bit) for i in range(self._n)]

    def conditional(self, scope, pattern):
        """
        Conditioned on agreeing with `pattern` on `scope`, restricted to the complement of
        `scope`. None for events of probability zero.
        """
        selected = dict((mask & ~scope, value) for mask, value in self._mass.items()
                        if mask & scope == pattern)
        total = sum(selected.values(), Fraction(0))
        if total == 0:
            return None
        return dict((mask, value / total) for mask, value in selected.items())

    def to_dict(self):
        return {'n': self._n,
                'mass': dict((format_mask(mask), format_rational(value))
                             for mask, value in sorted(self._mass.items()))}

    def __eq__(self, other):
        return isinstance(other, BooleanDistribution) and self._n == other._n and \
            self._mass == other._mass

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'BooleanDistribution(n={}, support={})'.format(self._n, len(self._mass))


def basis_distribution(wc):
    """The distribution pi_r over the bases of a weighted complex."""
    pi = level_distribution(wc, wc.rank)
    return BooleanDistribution(wc.n, dict(zip(pi.states, pi.probabilities)))


def load_distribution(source):
    """
    Reads {"n": int, "mass": {"0,1": "p/q", ...}} from a path, open file, JSON string or mapping.
    """
    if isinstance(source, dict):
        data = source
    elif hasattr(source, 'read'):
        data = json.load(source)
    elif source.lstrip().startswith('{'):
        data = json.loads(source)
    else:
        with io.open(source, encoding='utf-8') as handle:
            data = json.load(handle)

    try:
        return BooleanDistribution(data['n'], dict((parse_mask(label), value)
                                                   for label, value in data['mass'].items()))
    except KeyError as e:
        raise InvalidParameters('Distribution is missing field {}'.format(e))


def dump_distribution(distribution, target=None):
    data = distribution.to_dict()
    if target is None:
        return json.dumps(data, sort_keys=True)
    with io.open(target, 'w', encoding='utf-8') as handle:
        handle.write(json.dumps(data, sort_keys=True, indent=2))


def _monomial(mask, point):
    if point is None:
        return 1
    return reduce(lambda acc, i: acc * point[i], elements_of(mask), 1.0)


class GeneratingPolynomial(object):
    """
    The multiaffine polynomial g(x) = sum over S of mu(S) prod_{i in S} x_i.

    Every evaluation is exact in rationals at the all-ones point (`point=None`) and in doubles
    elsewhere.
    """

    def __init__(self, n, coefficients):
        self.n = n
        self.coefficients = dict((mask, c) for mask, c in coefficients.items() if c != 0)

    @classmethod
    def from_distribution(cls, distribution):
        return cls(distribution.n, distribution.mass)

    @property
    def degree(self):
        if not self.coefficients:
            return None
        return max(cardinality(mask) for mask in self.coefficients)

    @property
    def is_zero(self):
        return not self.coefficients

    @property
    def is_homogeneous(self):
        return len(set(cardinality(mask) for mask in self.coefficients)) <= 1

    def _array(self, shape, point):
        if point is None:
            ans = np.empty(shape, dtype=object)
            ans.fill(Fraction(0))
            return ans
        return np.zeros(shape)

    def evaluate(self, point=None):
        return sum((c * _monomial(mask, point) for mask, c in self.coefficients.items()),
                   Fraction(0) if point is None else 0.0)

    def partial(self, mask):
        """The derivative with respect to every variable in `mask`."""
        return GeneratingPolynomial(self.n, dict((s & ~mask, c)
                                                 for s, c in self.coefficients.items()
                                                 if s & mask == mask))

    def gradient(self, point=None):
        ans = self._array(self.n, point)
        for mask, c in self.coefficients.items():
            for i in elements_of(mask):
                ans[i] += c * _monomial(mask & ~(1 << i), point)
        return ans

    def hessian(self, point=None):
        ans = self._array((self.n, self.n), point)
        for mask, c in self.coefficients.items():
            elements = elements_of(mask)
            for a, u in enumerate(elements):
                for v in elements[a + 1:]:
                    value = c * _monomial(mask & ~(1 << u) & ~(1 << v), point)
                    ans[u, v] += value
                    ans[v, u] += value
        return ans


def _log_hessian(p, point=None):
    value = float(p.evaluate(point))
    gradient = np.asarray(p.gradient(point), dtype=float)
    hessian = np.asarray(p.hessian(point), dtype=float)
    return hessian / value - np.outer(gradient, gradient) / value ** 2


def partial_derivative_hessian(g, mask, point=None, log=False):
    """
    Hessian of the partial derivative p of `g` with respect to `mask`, or with `log` the Hessian
    of log p, at `point` (all ones by default).

    When p is zero or of degree below two its Hessian is the zero matrix and the result is
    flagged `degenerate`. The log form needs p > 0, so it takes strictly positive points only.

    :return: `PartialHessian`
    """
    p = g.partial(mask)
    degree = p.degree
    degenerate = degree is None or degree < 2
    if not log:
        return PartialHessian(p.hessian(point), degree, degenerate)

    if point is not None and np.any(np.asarray(point, dtype=float) <= 0):
        raise InvalidArgument('Log-Hessian needs a strictly positive point')
    if degree is None:
        raise InvalidArgument('Derivative with respect to {} vanishes, it has no log'.format(
            format_mask(mask)))
    return PartialHessian(_log_hessian(p, point), degree, degenerate)


def _positive_count(matrix, tol=EIGENVALUE_TOL):
    scale = np.abs(matrix).max()
    if scale == 0:
        return 0
    return int((np.linalg.eigvalsh(matrix / scale) > tol).sum())


def _log_hessian_nsd(p, tol=EIGENVALUE_TOL):
    log_hessian = _log_hessian(p)
    scale = np.abs(log_hessian).max()
    if scale == 0:
        return True
    return bool(np.all(np.linalg.eigvalsh(log_hessian / scale) <= tol))


def slc_check(distribution, tol=EIGENVALUE_TOL):
    """
    Strong log-concavity of the generating polynomial: for every I with a nonzero derivative of
    degree at least two, the Hessian at the all-ones point has at most one positive eigenvalue,
    equivalently the Hessian of log of the derivative is negative semi-definite there. Both
    criteria are evaluated and compared. Lower degree derivatives pass trivially.
    """
    if not distribution.is_homogeneous:
        raise Unsupported('Strong log-concavity is checked for homogeneous distributions, got '
                          'support sizes {}'.format(distribution.degrees))

    g = GeneratingPolynomial.from_distribution(distribution)
    degree = g.degree
    candidates = set()
    for support in distribution.support:
        candidates.update(subsets_of(support))

    rows = []
    for mask in sorted(candidates, key=lambda m: (cardinality(m), m)):
        if degree - cardinality(mask) < 2:
            continue
        p = g.partial(mask)
        positive = _positive_count(p.hessian().astype(float), tol)
        nsd = _log_hessian_nsd(p, tol)
        rows.append((format_mask(mask), degree - cardinality(mask), positive, positive <= 1, nsd,
                     (positive <= 1) == nsd))

    table = pd.DataFrame(rows, columns=['I', 'degree', 'positive_eigenvalues', 'one_positive',
                                        'log_hessian_nsd', 'agree'])
    disagreements = int((~table['agree']).sum()) if len(table) else 0
    if disagreements:
        logger.warning('Eigenvalue and log-Hessian criteria disagree on {} derivative(s) of '
                       '{!r}'.format(disagreements, distribution))
    passed = bool(table['one_positive'].all()) if len(table) else True
    return SlcReport(passed, table, disagreements)


def _srp_grid(n):
    if n <= _GRID_SMALL:
        values = np.arange(-2, 3, dtype=float)
    elif n <= _GRID_SIGNS:
        values = np.array([-1.0, 1.0])
    else:
        return np.zeros((0, n))
    return np.array(list(itertools.product(values, repeat=n)))


def _srp_violation(points, coefficients, tol):
    gradients = points.dot(coefficients)
    values = 0.5 * (points * gradients).sum(axis=1)
    lhs = gradients[:, :, np.newaxis] * gradients[:, np.newaxis, :]
    rhs = values[:, np.newaxis, np.newaxis] * coefficients[np.newaxis, :, :]
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    slack = (lhs - rhs) / scale

    n = coefficients.shape[0]
    slack[:, np.arange(n), np.arange(n)] = np.inf
    worst = np.unravel_index(np.argmin(slack), slack.shape)
    if slack[worst] < -tol:
        point, i, j = worst
        return dict(i=int(i), j=int(j), x=points[point].tolist(), lhs=float(lhs[worst]),
                    rhs=float(rhs[worst]))
    return None


def srp_quadratic_check(distribution, trials=DEFAULT_SRP_TRIALS, random_state=None,
                        tol=EIGENVALUE_TOL):
    """
    Searches for x with d_i g(x) d_j g(x) < g(x) d_i d_j g(x) for a quadratic multiaffine g, over
    standard normal points and a small deterministic grid. Finding none is evidence, not proof.
    """
    if distribution.degrees != [2]:
        raise Unsupported('Real stability is only checked for quadratics, got support sizes '
                          '{}'.format(distribution.degrees))

    n = distribution.n
    coefficients = np.zeros((n, n))
    for mask, value in distribution.mass.items():
        u, v = elements_of(mask)
        coefficients[u, v] = coefficients[v, u] = float(value)

    batches = [_srp_grid(n)]
    generator = random_point_generator(n, random_state=random_state)
    remaining = int(trials)
    while remaining > 0:
        size = min(remaining, _SRP_BATCH)
        batches.append(np.array(list(itertools.islice(generator, size))))
        remaining -= size

    checked = 0
    for points in batches:
        if not len(points):
            continue
        witness = _srp_violation(points, coefficients, tol)
        checked += len(points)
        if witness is not None:
            return SrpReport(False, witness, checked)
    return SrpReport(True, None, checked)


def pairwise_negative_dependence(distribution):
    """
    P(i, j in X) <= P(i in X) P(j in X) for all pairs, the real stability condition at x = 1.

    :return: DataFrame over pairs with both sides and a pass flag
    """
    distribution = distribution.normalize()
    marginals = distribution.marginals()
    rows = []
    for i, j in itertools.combinations(range(distribution.n), 2):
        both = (1 << i) | (1 << j)
        joint = distribution.probability(lambda mask: mask & both == both)
        product = marginals[i] * marginals[j]
        rows.append((i, j, joint, product, joint <= product))
    return pd.DataFrame(rows, columns=['i', 'j', 'joint', 'product', 'passed'])


def _masses(distribution):
    if isinstance(distribution, BooleanDistribution):
        return distribution.mass
    return dict((mask, Fraction(value)) for mask, value in distribution.items() if value > 0)


def _covers(x, y):
    difference = x & ~y
    return y & ~x == 0 and cardinality(difference) <= 1


def stochastic_covering(mu, nu):
    """
    Whether mu covers nu: some coupling (X, Y) has X = Y or X = Y plus one element almost surely.
    Decided exactly as a maximum flow on integer capacities.
    """
    mu = _masses(mu)
    nu = _masses(nu)
    total = sum(mu.values(), Fraction(0))
    if total != sum(nu.values(), Fraction(0)):
        return False

    denominators = [value.denominator for value in itertools.chain(mu.values(), nu.values())]
    scale = reduce(lambda a, b: a * b // gcd(a, b), denominators, 1)

    network = nx.DiGraph()
    for x, value in mu.items():
        network.add_edge('source', ('x', x), capacity=int(value * scale))
    for y, value in nu.items():
        network.add_edge(('y', y), 'sink', capacity=int(value * scale))
    for x in mu:
        for y in nu:
            if _covers(x, y):
                network.add_edge(('x', x), ('y', y))

    if not network.has_node('source') or not network.has_node('sink'):
        return total == 0
    flow = nx.maximum_flow_value(network, 'source', 'sink', flow_func=edmonds_karp)
    return flow == int(total * scale)


def scp_check(distribution):
    """
    Stochastic covering property: for every S and every x covering y on S, the conditional
    distribution given y covers the one given x. Conditioning events of probability zero are
    skipped and counted.
    """
    n = distribution.n
    if n > MAX_SCP_CHECK:
        raise SizeCapExceeded('Exhaustive covering check is limited to n <= {}, got {}'.format(
            MAX_SCP_CHECK, n))

    checked = 0
    skipped = 0
    for scope in range(1, 1 << n):
        for y in subsets_of(scope):
            given_y = distribution.conditional(scope, y)
            for i in elements_of(scope & ~y):
                x = y | (1 << i)
                given_x = distribution.conditional(scope, x)
                if given_x is None or given_y is None:
                    skipped += 1
                    continue
                checked += 1
                if not stochastic_covering(given_y, given_x):
                    witness = dict(S=elements_of(scope), x=elements_of(x), y=elements_of(y))
                    logger.debug('Covering fails for {!r}: {}'.format(distribution, witness))
                    return ScpReport(False, witness, checked, skipped)
    return ScpReport(True, None, checked, skipped)


def ncd_check(distribution):
    """
    Negative cylinder dependence: P(S inside X) <= prod P(i in X) and
    P(S outside X) <= prod P(i not in X) for every S, in exact arithmetic.
    """
    n = distribution.n
    if n > MAX_NCD_CHECK:
        raise SizeCapExceeded('Exhaustive cylinder check is limited to n <= {}, got {}'.format(
            MAX_NCD_CHECK, n))

    distribution = distribution.normalize()
    marginals = distribution.marginals()
    checked = 0
    for scope in range(1, 1 << n):
        elements = elements_of(scope)
        inside = distribution.probability(lambda mask: mask & scope == scope)
        inside_bound = reduce(lambda acc, i: acc * marginals[i], elements, Fraction(1))
        outside = distribution.probability(lambda mask: mask & scope == 0)
        outside_bound = reduce(lambda acc, i: acc * (1 - marginals[i]), elements, Fraction(1))
        checked += 1
        if inside > inside_bound:
            return NcdReport(False, dict(S=elements, kind='upper', lhs=inside,
                                         rhs=inside_bound), checked)
        if outside > outside_bound:
            return NcdReport(False, dict(S=elements, kind='lower', lhs=outside,
                                         rhs=outside_bound), checked)
    return NcdReport(True, None, checked)


def theta_example(theta):
    """
    The distribution on the bases of U(2,4) with mass proportional to theta on {0,1}, 2 on {0,2}
    and 1 on the other four pairs. It has the stochastic covering property for theta in [0, 6]
    but is strongly log-concave only for theta in [3 - 2 sqrt 2, 3 + 2 sqrt 2].
    """
    theta = parse_rational(theta)
    if theta < 0:
        raise InvalidParameters('theta should be non-negative, got {}'.format(theta))

    mass = dict((mask, Fraction(1)) for mask in
                (0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100))
    mass[0b0011] = theta
    mass[0b0101] = Fraction(2)
    return BooleanDistribution(4, mass).normalize()


def theta_thresholds(tol=1e-6):
    """
    Bisects the strong log-concavity verdict over the theta family.

    :return: tuple of the lower and upper threshold
    """
    thresholds = []
    for failing, passing in [_THRESHOLD_BRACKETS[0], _THRESHOLD_BRACKETS[1][::-1]]:
        assert not slc_check(theta_example(failing)).passed
        assert slc_check(theta_example(passing)).passed
        while abs(passing - failing) > tol:
            middle = (failing + passing) / 2
            if slc_check(theta_example(middle)).passed:
                passing = middle
            else:
                failing = middle
        thresholds.append((failing + passing) / 2)
    return tuple(thresholds)
