from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import logging
from fractions import Fraction

import numpy as np
import pandas as pd

from matroidwalks.bitmask import cardinality, mask_from_elements
from matroidwalks.config import MAX_LEVEL_SIZE, TAIL_GRID_STEP
from matroidwalks.errors import InvalidArgument, SizeCapExceeded, Unsupported
from matroidwalks.matroid import GraphicMatroid

logger = logging.getLogger('matroidwalks.concentration')

SUBSET_COUNT = 'subset-count'
LEAF_COUNT = 'leaf-count'
ODD_DEGREE_COUNT = 'odd-degree-count'
_DECLARED_CONSTANTS = {SUBSET_COUNT: 1, LEAF_COUNT: 2, ODD_DEGREE_COUNT: 4}


class Observable(object):
    """
    Real function on the states of one level, optionally with a declared Lipschitz constant
    with respect to single steps of the walk.
    """

    def __init__(self, level, states, values, lipschitz=None, name=None):
        if len(values) != len(states):
            raise InvalidArgument('Got {} values for {} states'.format(len(values), len(states)))
        self.level = level
        self.states = list(states)
        self.values = np.array([Fraction(v) for v in values], dtype=object)
        self.lipschitz = lipschitz
        self.name = name

    @property
    def as_float(self):
        return self.values.astype(float)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return 'Observable(name={!r}, level={}, lipschitz={})'.format(self.name, self.level,
                                                                     self.lipschitz)


def _check_level(kernel, f):
    if len(f) != len(kernel) or f.states != list(kernel.states):
        raise InvalidArgument('{!r} is not defined on the states of {!r}'.format(f, kernel))


def one_step_variance(kernel, f):
    """
    v(f) = max over x of sum over y of P(x, y) (f(x) - f(y))^2, exact for exact kernels.
    """
    _check_level(kernel, f)
    values = f.values if kernel.exact else f.as_float
    differences = values[:, np.newaxis] - values[np.newaxis, :]
    return (kernel.matrix * differences * differences).sum(axis=1).max()


def herbst_bound(a, rho, v):
    """
    exp(-rho a^2 / (2 v)), the one-sided tail bound for an observable with one-step variance v
    under a walk with modified log-Sobolev constant rho.
    """
    if a < 0:
        raise InvalidArgument('Deviation should be non-negative, got {!r}'.format(a))
    if rho <= 0:
        raise InvalidArgument('rho should be positive, got {!r}'.format(rho))
    if v < 0:
        raise InvalidArgument('One-step variance should be non-negative, got {!r}'.format(v))
    if v == 0:
        return 1.0 if a == 0 else 0.0
    return float(np.exp(-float(rho) * float(a) ** 2 / (2 * float(v))))


def two_sided_bound(a, r, v, cap=True):
    """2 exp(-a^2 / (2 r v)), capped to 1 unless `cap` is off."""
    bound = 2 * herbst_bound(a, 1.0 / r, v)
    return min(bound, 1.0) if cap else bound


def exact_tail(pi, f, a):
    """
    Pr(|f(x) - E f| >= a) for x drawn from pi, by enumeration in exact arithmetic.
    """
    if len(pi) > MAX_LEVEL_SIZE:
        raise SizeCapExceeded('Tail enumeration is limited to {:,} states'.format(MAX_LEVEL_SIZE))
    probabilities = np.asarray(pi.probabilities, dtype=object)
    a = Fraction(a)
    mean = probabilities.dot(f.values)
    return sum((p for p, value in zip(probabilities, f.values) if abs(value - mean) >= a),
               Fraction(0))


def _subset_count(states, subset):
    return [cardinality(state & subset) for state in states]


def _graph_counts(oracle, states, predicate):
    return [sum(1 for degree in oracle.degrees(state).values() if predicate(degree))
            for state in states]


def observable(wc, kind, k=None, subset=None):
    """
    One of the Lipschitz example observables on level k (the bases by default).

    :param kind: 'subset-count' (number of elements inside `subset`, constant 1), or for
        graphic matroids 'leaf-count' (constant 2) and 'odd-degree-count' (constant 4)
    """
    k = wc.rank if k is None else k
    states = wc.level(k)
    if kind == SUBSET_COUNT:
        if subset is None:
            subset = wc.ground_elements[:(len(wc.ground_elements) + 1) // 2]
        values = _subset_count(states, mask_from_elements(subset))
    elif kind in (LEAF_COUNT, ODD_DEGREE_COUNT):
        if not isinstance(wc.oracle, GraphicMatroid):
            raise Unsupported('Observable {!r} needs a graphic matroid'.format(kind))
        if kind == LEAF_COUNT:
            values = _graph_counts(wc.oracle, states, lambda degree: degree == 1)
        else:
            values = _graph_counts(wc.oracle, states, lambda degree: degree % 2 == 1)
    else:
        raise Unsupported('Unknown observable {!r}'.format(kind))

    return Observable(k, states, values, lipschitz=_DECLARED_CONSTANTS[kind], name=kind)


def example_observables(wc, k=None):
    kinds = [SUBSET_COUNT]
    if isinstance(wc.oracle, GraphicMatroid):
        kinds.extend([LEAF_COUNT, ODD_DEGREE_COUNT])
    return [observable(wc, kind, k=k) for kind in kinds]


def verify_lipschitz(kernel, f):
    """
    Smallest c with |f(x) - f(y)| <= c over every pair with P(x, y) > 0.

    :return: tuple of c and whether it is within the declared constant
    """
    _check_level(kernel, f)
    differences = np.abs(f.as_float[:, np.newaxis] - f.as_float[np.newaxis, :])
    edges = kernel.as_float > 0
    smallest = float(differences[edges].max()) if edges.any() else 0.0
    declared = f.lipschitz
    return smallest, declared is None or smallest <= declared


def tail_table(kernel, f, rate=None, grid_step=TAIL_GRID_STEP, rho_hat=None):
    """
    Exact two-sided tails against 2 exp(-rate a^2 / (2 v(f))) on a grid of deviations up to the
    largest one.

    :param kernel: the walk whose stationary distribution is sampled
    :param f: `Observable` on the kernel's states
    :param rate: modified log-Sobolev constant, the kernel's guaranteed rate by default
    :param grid_step: spacing of the deviations
    :param rho_hat: searched constant for an additional, not guaranteed, column
    :return: DataFrame indexed by deviation
    """
    rate = float(kernel.guaranteed_rate if rate is None else rate)
    v = one_step_variance(kernel, f)
    pi = kernel.stationary
    mean = np.asarray(pi.probabilities, dtype=object).dot(f.values)
    largest = max(abs(value - mean) for value in f.values)

    rows = []
    for a in np.arange(0, float(largest) + grid_step / 2, grid_step):
        tail = exact_tail(pi, f, a)
        bound = min(1.0, 2 * herbst_bound(a, rate, v))
        row = dict(a=a, exact_tail=float(tail), herbst_two_sided=bound, v_f=float(v),
                   c=f.lipschitz, passed=float(tail) <= bound + 1e-12)
        if rho_hat is not None:
            row['herbst_rho_hat'] = min(1.0, 2 * herbst_bound(a, rho_hat, v))
        rows.append(row)

    table = pd.DataFrame(rows).set_index('a')
    if not table['passed'].all():
        logger.warning('Tail bound exceeded for {!r} on {!r}'.format(f, kernel))
    return table
