from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import unittest
from fractions import Fraction

import numpy as np
from numpy.testing import assert_array_almost_equal
from scipy.stats import norm

from matroidwalks.complex import build_complex, conditional_distribution, level_distribution
from matroidwalks.errors import InvalidArgument, InvalidFunction, InvalidState
from matroidwalks.matroid import build_graphic, build_partition, build_uniform
from matroidwalks.walks import DOWN_UP, LINK, UP_DOWN, Sampler, LevelFunction, TransitionKernel, \
    adjoint_identity_holds, bases_exchange, compose, down_operator, down_up_walk, link_walk, \
    one_step_frequencies, push_down, push_down_operator, rwup_decomposition_holds, sample_step, \
    up_down_walk, up_operator, walk_kernel

K4_EDGES = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def _weighted_uniform():
    weights = {0b0011: Fraction(3), 0b0101: Fraction(1, 2), 0b1001: Fraction(1),
               0b0110: Fraction(2), 0b1010: Fraction(5), 0b1100: Fraction(1, 7)}
    return build_complex(build_uniform(4, 2), weights)


class TestOperators(unittest.TestCase):

    def test_operators_are_row_stochastic(self):
        wc = build_complex(build_graphic(K4_EDGES))
        for k in range(wc.rank):
            self.assertTrue(np.all(up_operator(wc, k).row_sums() == 1))
        for k in range(1, wc.rank + 1):
            self.assertTrue(np.all(down_operator(wc, k).row_sums() == 1))

    def test_up_operator_moves_levels_down(self):
        wc = _weighted_uniform()
        for k in range(wc.rank):
            pi = level_distribution(wc, k).probabilities
            pi_upper = level_distribution(wc, k + 1).probabilities
            self.assertTrue(np.all(pi_upper.dot(down_operator(wc, k + 1).matrix) == pi))
            self.assertTrue(np.all(pi.dot(up_operator(wc, k).matrix) == pi_upper))

    def test_adjoint_identity(self):
        for wc in [_weighted_uniform(), build_complex(build_graphic(K4_EDGES))]:
            for k in range(wc.rank):
                self.assertTrue(adjoint_identity_holds(wc, k))

    def test_operators_reject_levels_outside_of_range(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidArgument, up_operator, wc, 2)
        self.assertRaises(InvalidArgument, down_operator, wc, 0)


class TestWalks(unittest.TestCase):

    def test_down_up_walk_on_uniform_matroid(self):
        wc = build_complex(build_uniform(3, 2))
        kernel = down_up_walk(wc, 2)

        expected = np.array([[Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)],
                             [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)],
                             [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]], dtype=object)
        self.assertTrue(np.all(expected == kernel.matrix))
        self.assertTrue(kernel.exact)
        self.assertEqual(Fraction(1, 2), kernel.guaranteed_rate)
        self.assertEqual(DOWN_UP, kernel.walk)

    def test_down_up_walk_on_two_blocks_is_lazy_cube_walk(self):
        wc = build_complex(build_partition([[0, 1], [2, 3]]))
        kernel = bases_exchange(wc)
        index = kernel.index

        start = index[0b0101]
        self.assertEqual(Fraction(1, 2), kernel.matrix[start, start])
        self.assertEqual(Fraction(1, 4), kernel.matrix[start, index[0b0110]])
        self.assertEqual(Fraction(1, 4), kernel.matrix[start, index[0b1001]])
        self.assertEqual(Fraction(0), kernel.matrix[start, index[0b1010]])

    def test_walks_are_reversible_with_respect_to_level_distribution(self):
        wc = _weighted_uniform()
        for kernel in [up_down_walk(wc, 1), down_up_walk(wc, 2)]:
            self.assertTrue(kernel.is_row_stochastic())
            self.assertTrue(kernel.is_reversible())
            self.assertTrue(kernel.is_stationary())

        wc = build_complex(build_graphic(K4_EDGES))
        for kernel in [up_down_walk(wc, 1), up_down_walk(wc, 2), down_up_walk(wc, 2),
                       down_up_walk(wc, 3)]:
            self.assertTrue(kernel.is_row_stochastic())
            self.assertTrue(kernel.reversible)
            self.assertTrue(kernel.is_stationary())

    def test_walks_are_products_of_their_factors(self):
        wc = _weighted_uniform()
        for kernel in [up_down_walk(wc, 1), down_up_walk(wc, 2)]:
            first, second = kernel.factors
            self.assertTrue(np.all(compose(first, second) == kernel.matrix))

    def test_up_down_walk_decomposes_into_link_walks(self):
        wc = build_complex(build_graphic(K4_EDGES))
        self.assertTrue(rwup_decomposition_holds(wc, 1))
        self.assertTrue(rwup_decomposition_holds(wc, 2))
        self.assertTrue(rwup_decomposition_holds(_weighted_uniform(), 1))

    def test_link_walk_is_reversible_on_its_support(self):
        wc = build_complex(build_graphic(K4_EDGES))
        kernel = link_walk(wc, 0b000001, 2)

        self.assertEqual(LINK, kernel.walk)
        self.assertEqual(Fraction(1, 2), kernel.guaranteed_rate)
        self.assertTrue(kernel.is_reversible())
        self.assertTrue(kernel.is_stationary())
        for i, state in enumerate(kernel.states):
            expected = 1 if state & 0b000001 else 0
            self.assertEqual(expected, sum(kernel.matrix[i]))
        self.assertRaises(InvalidArgument, lambda: kernel.factors)
        self.assertRaises(InvalidArgument, link_walk, wc, 0b000011, 2)

    def test_walks_reject_levels_outside_of_range(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidArgument, up_down_walk, wc, 2)
        self.assertRaises(InvalidArgument, up_down_walk, wc, 0)
        self.assertRaises(InvalidArgument, down_up_walk, wc, 1)
        self.assertRaises(InvalidArgument, walk_kernel, wc, 'sideways', 2)

    def test_exact_frame_lists_non_zero_entries(self):
        wc = build_complex(build_uniform(3, 2))
        frame = down_up_walk(wc, 2).to_frame()
        self.assertEqual(9, len(frame))
        self.assertEqual(['row', 'col', 'p_numerator', 'p_denominator'], list(frame.columns))
        row = frame[(frame['row'] == '0,1') & (frame['col'] == '0,1')].iloc[0]
        self.assertEqual((1, 2), (row['p_numerator'], row['p_denominator']))

    def test_kernel_from_plain_matrix(self):
        kernel = TransitionKernel.from_matrix([[0.5, 0.5], [0.5, 0.5]], [0.5, 0.5])
        self.assertFalse(kernel.exact)
        self.assertTrue(kernel.is_reversible())
        self.assertRaises(InvalidArgument, lambda: kernel.factors)


class TestSampling(unittest.TestCase):

    def test_step_stays_on_level(self):
        wc = build_complex(build_graphic(K4_EDGES))
        random = np.random.RandomState(12)
        bases = set(wc.bases)
        current = wc.bases[0]
        for _ in range(50):
            current = sample_step(wc, DOWN_UP, 3, current, random)
            self.assertIn(current, bases)

        current = wc.level(1)[0]
        for _ in range(50):
            current = sample_step(wc, UP_DOWN, 1, current, random)
            self.assertIn(current, wc.index(1))

    def test_invalid_current_state_is_rejected(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidState, sample_step, wc, DOWN_UP, 2, 0b111)
        self.assertRaises(InvalidState, sample_step, wc, DOWN_UP, 2, 0b001)
        self.assertRaises(InvalidArgument, sample_step, wc, DOWN_UP, 1, 0b001)

    def test_sampler_is_reproducible(self):
        wc = build_complex(build_uniform(4, 2))
        a = list(Sampler(wc, random_state=5).trajectory(20))
        b = list(Sampler(wc, random_state=5).trajectory(20))
        self.assertEqual(a, b)

    def test_one_step_frequencies_match_kernel_row(self):
        wc = _weighted_uniform()
        kernel = down_up_walk(wc, 2)
        start = wc.bases[0]
        check = one_step_frequencies(wc, kernel, start, 100000, random_state=2016)

        assert_array_almost_equal(kernel.as_float[kernel.index[start]], check.expected)
        self.assertAlmostEqual(1.0, check.frequencies.sum())
        self.assertGreaterEqual(check.multiplier, 3.0)
        self.assertTrue(check.passed)
        self.assertTrue(np.all(check.frequencies[check.expected == 0] == 0))

    def test_frequency_multiplier_is_bonferroni_adjusted(self):
        wc = build_complex(build_uniform(4, 2))
        kernel = down_up_walk(wc, 2)
        check = one_step_frequencies(wc, kernel, wc.bases[0], 10, random_state=0)
        cells = int((check.expected > 0).sum())
        self.assertEqual(5, cells)
        self.assertAlmostEqual(norm.sf(3.0) / cells, norm.sf(check.multiplier))


class TestLevelFunctions(unittest.TestCase):

    def test_negative_values_are_rejected(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidFunction, LevelFunction, 2, wc.level(2), [1, -1, 1])
        self.assertRaises(InvalidFunction, LevelFunction, 2, wc.level(2), [1, 1])

    def test_normalisation(self):
        wc = _weighted_uniform()
        pi = level_distribution(wc, 2)
        f = LevelFunction(2, wc.level(2), np.arange(1, 7)).normalize(pi)
        self.assertAlmostEqual(1.0, f.expectation(pi))
        self.assertTrue(f.normalized)

    def test_pushed_down_function_keeps_expectation(self):
        wc = _weighted_uniform()
        f = LevelFunction(2, wc.level(2), np.arange(1, 7))
        for i in [1, 2]:
            pushed = push_down(wc, f, i)
            self.assertEqual(i, pushed.level)
            self.assertAlmostEqual(f.expectation(level_distribution(wc, 2)),
                                   pushed.expectation(level_distribution(wc, i)))

    def test_push_down_is_the_conditional_expectation(self):
        weights = dict((mask, Fraction(1 + mask % 5, 1 + mask % 3))
                       for mask in build_complex(build_graphic(K4_EDGES)).bases)
        wc = build_complex(build_graphic(K4_EDGES), weights)
        for k in [2, 3]:
            for i in range(1, k):
                operator = push_down_operator(wc, k, i)
                self.assertEqual(wc.level(i), operator.rows)
                for row, mask in zip(operator.matrix, wc.level(i)):
                    conditional = conditional_distribution(wc, mask, k - i)
                    self.assertEqual(list(conditional.probabilities), list(row))

    def test_push_down_operator_at_the_same_level_is_the_identity(self):
        wc = _weighted_uniform()
        operator = push_down_operator(wc, 2, 2)
        self.assertTrue(np.all(operator.matrix == np.eye(6, dtype=int)))
        self.assertRaises(InvalidArgument, push_down_operator, wc, 3, 1)

    def test_push_down_rejects_level_zero(self):
        wc = build_complex(build_uniform(3, 2))
        f = LevelFunction.constant(wc, 2)
        self.assertRaises(InvalidArgument, push_down, wc, f, 0)
