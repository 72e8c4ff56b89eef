from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import unittest
from fractions import Fraction

import numpy as np
from numpy.testing import assert_array_almost_equal

from matroidwalks.complex import build_complex, conditional_distribution, contract, \
    level_distribution, marginal_mass, pair_weight_matrix
from matroidwalks.errors import InvalidArgument, InvalidSupport, InvalidWeight
from matroidwalks.matroid import build_graphic, build_partition, build_uniform


class TestWeightedComplex(unittest.TestCase):

    def setUp(self):
        self.wc = build_complex(build_uniform(3, 2))

    def test_weights_follow_recursion(self):
        wc = self.wc
        self.assertEqual(Fraction(6), wc.weight(0))
        for element in range(3):
            self.assertEqual(Fraction(2), wc.weight(1 << element))
        self.assertEqual(Fraction(0), wc.weight(0b111))

    def test_normalisers(self):
        self.assertEqual([6, 6, 3], self.wc.Z)
        self.assertEqual([1, 3, 3], self.wc.level_sizes)

    def test_invariants_hold_for_weighted_instances(self):
        weights = {0b0011: Fraction(3), 0b0101: Fraction(1, 2), 0b1001: Fraction(1),
                   0b0110: Fraction(2), 0b1010: Fraction(5), 0b1100: Fraction(1, 7)}
        wc = build_complex(build_uniform(4, 2), weights)
        self.assertTrue(wc.invariant_report().all())

        wc = build_complex(build_graphic([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]))
        self.assertTrue(wc.invariant_report().all())

    def test_weight_on_non_basis_is_rejected(self):
        oracle = build_uniform(3, 2)
        self.assertRaises(InvalidSupport, build_complex, oracle, {0b001: 1})
        self.assertRaises(InvalidSupport, build_complex, oracle, {0b111: 1})

    def test_missing_basis_weight_is_rejected(self):
        self.assertRaises(InvalidSupport, build_complex, build_uniform(3, 2),
                          {0b011: 1, 0b101: 1})

    def test_non_positive_weights_are_rejected(self):
        self.assertRaises(InvalidWeight, build_complex, build_uniform(3, 2),
                          {0b011: 1, 0b101: 0, 0b110: 1})
        self.assertRaises(InvalidWeight, build_complex, build_uniform(3, 2),
                          {0b011: 1, 0b101: -1, 0b110: 1})

    def test_invalid_levels_are_rejected(self):
        self.assertRaises(InvalidArgument, self.wc.level, 3)
        self.assertRaises(InvalidArgument, self.wc.level, -1)

    def test_equality(self):
        self.assertEqual(self.wc, build_complex(build_uniform(3, 2)))
        self.assertNotEqual(self.wc, build_complex(build_uniform(3, 2),
                                                   {0b011: 2, 0b101: 1, 0b110: 1}))


class TestDistributions(unittest.TestCase):

    def setUp(self):
        self.wc = build_complex(build_uniform(3, 2), {0b011: 2, 0b101: 1, 0b110: 1})

    def test_level_distributions_sum_to_one(self):
        for k in range(self.wc.rank + 1):
            self.assertEqual(Fraction(1), level_distribution(self.wc, k).total())

    def test_level_distribution_of_bases(self):
        pi = level_distribution(self.wc, 2)
        self.assertEqual(Fraction(1, 2), pi[0b011])
        self.assertEqual(Fraction(1, 4), pi[0b110])

    def test_conditional_distribution_is_supported_on_supersets(self):
        dist = conditional_distribution(self.wc, 0b001, 1)
        self.assertEqual(2, dist.level)
        self.assertEqual(Fraction(1), dist.total())
        self.assertEqual(Fraction(2, 3), dist[0b011])
        self.assertEqual(Fraction(1, 3), dist[0b101])
        self.assertEqual(Fraction(0), dist[0b110])
        self.assertEqual([0b011, 0b101], dist.support)

    def test_conditional_distribution_rejects_dependent_base(self):
        self.assertRaises(InvalidArgument, conditional_distribution, self.wc, 0b111, 0)
        self.assertRaises(InvalidArgument, conditional_distribution, self.wc, 0b001, 2)

    def test_marginal_mass(self):
        self.assertEqual(Fraction(3, 4), marginal_mass(self.wc, 0b001))
        self.assertEqual(Fraction(1, 2), marginal_mass(self.wc, 0b100))
        self.assertEqual(Fraction(1), marginal_mass(self.wc, 0))


class TestContraction(unittest.TestCase):

    def test_contraction_keeps_weights(self):
        wc = build_complex(build_uniform(3, 2))
        contracted = contract(wc, 0b001)

        self.assertEqual(1, contracted.rank)
        self.assertEqual(0b110, contracted.ground_mask)
        self.assertEqual([[0], [0b010, 0b100]], [contracted.level(k) for k in range(2)])
        self.assertEqual(Fraction(2), contracted.weight(0))
        self.assertEqual(Fraction(1), contracted.weight(0b010))

    def test_contraction_by_basis_is_rejected(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidArgument, contract, wc, 0b011)

    def test_contraction_of_partition_matroid_is_partition_matroid(self):
        wc = build_complex(build_partition([[0, 1], [2, 3], [4, 5]]))
        contracted = contract(wc, 0b000001)
        self.assertEqual([1, 4, 4], contracted.level_sizes)
        self.assertTrue(contracted.invariant_report()['weight_recursion'])

    def test_contraction_commutes_with_conditioning(self):
        edges = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
        bases = build_complex(build_graphic(edges)).bases
        wc = build_complex(build_graphic(edges),
                           dict((mask, Fraction(1 + mask % 7, 2 + mask % 3)) for mask in bases))
        for size in range(wc.rank):
            for mask in wc.level(size):
                contracted = contract(wc, mask)
                for k in range(wc.rank - size + 1):
                    conditional = conditional_distribution(wc, mask, k)
                    expected = dict((state, p) for state, p in
                                    zip(conditional.states, conditional.probabilities) if p != 0)
                    reduced = level_distribution(contracted, k)
                    mapped = dict((state | mask, p) for state, p in
                                  zip(reduced.states, reduced.probabilities))
                    self.assertEqual(expected, mapped)


class TestPairWeightMatrix(unittest.TestCase):

    def test_uniform_pair_weights_have_one_positive_eigenvalue(self):
        wc = build_complex(build_uniform(3, 2))
        w = pair_weight_matrix(wc, 0)

        self.assertEqual([0, 1, 2], w.elements)
        assert_array_almost_equal(np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), w.as_float)
        assert_array_almost_equal([-1, -1, 2], w.eigenvalues())
        self.assertEqual(1, w.positive_eigenvalue_count())
        self.assertEqual(Fraction(6), w.base_weight)

    def test_pair_weight_matrix_needs_room_for_two_elements(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidArgument, pair_weight_matrix, wc, 0b001)
