from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import unittest
from fractions import Fraction

import numpy as np

from matroidwalks.complex import build_complex, level_distribution
from matroidwalks.concentration import LEAF_COUNT, ODD_DEGREE_COUNT, SUBSET_COUNT, Observable, \
    example_observables, exact_tail, herbst_bound, observable, one_step_variance, tail_table, \
    two_sided_bound, verify_lipschitz
from matroidwalks.errors import InvalidArgument, Unsupported
from matroidwalks.matroid import build_graphic, build_partition, build_uniform
from matroidwalks.walks import bases_exchange, down_up_walk

K4_EDGES = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def _cube(n):
    return build_complex(build_partition([[2 * i, 2 * i + 1] for i in range(n)]))


class TestBounds(unittest.TestCase):

    def test_two_sided_bound(self):
        self.assertAlmostEqual(2 * np.exp(-1), two_sided_bound(2, 2, 1))
        self.assertAlmostEqual(2 * np.exp(-1), two_sided_bound(2, 2, 1, cap=False))
        self.assertEqual(1.0, two_sided_bound(0, 2, 1))
        self.assertEqual(2.0, two_sided_bound(0, 2, 1, cap=False))

    def test_herbst_bound(self):
        self.assertAlmostEqual(np.exp(-0.5), herbst_bound(1, 1, 1))
        self.assertEqual(0.0, herbst_bound(1, 1, 0))
        self.assertRaises(InvalidArgument, herbst_bound, -1, 1, 1)
        self.assertRaises(InvalidArgument, herbst_bound, 1, 0, 1)


class TestObservables(unittest.TestCase):

    def test_hamming_weight_on_hypercube(self):
        wc = _cube(4)
        kernel = bases_exchange(wc)
        f = observable(wc, SUBSET_COUNT, subset=[0, 2, 4, 6])

        self.assertEqual(Fraction(1, 2), one_step_variance(kernel, f))
        self.assertEqual((1.0, True), verify_lipschitz(kernel, f))

        pi = level_distribution(wc, 4)
        self.assertEqual(Fraction(1, 8), exact_tail(pi, f, 2))
        self.assertEqual(Fraction(5, 8), exact_tail(pi, f, 1))
        self.assertEqual(Fraction(1), exact_tail(pi, f, 0))

    def test_default_subset_is_first_half(self):
        wc = build_complex(build_uniform(4, 2))
        f = observable(wc, SUBSET_COUNT)
        self.assertEqual([2, 1, 1, 1, 1, 0],
                         [int(v) for v in f.values])
        self.assertEqual(1, f.lipschitz)

    def test_graph_observables_respect_declared_constants(self):
        wc = build_complex(build_graphic(K4_EDGES))
        kernel = bases_exchange(wc)
        observables = example_observables(wc)
        self.assertEqual([SUBSET_COUNT, LEAF_COUNT, ODD_DEGREE_COUNT],
                         [f.name for f in observables])
        for f in observables:
            c, passed = verify_lipschitz(kernel, f)
            self.assertTrue(passed, msg=repr(f))
            self.assertLessEqual(c, f.lipschitz)

        # Stars have three leaves, paths two
        leaves = observable(wc, LEAF_COUNT)
        self.assertEqual({2, 3}, set(int(v) for v in leaves.values))

    def test_graph_observables_need_graphic_matroid(self):
        wc = build_complex(build_uniform(4, 2))
        self.assertRaises(Unsupported, observable, wc, LEAF_COUNT)
        self.assertRaises(Unsupported, observable, wc, 'edge-count')
        self.assertEqual(1, len(example_observables(wc)))

    def test_observable_on_wrong_level_is_rejected(self):
        wc = build_complex(build_graphic(K4_EDGES))
        f = observable(wc, SUBSET_COUNT, k=2)
        self.assertRaises(InvalidArgument, one_step_variance, bases_exchange(wc), f)
        self.assertRaises(InvalidArgument, Observable, 2, wc.level(2), [1, 2])


class TestTailTable(unittest.TestCase):

    def test_tails_are_below_bound(self):
        wc = _cube(4)
        kernel = bases_exchange(wc)
        f = observable(wc, SUBSET_COUNT, subset=[0, 2, 4, 6])
        table = tail_table(kernel, f)

        self.assertEqual(9, len(table))
        self.assertEqual(0.0, table.index[0])
        self.assertEqual(2.0, table.index[-1])
        self.assertTrue(table['passed'].all())
        self.assertAlmostEqual(0.125, table.loc[2.0, 'exact_tail'])
        self.assertAlmostEqual(0.5, table.loc[2.0, 'v_f'])

    def test_graph_observable_tails(self):
        wc = build_complex(build_graphic(K4_EDGES))
        kernel = down_up_walk(wc, 3)
        for f in example_observables(wc):
            table = tail_table(kernel, f, rho_hat=0.5)
            self.assertTrue(table['passed'].all(), msg=repr(f))
            self.assertIn('herbst_rho_hat', table.columns)
