from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import unittest
from fractions import Fraction

import numpy as np

from matroidwalks.complex import build_complex
from matroidwalks.contraction import LevelChecks, kl_decay_trajectory, quadratic_bound_check, \
    verify_chain_rule, verify_entropy_contraction, verify_link_mlsc, verify_one_step_kl, \
    verify_pdown_entropy, verify_push_down, verify_vertex_decomposition
from matroidwalks.errors import InvalidArgument, InvalidDistribution, InvalidFunction
from matroidwalks.matroid import build_graphic, build_uniform
from matroidwalks.random_initialisation import random_distribution_generator
from matroidwalks.walks import LevelFunction, down_up_walk, up_down_walk

K4_EDGES = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def _weighted_uniform():
    weights = {0b0011: Fraction(3), 0b0101: Fraction(1, 2), 0b1001: Fraction(1),
               0b0110: Fraction(2), 0b1010: Fraction(5), 0b1100: Fraction(1, 7)}
    return build_complex(build_uniform(4, 2), weights)


class TestLevelChecks(unittest.TestCase):

    def test_entropy_contracts_under_up_operator(self):
        random = np.random.RandomState(21)
        for wc in [_weighted_uniform(), build_complex(build_graphic(K4_EDGES))]:
            for k in range(2, wc.rank + 1):
                checks = LevelChecks(wc, k)
                for _ in range(25):
                    f = np.exp(2 * random.randn(len(checks.pi)))
                    result = checks.entropy_contraction(f)
                    self.assertTrue(result.passed, msg='{} vs {}'.format(result.lhs, result.rhs))

    def test_indicator_functions_contract(self):
        wc = build_complex(build_graphic(K4_EDGES))
        checks = LevelChecks(wc, 3)
        for i in range(len(checks.pi)):
            f = np.zeros(len(checks.pi))
            f[i] = 1.0
            self.assertTrue(checks.entropy_contraction(f).passed)

    def test_chain_rules_are_identities(self):
        wc = build_complex(build_graphic(K4_EDGES))
        checks = LevelChecks(wc, 3)
        random = np.random.RandomState(8)
        for _ in range(10):
            f = np.exp(random.randn(len(checks.pi)))
            for result in [checks.chain_rule(f), checks.vertex_chain_rule(f)]:
                self.assertTrue(result.passed)
                self.assertTrue(result.mixture_identity)
                self.assertTrue(result.sum_entropy_bound)
                self.assertAlmostEqual(result.lhs, result.rhs)

    def test_push_down_identities(self):
        random = np.random.RandomState(13)
        wc = build_complex(build_uniform(5, 3))
        checks = LevelChecks(wc, 3)
        for _ in range(10):
            f = np.exp(random.randn(len(checks.pi)))
            for i in [1, 2]:
                result = checks.push_down(f, i)
                self.assertTrue(result.passed, msg=str(result.deviation))
                self.assertTrue(result.expectation_preserved)
                self.assertTrue(result.measure_identity)
        self.assertRaises(InvalidArgument, checks.push_down, f, 3)

    def test_push_down_of_level_function(self):
        wc = _weighted_uniform()
        f = LevelFunction(2, wc.level(2), np.arange(1, 7))
        result = verify_push_down(wc, f, 1)
        self.assertTrue(result.passed)
        self.assertTrue(result.expectation_preserved)
        self.assertTrue(result.measure_identity)

    def test_wrappers_agree_with_level_checks(self):
        wc = _weighted_uniform()
        f = LevelFunction(2, wc.level(2), np.arange(1, 7))
        self.assertTrue(verify_entropy_contraction(wc, 2, f).passed)
        self.assertTrue(verify_chain_rule(wc, 2, f).passed)
        self.assertTrue(verify_vertex_decomposition(wc, 2, f).passed)

    def test_invalid_inputs_are_rejected(self):
        wc = _weighted_uniform()
        self.assertRaises(InvalidArgument, LevelChecks, wc, 1)
        self.assertRaises(InvalidArgument, LevelChecks, wc, 3)

        wrong_level = LevelFunction.constant(wc, 1)
        self.assertRaises(InvalidFunction, verify_entropy_contraction, wc, 2, wrong_level)
        self.assertRaises(InvalidFunction, verify_chain_rule, wc, 2, np.ones(3))
        self.assertRaises(InvalidFunction, verify_chain_rule, wc, 2, -np.ones(6))


class TestDownOperatorEntropy(unittest.TestCase):

    def test_down_operator_does_not_increase_entropy(self):
        wc = build_complex(build_graphic(K4_EDGES))
        random = np.random.RandomState(3)
        for k in [2, 3]:
            size = len(wc.level(k - 1))
            for _ in range(10):
                result = verify_pdown_entropy(wc, k, np.exp(random.randn(size)))
                self.assertTrue(result.passed)
                self.assertTrue(result.expectation_preserved)

    def test_invalid_level_is_rejected(self):
        wc = _weighted_uniform()
        self.assertRaises(InvalidArgument, verify_pdown_entropy, wc, 1, np.ones(1))


class TestOneStepDecay(unittest.TestCase):

    def test_relative_entropy_decays_by_guaranteed_rate(self):
        wc = build_complex(build_graphic(K4_EDGES))
        for kernel in [down_up_walk(wc, 3), down_up_walk(wc, 2), up_down_walk(wc, 1),
                       up_down_walk(wc, 2)]:
            generator = random_distribution_generator(len(kernel), random_state=17)
            for _ in range(10):
                result = verify_one_step_kl(kernel, next(generator))
                self.assertTrue(result.passed, msg=repr(kernel))
                self.assertTrue(result.pdown_passed, msg=repr(kernel))
                self.assertTrue(result.pinsker_passed, msg=repr(kernel))

    def test_point_mass_start(self):
        wc = _weighted_uniform()
        kernel = down_up_walk(wc, 2)
        tau = np.zeros(len(kernel))
        tau[0] = 1.0
        self.assertTrue(verify_one_step_kl(kernel, tau).passed)

    def test_invalid_distributions_are_rejected(self):
        kernel = down_up_walk(_weighted_uniform(), 2)
        self.assertRaises(InvalidDistribution, verify_one_step_kl, kernel, np.ones(6))
        self.assertRaises(InvalidDistribution, verify_one_step_kl, kernel, np.ones(3) / 3)


class TestLinks(unittest.TestCase):

    def test_quadratic_bound_on_uniform_matroid(self):
        wc = build_complex(build_uniform(3, 2))
        largest, passed = quadratic_bound_check(wc, 0, n_functions=200, random_state=1)
        self.assertAlmostEqual(1.0, largest)
        self.assertTrue(passed)

    def test_quadratic_bound_on_weighted_instance(self):
        wc = _weighted_uniform()
        largest, passed = quadratic_bound_check(wc, 0, n_functions=200, random_state=1)
        self.assertGreaterEqual(largest, 1.0 - 1e-12)
        self.assertTrue(passed)

    def test_link_walks_have_modified_constant_one_half(self):
        wc = build_complex(build_uniform(3, 2))
        report = verify_link_mlsc(wc, 0, restarts=4, random_state=2, n_functions=50)
        self.assertTrue(report.passed)
        self.assertTrue(report.quadratic_passed)
        self.assertAlmostEqual(0.75, report.gap)
        self.assertTrue(report.gap_passed)

        wc = build_complex(build_graphic(K4_EDGES))
        report = verify_link_mlsc(wc, 0b000001, restarts=4, random_state=2, n_functions=50)
        self.assertTrue(report.passed)
        self.assertTrue(report.gap_passed)

    def test_link_of_large_set_is_rejected(self):
        wc = build_complex(build_uniform(3, 2))
        self.assertRaises(InvalidArgument, verify_link_mlsc, wc, 0b001, restarts=1)


class TestKlDecayTrajectory(unittest.TestCase):

    def test_trajectory_on_uniform_matroid(self):
        wc = build_complex(build_uniform(3, 2))
        kernel = down_up_walk(wc, 2)
        trajectory = kl_decay_trajectory(kernel, 0b011, 5)

        self.assertEqual(list(range(6)), list(trajectory.index))
        self.assertAlmostEqual(np.log(3), trajectory.loc[0, 'kl'])
        for t in range(6):
            self.assertAlmostEqual(2 / 3.0 * 0.25 ** t, trajectory.loc[t, 'tv'])
        self.assertTrue(trajectory['contracted'].all())
        self.assertTrue(trajectory['pinsker'].all())
        self.assertTrue((trajectory['kl'] <= trajectory['envelope'] + 1e-12).all())

    def test_unknown_start_is_rejected(self):
        kernel = down_up_walk(build_complex(build_uniform(3, 2)), 2)
        self.assertRaises(InvalidArgument, kl_decay_trajectory, kernel, 0b111, 3)
