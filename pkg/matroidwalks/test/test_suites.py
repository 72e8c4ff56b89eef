from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import unittest

from matroidwalks.catalog import build_instance
from matroidwalks.config import ExperimentConfig
from matroidwalks.suites import run_suite, walk_kernels


def _config(suite, matroid='U(2,3)', **kwargs):
    kwargs.setdefault('seed', 2017)
    kwargs.setdefault('restarts', 3)
    kwargs.setdefault('random_functions', 20)
    return ExperimentConfig(suite, matroid=matroid, **kwargs)


class TestSuites(unittest.TestCase):

    def test_walk_kernels(self):
        kernels = list(walk_kernels(build_instance('K4')))
        self.assertEqual([('up-down', 1), ('up-down', 2), ('down-up', 2), ('down-up', 3)],
                         [(kernel.walk, kernel.level) for kernel in kernels])

    def test_axioms(self):
        for name in ['U(2,4)', 'K4', 'theta-1']:
            result = run_suite(_config('axioms', name), build_instance(name))
            self.assertTrue(result.passed, msg=name)
            self.assertIn('augmentation', list(result.table['check']))

    def test_walks(self):
        result = run_suite(_config('walks'), build_instance('U(2,3)'))
        self.assertTrue(result.passed)
        self.assertEqual([0.75, 0.75], list(result.table['lambda'].round(12)))

    def test_constants(self):
        result = run_suite(_config('constants'), build_instance('U(2,3)'))
        self.assertTrue(result.passed)
        self.assertEqual(['up-down', 'down-up', 'link'], list(result.table['walk']))

    def test_contraction(self):
        result = run_suite(_config('contraction', 'theta-1'), build_instance('theta-1'))
        self.assertTrue(result.passed)
        self.assertTrue((result.table['failures'] == 0).all())
        pushed = result.table[result.table['check'] == 'push_down']
        self.assertEqual([(2, 1)], list(zip(pushed['level'], pushed['target_level'].astype(int))))
        self.assertTrue(pushed['passed'].all())

    def test_mixing(self):
        result = run_suite(_config('mixing', 'partition-4x2', eps=0.25),
                           build_instance('partition-4x2'))
        self.assertTrue(result.passed)
        bases_exchange = result.table[(result.table['walk'] == 'down-up') &
                                      (result.table['level'] == 4)].iloc[0]
        self.assertLessEqual(bases_exchange['exact_t'], bases_exchange['mlsi_bound'])

    def test_concentration(self):
        result = run_suite(_config('concentration', 'K4'), build_instance('K4'))
        self.assertTrue(result.passed)
        self.assertEqual({'subset-count', 'leaf-count', 'odd-degree-count'},
                         set(result.table['observable']))

    def test_negative_dependence(self):
        for name in ['U(2,4)', 'K4', 'theta-1']:
            wc = build_instance(name)
            self.assertTrue(run_suite(_config('slc', name), wc).passed, msg=name)
            self.assertTrue(run_suite(_config('scp', name), wc).passed, msg=name)

    def test_theta_scan(self):
        result = run_suite(ExperimentConfig('theta-scan'))
        self.assertTrue(result.passed)
        self.assertEqual(7, len(result.table))
