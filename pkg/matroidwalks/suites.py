"""
Experiment suites run by the command line. Every suite returns a report table and whether all
of its hard assertions passed.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import itertools
import logging
import time
from collections import namedtuple
from fractions import Fraction
from math import factorial, sqrt

import numpy as np
import pandas as pd

from matroidwalks.bitmask import cardinality, format_mask
from matroidwalks.complex import pair_weight_matrix
from matroidwalks.concentration import example_observables, tail_table, verify_lipschitz
from matroidwalks.config import MAX_AXIOM_CHECK, MAX_SCP_CHECK, OPTIMIZER_TOL, \
    SPECTRAL_MATCH_TOL
from matroidwalks.constant_search import estimate_lsc, estimate_mlsc, SANDWICH_SLACK
from matroidwalks.contraction import LevelChecks, quadratic_bound_check, verify_link_mlsc, \
    verify_one_step_kl
from matroidwalks.functionals import MixingBounds, alpha_indicator_bound, mixing_bounds, \
    spectral_gap
from matroidwalks.matroid import verify_axioms
from matroidwalks.mixing import exact_mixing_time
from matroidwalks.negdep import GeneratingPolynomial, theta_example, basis_distribution, \
    ncd_check, pairwise_negative_dependence, partial_derivative_hessian, scp_check, \
    slc_check, srp_quadratic_check, theta_thresholds
from matroidwalks.random_initialisation import random_distribution_generator, \
    random_level_function_generator
from matroidwalks.walks import DOWN_UP, UP_DOWN, adjoint_identity_holds, bases_exchange, \
    down_up_walk, one_step_frequencies, rwup_decomposition_holds, up_down_walk

logger = logging.getLogger('matroidwalks.suites')

SuiteResult = namedtuple('SuiteResult', ['suite', 'table', 'passed'])

SAMPLER_DRAWS = 100000
THETA_VALUES = (Fraction(0), Fraction(1, 10), Fraction(1), Fraction(3), Fraction(6))
THRESHOLD_TOL = 1e-4


def walk_kernels(wc):
    for k in range(1, wc.rank):
        yield up_down_walk(wc, k)
    for k in range(2, wc.rank + 1):
        yield down_up_walk(wc, k)


def _seed(config, offset=0):
    return None if config.seed is None else (int(config.seed) + offset) % 2 ** 32


def _admissible_bases(wc):
    """Independent sets I with |I| <= r - 2."""
    return [mask for k in range(0, wc.rank - 1) for mask in wc.level(k)]


def axioms_suite(wc, config):
    rows = []
    if wc.oracle is not None and wc.oracle.n <= MAX_AXIOM_CHECK:
        report = verify_axioms(wc.oracle)
        for axiom, row in report.iterrows():
            rows.append((axiom, None, None, bool(row['passed'])))

    for check, passed in wc.invariant_report().items():
        rows.append((check, None, None, bool(passed)))

    for kernel in walk_kernels(wc):
        rows.append(('row_stochastic', kernel.level, kernel.walk, kernel.is_row_stochastic()))
        rows.append(('detailed_balance', kernel.level, kernel.walk, kernel.reversible))
        rows.append(('stationary', kernel.level, kernel.walk, kernel.is_stationary()))

    for k in range(wc.rank):
        rows.append(('adjoint_identity', k, None, adjoint_identity_holds(wc, k)))
    for k in range(1, wc.rank):
        rows.append(('link_decomposition', k, UP_DOWN, rwup_decomposition_holds(wc, k)))

    table = pd.DataFrame(rows, columns=['check', 'level', 'walk', 'passed'])
    return table, bool(table['passed'].all())


def walks_suite(wc, config):
    gaps = {}
    rows = []
    for kernel in walk_kernels(wc):
        gap = spectral_gap(kernel)
        gaps[(kernel.walk, kernel.level)] = gap
        frequencies = one_step_frequencies(wc, kernel, kernel.states[0], SAMPLER_DRAWS,
                                           random_state=_seed(config, kernel.level))
        rows.append([kernel.walk, kernel.level, len(kernel), gap, float(kernel.guaranteed_rate),
                     frequencies.multiplier, frequencies.excess, frequencies.passed])

    for row in rows:
        walk, level = row[0], row[1]
        partner = (DOWN_UP, level + 1) if walk == UP_DOWN else (UP_DOWN, level - 1)
        match = partner not in gaps or abs(gaps[partner] - row[3]) <= SPECTRAL_MATCH_TOL
        row.append(match)

    table = pd.DataFrame(rows, columns=['walk', 'level', 'states', 'lambda', 'guaranteed_rate',
                                        'sigma_multiplier', 'sampler_excess', 'sampler_passed',
                                        'gap_match'])
    table['passed'] = table['sampler_passed'] & table['gap_match']
    return table, bool(table['passed'].all()) if len(table) else True


def _bound_forms(kernel, eps, gap, alpha):
    pi_min = kernel.pi[kernel.pi > 0].min()
    if not 0 < pi_min < 1:
        return MixingBounds(None, None, None)
    return mixing_bounds(float(kernel.guaranteed_rate), pi_min, eps, gap=gap, alpha=alpha)


def constants_suite(wc, config):
    rows = []
    for kernel in walk_kernels(wc):
        rate = float(kernel.guaranteed_rate)
        gap = spectral_gap(kernel)
        rho = estimate_mlsc(kernel, restarts=config.restarts, random_state=_seed(config))
        alpha = estimate_lsc(kernel, restarts=config.restarts, random_state=_seed(config))
        mixing = exact_mixing_time(kernel, config.eps)
        bounds = _bound_forms(kernel, config.eps, gap, alpha.value)
        rows.append(dict(level=kernel.level, walk=kernel.walk, states=len(kernel), **{
            'lambda': gap, 'rho_hat': rho.value, 'alpha_hat': alpha.value,
            'bound_1_over_k': rate, 'exact_tmix': mixing.exact_t, 'mlsi_bound': mixing.bound_t,
            'spectral_bound': bounds.spectral, 'lsi_bound': bounds.log_sobolev,
            'converged': rho.converged and alpha.converged,
            'rho_below_twice_lambda': rho.value <= 2 * gap + SANDWICH_SLACK,
            'four_alpha_below_rho': 4 * alpha.value <= rho.value + SANDWICH_SLACK,
            'alpha_below_indicator_bound':
                alpha.value <= alpha_indicator_bound(kernel.stationary) + OPTIMIZER_TOL,
            'passed': rho.value >= rate - OPTIMIZER_TOL}))

    for mask in _admissible_bases(wc):
        report = verify_link_mlsc(wc, mask, restarts=config.restarts,
                                  random_state=_seed(config), n_functions=config.random_functions)
        rows.append(dict(level=cardinality(mask), walk='link', link=format_mask(mask),
                         states=len(report.search.witness), **{
                             'lambda': report.gap, 'rho_hat': report.search.value,
                             'bound_1_over_k': 0.5, 'converged': report.search.converged,
                             'quadratic_max': report.quadratic_max,
                             'passed': report.passed and report.quadratic_passed and
                             report.gap_passed}))

    table = pd.DataFrame(rows)
    return table, bool(table['passed'].all()) if len(table) else True


def _summary(check, level, walk, results, slack):
    failures = sum(1 for result in results if not result.passed)
    worst = min(slack(result) for result in results) if results else None
    return dict(check=check, level=level, walk=walk, trials=len(results), failures=failures,
                worst_slack=worst, passed=failures == 0)


def contraction_suite(wc, config):
    n_functions = config.random_functions
    rows = []
    for k in range(2, wc.rank + 1):
        checks = LevelChecks(wc, k)
        generator = random_level_function_generator(checks.pi.as_float,
                                                     random_state=_seed(config, k))
        functions = list(itertools.islice(generator, n_functions))

        contraction = [checks.entropy_contraction(f, tol=config.tol) for f in functions]
        rows.append(_summary('entropy_contraction', k, None, contraction,
                             lambda r: r.lhs - r.rhs))

        chain = [checks.chain_rule(f, tol=config.tol) for f in functions]
        rows.append(_summary('chain_rule', k, None, chain, lambda r: -abs(r.lhs - r.rhs)))
        rows[-1]['passed'] = rows[-1]['passed'] and all(r.mixture_identity and r.sum_entropy_bound
                                                        for r in chain)

        vertex = [checks.vertex_chain_rule(f, tol=config.tol) for f in functions]
        rows.append(_summary('vertex_chain_rule', k, None, vertex,
                             lambda r: -abs(r.lhs - r.rhs)))
        rows[-1]['passed'] = rows[-1]['passed'] and all(r.mixture_identity for r in vertex)

        for i in range(1, k):
            pushed = [checks.push_down(f, i, tol=config.tol) for f in functions]
            rows.append(_summary('push_down', k, None, pushed, lambda r: -r.deviation))
            rows[-1]['target_level'] = i
            rows[-1]['passed'] = rows[-1]['passed'] and all(
                r.expectation_preserved and r.measure_identity for r in pushed)

    for kernel in walk_kernels(wc):
        generator = random_distribution_generator(len(kernel),
                                                  random_state=_seed(config, 100 + kernel.level))
        steps = [verify_one_step_kl(kernel, tau, tol=config.tol)
                 for tau in itertools.islice(generator, n_functions)]
        rows.append(_summary('one_step_kl', kernel.level, kernel.walk, steps,
                             lambda r: r.rhs - r.lhs))
        rows[-1]['passed'] = rows[-1]['passed'] and all(r.pdown_passed and r.pinsker_passed
                                                        for r in steps)

    for mask in _admissible_bases(wc):
        largest, passed = quadratic_bound_check(wc, mask, n_functions=n_functions,
                                                random_state=_seed(config, mask))
        rows.append(dict(check='quadratic_bound', level=cardinality(mask), walk=None,
                         link=format_mask(mask), trials=n_functions + 1,
                         failures=0 if passed else 1, worst_slack=1 - largest, passed=passed))

    table = pd.DataFrame(rows)
    return table, bool(table['passed'].all()) if len(table) else True


def mixing_suite(wc, config):
    rows = []
    for kernel in walk_kernels(wc):
        result = exact_mixing_time(kernel, config.eps)
        within = result.exact_t is not None and \
            (result.bound_t is None or result.exact_t <= result.bound_t)
        rows.append(dict(level=kernel.level, walk=kernel.walk, states=len(kernel),
                         eps=config.eps, exact_t=result.exact_t, mlsi_bound=result.bound_t,
                         worst_start=format_mask(kernel.states[result.worst_start])
                         if result.worst_start is not None else None,
                         passed=within))
    table = pd.DataFrame(rows)
    return table, bool(table['passed'].all()) if len(table) else True


def concentration_suite(wc, config):
    kernel = bases_exchange(wc)
    frames = []
    passed = True
    for f in example_observables(wc):
        smallest, lipschitz_ok = verify_lipschitz(kernel, f)
        table = tail_table(kernel, f).reset_index()
        table.insert(0, 'observable', f.name)
        table['verified_c'] = smallest
        table['passed'] = table['passed'] & lipschitz_ok
        passed = passed and bool(table['passed'].all())
        frames.append(table)
    return pd.concat(frames, ignore_index=True), passed


def slc_suite(wc, config):
    distribution = basis_distribution(wc)
    report = slc_check(distribution)

    rows = []
    for _, row in report.table.iterrows():
        rows.append(dict(check='slc', I=row['I'], value=row['positive_eigenvalues'],
                         passed=bool(row['one_positive'] and row['agree'])))

    g = GeneratingPolynomial.from_distribution(distribution)
    z_r = wc.Z[wc.rank]
    for mask in _admissible_bases(wc):
        weights = pair_weight_matrix(wc, mask)
        hessian = partial_derivative_hessian(g, mask).matrix
        elements = weights.elements
        scalar = factorial(wc.rank - cardinality(mask) - 2) * z_r
        relation = bool(np.all(weights.matrix == scalar * hessian[np.ix_(elements, elements)]))
        positive = weights.positive_eigenvalue_count()
        rows.append(dict(check='pair_weights', I=format_mask(mask), value=positive,
                         passed=positive <= 1 and relation))

    pairs = pairwise_negative_dependence(distribution)
    rows.append(dict(check='pairwise_negative_dependence', I=None,
                     value=int((~pairs['passed']).sum()), passed=bool(pairs['passed'].all())))

    if distribution.degrees == [2]:
        srp = srp_quadratic_check(distribution, random_state=_seed(config))
        # Violations contradict strong log-concavity, their absence proves nothing
        rows.append(dict(check='srp_quadratic', I=None, value=srp.points,
                         passed=srp.passed or not report.passed))

    table = pd.DataFrame(rows)
    return table, bool(table['passed'].all()) and report.disagreements == 0


def scp_suite(wc, config):
    distribution = basis_distribution(wc)
    rows = []
    scp = scp_check(distribution) if distribution.n <= MAX_SCP_CHECK else None
    ncd = ncd_check(distribution)
    if scp is not None:
        rows.append(dict(check='scp', passed=scp.passed, checked=scp.checked,
                         skipped=scp.skipped, witness=scp.witness))
    rows.append(dict(check='ncd', passed=ncd.passed, checked=ncd.checked, witness=ncd.witness))
    table = pd.DataFrame(rows)
    return table, scp is None or not scp.passed or ncd.passed


def theta_scan_suite(config):
    lower_root = 3 - 2 * sqrt(2)
    upper_root = 3 + 2 * sqrt(2)
    seed = _seed(config) if config.seed is not None else 0

    rows = []
    for theta in THETA_VALUES:
        distribution = theta_example(theta)
        slc = slc_check(distribution).passed
        scp = scp_check(distribution).passed
        ncd = ncd_check(distribution).passed
        srp = srp_quadratic_check(distribution, random_state=seed).passed
        expected_slc = lower_root <= theta <= upper_root
        passed = slc == expected_slc and scp and (ncd or not scp) and (srp or not slc)
        if theta == 6:
            passed = passed and not srp
        rows.append(dict(theta=theta, slc=slc, expected_slc=expected_slc, scp=scp, ncd=ncd,
                         srp=srp, passed=passed))

    lower, upper = theta_thresholds()
    rows.append(dict(theta='lower_threshold', value=lower, expected=lower_root,
                     passed=abs(lower - lower_root) <= THRESHOLD_TOL))
    rows.append(dict(theta='upper_threshold', value=upper, expected=upper_root,
                     passed=abs(upper - upper_root) <= THRESHOLD_TOL))

    table = pd.DataFrame(rows)
    return table, bool(table['passed'].all())


SUITE_FUNCTIONS = {
    'axioms': axioms_suite,
    'walks': walks_suite,
    'constants': constants_suite,
    'contraction': contraction_suite,
    'mixing': mixing_suite,
    'concentration': concentration_suite,
    'slc': slc_suite,
    'scp': scp_suite,
}


def run_suite(config, wc=None):
    """
    Runs `config.suite` on the weighted complex `wc` (unused by the theta scan).

    :return: `SuiteResult`
    """
    start = time.time()
    if config.suite == 'theta-scan':
        table, passed = theta_scan_suite(config)
    else:
        table, passed = SUITE_FUNCTIONS[config.suite](wc, config)

    _extras = dict(suite=config.suite, instance=repr(wc), passed=passed,
                   duration=time.time() - start)
    logger.debug('Suite {suite} on {instance}: passed={passed}. '
                 'Took: {duration:.2f} seconds'.format(**_extras), extra=_extras)
    return SuiteResult(config.suite, table, passed)
