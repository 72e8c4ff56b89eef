from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals
import time

import pandas as pd

from matroidwalks.catalog import build_instance, catalog_names
from matroidwalks.config import RANDOMISED_SUITES, SUITES, ExperimentConfig
from matroidwalks.suites import run_suite

RANDOM_STATE = 125


def main(restarts, random_functions):

    rows = []
    for suite in SUITES:
        names = [None] if suite == 'theta-scan' else catalog_names()
        for name in names:
            config = ExperimentConfig(suite, matroid=name,
                                      seed=RANDOM_STATE if suite in RANDOMISED_SUITES else None,
                                      restarts=restarts, random_functions=random_functions)
            wc = build_instance(name) if name is not None else None

            start = time.time()
            result = run_suite(config, wc)
            rows.append((suite, name, result.passed, time.time() - start))

    timings = pd.DataFrame(rows, columns=['suite', 'matroid', 'passed', 'seconds'])
    print(timings.to_string(index=False))
    print('Total: {:.1f} seconds'.format(timings['seconds'].sum()))


if __name__ == '__main__':
    import sys
    import logging
    logging.basicConfig()
    logging.getLogger().setLevel(logging.DEBUG)

    try:
        restarts = int(sys.argv[1])
    except IndexError:
        restarts = 200

    try:
        random_functions = int(sys.argv[2])
    except IndexError:
        random_functions = 1000

    main(restarts, random_functions)
