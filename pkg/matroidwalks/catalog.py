"""
Bundled test instances, addressable by name from the command line.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import io
import json
import os
import re

from matroidwalks.complex import build_complex
from matroidwalks.errors import InvalidParameters
from matroidwalks.matroid import build_partition, load_descriptor

CATALOG_FILE = os.path.join(os.path.dirname(__file__), 'data', 'catalog.json')

_PARTITION_PATTERN = re.compile(r'^partition-(\d+)x2$')
MAX_GENERATED_BLOCKS = 8


def _bundled():
    with io.open(CATALOG_FILE, encoding='utf-8') as handle:
        return json.load(handle)


def catalog_names():
    return sorted(_bundled())


def load_instance(name):
    """
    Oracle and basis weights of a bundled instance, a `partition-nx2` instance (n <= 8) or a
    descriptor file.

    :return: tuple of the oracle and the weights (None for all ones)
    """
    bundled = _bundled()
    if name in bundled:
        return load_descriptor(bundled[name])

    match = _PARTITION_PATTERN.match(name)
    if match:
        n_blocks = int(match.group(1))
        if not 1 <= n_blocks <= MAX_GENERATED_BLOCKS:
            raise InvalidParameters('partition-nx2 is available for 1 <= n <= {}, got {}'.format(
                MAX_GENERATED_BLOCKS, n_blocks))
        return build_partition([[2 * i, 2 * i + 1] for i in range(n_blocks)]), None

    if os.path.exists(name):
        return load_descriptor(name)

    raise InvalidParameters('{!r} is neither a bundled matroid ({}) nor a descriptor file'.format(
        name, ', '.join(sorted(bundled))))


def build_instance(name):
    oracle, weights = load_instance(name)
    return build_complex(oracle, weights)
