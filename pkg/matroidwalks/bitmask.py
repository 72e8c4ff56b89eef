"""
Subsets of the ground set {0, ..., n-1} are stored as python integers, bit i set iff element i
is in the subset.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

from fractions import Fraction

from matroidwalks.errors import InvalidParameters


def mask_from_elements(elements):
    mask = 0
    for element in elements:
        element = int(element)
        if element < 0:
            raise InvalidParameters('Elements are 0-indexed, got {!r}'.format(element))
        mask |= 1 << element
    return mask


def elements_of(mask):
    elements = []
    i = 0
    while mask:
        if mask & 1:
            elements.append(i)
        mask >>= 1
        i += 1
    return elements


def cardinality(mask):
    return bin(mask).count('1')


def full_mask(n):
    return (1 << n) - 1


def subsets_of(mask):
    """
    All submasks of `mask`, in ascending integer order.
    """
    ans = []
    sub = mask
    while True:
        ans.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return ans[::-1]


def format_mask(mask):
    """'0,2,3' style label used in descriptors and reports."""
    return ','.join(str(e) for e in elements_of(mask))


def parse_mask(label):
    label = label.strip()
    if not label:
        return 0
    return mask_from_elements(int(e) for e in label.split(','))


def parse_rational(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InvalidParameters('Cannot parse {!r} as a rational'.format(value))


def format_rational(value):
    value = Fraction(value)
    return '{}/{}'.format(value.numerator, value.denominator)
