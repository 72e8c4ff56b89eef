from __future__ import absolute_import
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

import io
import json
import logging

import networkx as nx
import pandas as pd
from cached_property import cached_property
from networkx.utils import UnionFind

from matroidwalks.bitmask import cardinality, elements_of, full_mask, mask_from_elements, \
    parse_mask, parse_rational
from matroidwalks.config import MAX_AXIOM_CHECK, MAX_GROUND_SET, MAX_LEVEL_SIZE
from matroidwalks.errors import InvalidArgument, InvalidParameters, SizeCapExceeded

logger = logging.getLogger('matroidwalks.matroid')

AXIOMS = ['empty_set', 'downward_closed', 'augmentation']


class IndependenceOracle(object):
    """
    Independence query on subsets of the ground set {0, ..., n-1}, given as bitmasks.

    Subclasses implement `is_independent`; levels M(0), ..., M(r) are enumerated from the
    empty set upwards, so they are only meaningful for downward closed families.
    """
    kind = None

    def __init__(self, n):
        n = int(n)
        if not 1 <= n <= MAX_GROUND_SET:
            raise InvalidParameters('Ground set size should be between 1 and {}, got {}'.format(
                MAX_GROUND_SET, n))
        self._n = n

    @property
    def n(self):
        return self._n

    @property
    def ground_mask(self):
        return full_mask(self._n)

    def is_independent(self, mask):
        raise NotImplementedError

    def __call__(self, mask):
        if mask & ~self.ground_mask:
            raise InvalidArgument('Subset {!r} has elements outside of the ground set of '
                                  'size {}'.format(elements_of(mask), self.n))
        return self.is_independent(mask)

    @cached_property
    def levels(self):
        if not self.is_independent(0):
            raise InvalidArgument('Empty set is not independent, levels are undefined')

        levels = [[0]]
        while True:
            candidates = set()
            for independent in levels[-1]:
                for element in range(self._n):
                    bit = 1 << element
                    if independent & bit:
                        continue
                    extended = independent | bit
                    if extended not in candidates and self.is_independent(extended):
                        candidates.add(extended)
            if not candidates:
                break
            if len(candidates) > MAX_LEVEL_SIZE:
                raise SizeCapExceeded('Level {} has more than {:,} independent sets'.format(
                    len(levels), MAX_LEVEL_SIZE))
            levels.append(sorted(candidates))
        return levels

    @property
    def rank(self):
        return len(self.levels) - 1

    @property
    def bases(self):
        return self.levels[-1]

    def describe(self):
        raise NotImplementedError

    def __repr__(self):
        return '{}({})'.format(self.__class__.__name__, self.describe())


class UniformMatroid(IndependenceOracle):
    kind = 'uniform'

    def __init__(self, n, r):
        super(UniformMatroid, self).__init__(n)
        r = int(r)
        if not 1 <= r <= self.n:
            raise InvalidParameters('Rank should be between 1 and n={}, got {}'.format(self.n, r))
        self._r = r

    def is_independent(self, mask):
        return cardinality(mask) <= self._r

    def describe(self):
        return dict(kind=self.kind, n=self.n, rank=self._r)


class PartitionMatroid(IndependenceOracle):
    """
    At most one element from each block.
    """
    kind = 'partition'

    def __init__(self, blocks):
        blocks = [sorted(int(e) for e in block) for block in blocks]
        if not blocks or any(len(block) == 0 for block in blocks):
            raise InvalidParameters('Blocks should be non-empty')

        seen = []
        for block in blocks:
            seen.extend(block)
        n = len(seen)
        if len(set(seen)) != n:
            raise InvalidParameters('Blocks {!r} overlap'.format(blocks))
        if set(seen) != set(range(n)):
            raise InvalidParameters('Blocks {!r} do not partition 0..{}'.format(blocks, n - 1))

        super(PartitionMatroid, self).__init__(n)
        self._blocks = blocks
        self._block_masks = [mask_from_elements(block) for block in blocks]

    @property
    def blocks(self):
        return self._blocks

    def is_independent(self, mask):
        for block_mask in self._block_masks:
            if cardinality(mask & block_mask) > 1:
                return False
        return True

    def describe(self):
        return dict(kind=self.kind, blocks=self._blocks)


class GraphicMatroid(IndependenceOracle):
    """
    Cycle matroid of a connected multigraph: element i is the i-th edge, independent sets are
    the forests and bases are the spanning trees.
    """
    kind = 'graphic'

    def __init__(self, edges):
        edges = [tuple(edge) for edge in edges]
        if any(len(edge) != 2 for edge in edges):
            raise InvalidParameters('Edges should be vertex pairs, got {!r}'.format(edges))
        super(GraphicMatroid, self).__init__(len(edges))

        graph = nx.MultiGraph()
        graph.add_edges_from(edges)
        if not nx.is_connected(graph):
            raise InvalidParameters('Graph with edges {!r} is not connected'.format(edges))

        self._edges = edges
        self._graph = graph

    @property
    def edges(self):
        return self._edges

    @property
    def vertices(self):
        return sorted(self._graph.nodes())

    def is_independent(self, mask):
        forest = UnionFind()
        for element in elements_of(mask):
            u, v = self._edges[element]
            if forest[u] == forest[v]:
                return False
            forest.union(u, v)
        return True

    def degrees(self, mask):
        """
        Vertex degrees in the subgraph spanned by the edges in `mask`.
        """
        degrees = dict((vertex, 0) for vertex in self._graph.nodes())
        for element in elements_of(mask):
            u, v = self._edges[element]
            degrees[u] += 1
            degrees[v] += 1
        return degrees

    def describe(self):
        return dict(kind=self.kind, edges=[list(edge) for edge in self._edges])


class ExplicitMatroid(IndependenceOracle):
    """
    Explicitly listed family. With `closure` the family is the downward closure of `sets`
    (a list of bases), otherwise `sets` is taken literally, which need not satisfy the axioms.
    """
    kind = 'explicit'

    def __init__(self, n, sets, closure=True):
        super(ExplicitMatroid, self).__init__(n)
        masks = set()
        for s in sets:
            mask = s if isinstance(s, int) else mask_from_elements(s)
            if mask & ~self.ground_mask:
                raise InvalidParameters('Set {!r} is not within 0..{}'.format(s, self.n - 1))
            masks.add(mask)

        self._generators = sorted(masks)
        if closure:
            family = set()
            for mask in masks:
                sub = mask
                while True:
                    family.add(sub)
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
            masks = family
        self._family = frozenset(masks)
        self._closure = closure

    def is_independent(self, mask):
        return mask in self._family

    def describe(self):
        key = 'bases' if self._closure else 'sets'
        return {'kind': self.kind, 'n': self.n,
                key: [elements_of(mask) for mask in self._generators]}


def build_uniform(n, r):
    return UniformMatroid(n, r)


def build_partition(blocks):
    return PartitionMatroid(blocks)


def build_graphic(edges):
    return GraphicMatroid(edges)


def build_explicit(n, sets, closure=True):
    return ExplicitMatroid(n, sets, closure=closure)


def _downward_closure_witness(oracle, independent_sets):
    for mask in independent_sets:
        for element in elements_of(mask):
            smaller = mask & ~(1 << element)
            if not oracle.is_independent(smaller):
                return elements_of(mask), elements_of(smaller)
    return None


def _augmentation_witness(oracle, independent_sets, adjacent_sizes_only):
    n = oracle.n
    extendable = {}
    for t in independent_sets:
        options = 0
        for element in range(n):
            bit = 1 << element
            if not t & bit and oracle.is_independent(t | bit):
                options |= bit
        extendable[t] = options

    sizes = dict((mask, cardinality(mask)) for mask in independent_sets)
    for s in independent_sets:
        for t in independent_sets:
            if adjacent_sizes_only:
                if sizes[s] != sizes[t] + 1:
                    continue
            elif sizes[s] <= sizes[t]:
                continue
            if not (s & ~t & extendable[t]):
                return elements_of(s), elements_of(t)
    return None


def verify_axioms(oracle, n=None):
    """
    Exhaustively checks the three independence axioms.

    :param oracle: independence oracle
    :param n: ground set size, defaults to `oracle.n`
    :return: DataFrame indexed by axiom name with `passed` and `witness` columns
    """
    n = oracle.n if n is None else int(n)
    if n > MAX_AXIOM_CHECK:
        raise SizeCapExceeded('Exhaustive axiom check is limited to n <= {}, got {}'.format(
            MAX_AXIOM_CHECK, n))

    independent_sets = [mask for mask in range(1 << n) if oracle.is_independent(mask)]

    results = {}
    empty = oracle.is_independent(0)
    results['empty_set'] = (empty, None if empty else [])

    witness = _downward_closure_witness(oracle, independent_sets)
    results['downward_closed'] = (witness is None, witness)

    # Size-adjacent pairs suffice once the family is downward closed
    witness = _augmentation_witness(oracle, independent_sets,
                                    adjacent_sizes_only=witness is None)
    results['augmentation'] = (witness is None, witness)

    report = pd.DataFrame([results[axiom] for axiom in AXIOMS], index=AXIOMS,
                          columns=['passed', 'witness'])
    logger.debug('Axiom check on {!r}: {}'.format(oracle, dict(report['passed'])))
    return report


def _oracle_from_descriptor(descriptor):
    kind = descriptor.get('kind')
    if kind == 'uniform':
        return build_uniform(descriptor['n'], descriptor['rank'])
    elif kind == 'partition':
        return build_partition(descriptor['blocks'])
    elif kind == 'graphic':
        return build_graphic(descriptor['edges'])
    elif kind == 'explicit':
        return build_explicit(descriptor['n'], descriptor['bases'], closure=True)
    raise InvalidParameters('Unknown matroid kind {!r}'.format(kind))


def load_descriptor(source):
    """
    Reads a JSON matroid descriptor.

    :param source: path, open file, JSON string or already parsed mapping
    :return: tuple of the oracle and the basis weights (`None` for all-ones weights)
    """
    if isinstance(source, dict):
        descriptor = source
    elif hasattr(source, 'read'):
        descriptor = json.load(source)
    elif source.lstrip().startswith('{'):
        descriptor = json.loads(source)
    else:
        with io.open(source, encoding='utf-8') as handle:
            descriptor = json.load(handle)

    if not isinstance(descriptor, dict):
        raise InvalidParameters('Matroid descriptor should be a JSON object')

    try:
        oracle = _oracle_from_descriptor(descriptor)
    except KeyError as e:
        raise InvalidParameters('Matroid descriptor is missing field {}'.format(e))

    weights = descriptor.get('weights')
    if weights is not None:
        weights = dict((parse_mask(label), parse_rational(value))
                       for label, value in weights.items())
    return oracle, weights
