import itertools
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from dcolor.algo import FixedPermutation, FixedStart, RandomStart, StartPolicy, UniformRandom
from dcolor.model import Graph
from dcolor.oracle import ExactValue, StateSpaceGuardError, MAX_PERMUTATION_VERTICES, check_coloring_space
from dcolor.oracle.states import Labels, canonical, enumerate_canonical, block_count, falling_factorial, \
    conflicted_of, free_count, free_targets


class AllPermutationsAverage:
    """
    Visiting order drawn uniformly over all permutations, i.e. uniformly random Step-2 selection.
    """

    def __str__(self):
        return 'all-permutations'


PersistentOrder = Union[AllPermutationsAverage, FixedPermutation, UniformRandom]


class PersistentExpectation:
    """
    Exact per-vertex expected Step-3 draws of the persistent process. A conflicted vertex with f free
    colors draws D/f times in expectation and settles on a uniform free color, so the recursion
    branches over the f free colors with weight 1/f each.
    """

    def __init__(self, g: Graph, palette_size: int, order: PersistentOrder):
        check_coloring_space(g.get_n(), palette_size)
        self.graph = g
        self.palette_size = palette_size
        if isinstance(order, FixedPermutation):
            if len(order.get_order()) != g.get_n():
                raise ValueError(f'Order covers {len(order.get_order())} vertices but graph has {g.get_n()}')
            self.position = {v: ndx for ndx, v in enumerate(order.get_order())}
        elif isinstance(order, (AllPermutationsAverage, UniformRandom)):
            if g.get_n() > MAX_PERMUTATION_VERTICES:
                raise StateSpaceGuardError(f'All-permutations average limited to n <= {MAX_PERMUTATION_VERTICES}')
            self.position = None
        else:
            raise ValueError(f'Unsupported persistent order: {order}')
        self.zero = tuple(Fraction(0) for _ in range(g.get_n()))
        self.memo: Dict[Labels, Tuple[Fraction, ...]] = {}

    def expected(self, labels: Labels) -> Tuple[Fraction, ...]:
        if labels in self.memo:
            return self.memo[labels]
        conflicted = conflicted_of(self.graph, labels)
        if not conflicted:
            return self.zero
        if self.position is None:
            choices = conflicted
        else:
            choices = [min(conflicted, key=lambda v: self.position[v])]

        total = [Fraction(0)] * self.graph.get_n()
        share = Fraction(1, len(choices))
        for v in choices:
            free = free_count(self.graph, labels, v, self.palette_size)
            if free == 0:
                raise ValueError(f'Vertex {v} has no free color with D={self.palette_size}')
            total[v] += share * Fraction(self.palette_size, free)
            for (target, weight) in free_targets(self.graph, labels, v, self.palette_size):
                branch = share * Fraction(weight, free)
                for u, value in enumerate(self.expected(target)):
                    if value:
                        total[u] += branch * value
        result = tuple(total)
        self.memo[labels] = result
        return result


def _start_weights(g: Graph, palette_size: int, start: StartPolicy) -> List[Tuple[Labels, Fraction]]:
    n = g.get_n()
    if isinstance(start, RandomStart):
        check_coloring_space(n, palette_size)
        total = palette_size ** n
        return [(labels, Fraction(falling_factorial(palette_size, block_count(labels)), total))
                for labels in enumerate_canonical(n, palette_size)]
    elif isinstance(start, FixedStart):
        coloring = start.get_coloring()
        coloring.check_graph(g)
        if max(coloring.get_colors()) > palette_size:
            raise ValueError(f'Fixed start uses colors beyond palette size {palette_size}')
        return [(canonical(coloring.get_colors()), Fraction(1))]
    else:
        raise ValueError(f'Unsupported start policy: {start}')


def exact_expected_recolorings_persistent_per_vertex(g: Graph, palette_size: int, start: StartPolicy,
                                                     order: PersistentOrder) -> List[ExactValue]:
    expectation = PersistentExpectation(g, palette_size, order)
    totals = [Fraction(0)] * g.get_n()
    for (labels, weight) in _start_weights(g, palette_size, start):
        for v, value in enumerate(expectation.expected(labels)):
            totals[v] += weight * value
    return [ExactValue(value) for value in totals]


def exact_expected_recolorings_persistent(g: Graph, palette_size: int, start: StartPolicy,
                                          order: PersistentOrder) -> ExactValue:
    per_vertex = exact_expected_recolorings_persistent_per_vertex(g, palette_size, start, order)
    return ExactValue(sum((value.get_value() for value in per_vertex), Fraction(0)))


def persistent_average_over_permutations(g: Graph, palette_size: int, start: StartPolicy) -> ExactValue:
    """
    Literal average of the fixed-order expectation over all n! visiting orders.
    """
    n = g.get_n()
    if n > MAX_PERMUTATION_VERTICES:
        raise StateSpaceGuardError(f'Permutation enumeration limited to n <= {MAX_PERMUTATION_VERTICES}')
    total = Fraction(0)
    count = 0
    for order in itertools.permutations(range(n)):
        total += exact_expected_recolorings_persistent(g, palette_size, start, FixedPermutation(order)).get_value()
        count += 1
    return ExactValue(total / count)
