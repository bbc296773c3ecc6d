import logging
import math
from collections import defaultdict, deque
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import linalg

from dcolor.algo import FixedStart, RandomStart, StartPolicy, SchedulerPolicy, UniformRandom
from dcolor.algo.adversary import MimicPersistent, MIMIC_LOWEST
from dcolor.model import Graph
from dcolor.oracle import ExactValue, StateSpaceGuardError, check_coloring_space
from dcolor.oracle.states import canonical, enumerate_canonical, block_count, falling_factorial, conflicted_of, \
    is_conflicted_in, recolor_targets

# transient-state count up to which the chain is solved by exact rational elimination
EXACT_STATE_LIMIT = 600
MAX_CHAIN_STATES = 250000
ERROR_BUDGET = 1e-12
REFINEMENT_STEPS = 3

logger = logging.getLogger(__name__)


class AbsorbingChain:
    """
    The Decentralized Coloring process as an absorbing Markov chain over canonical colorings
    (paired with the vertex the mimic scheduler is still working on). Proper colorings absorb.
    """

    def __init__(self, g: Graph, palette_size: int, scheduler: SchedulerPolicy,
                 max_states: int = MAX_CHAIN_STATES):
        if isinstance(scheduler, MimicPersistent):
            self.mimic_mode = scheduler.get_mode()
        elif isinstance(scheduler, UniformRandom):
            self.mimic_mode = None
        else:
            raise ValueError(f'Exact chain supports uniform and mimic schedulers only, not {scheduler}')
        self.graph = g
        self.palette_size = palette_size
        self.max_states = max_states

        self.index = {}
        self.states = []
        self.transitions = []

    def key(self, labels, working: Optional[int] = None):
        if self.mimic_mode is None:
            return labels
        if working is not None and not is_conflicted_in(self.graph, labels, working):
            working = None
        return labels, working

    def explore(self, start_keys: List):
        """
        Breadth-first enumeration of every transient state reachable from start_keys, recording
        transition probabilities to transient successors.
        """
        queue = deque()
        for key in start_keys:
            if self._is_transient(key) and key not in self.index:
                self._add(key)
                queue.append(key)
        while queue:
            key = queue.popleft()
            row = defaultdict(Fraction)
            for (successor, probability) in self._successors(key):
                if not self._is_transient(successor):
                    continue
                if successor not in self.index:
                    self._add(successor)
                    queue.append(successor)
                row[self.index[successor]] += probability
            self.transitions[self.index[key]] = dict(row)

    def get_state_count(self) -> int:
        return len(self.states)

    def _add(self, key):
        if len(self.states) >= self.max_states:
            raise StateSpaceGuardError(f'Markov chain exceeds {self.max_states} transient states')
        self.index[key] = len(self.states)
        self.states.append(key)
        self.transitions.append(None)

    def _labels(self, key):
        return key if self.mimic_mode is None else key[0]

    def _is_transient(self, key) -> bool:
        return len(conflicted_of(self.graph, self._labels(key))) > 0

    def _successors(self, key):
        labels = self._labels(key)
        conflicted = conflicted_of(self.graph, labels)
        if self.mimic_mode is None:
            choices = conflicted
        elif key[1] is not None:
            choices = [key[1]]
        elif self.mimic_mode == MIMIC_LOWEST:
            choices = [conflicted[0]]
        else:
            choices = conflicted
        pick_probability = Fraction(1, len(choices))
        for v in choices:
            for (target, weight) in recolor_targets(labels, v, self.palette_size):
                yield self.key(target, v), pick_probability * Fraction(weight, self.palette_size)


def _solve_exact(transitions: List[Dict[int, Fraction]]) -> List[Fraction]:
    # Gaussian elimination on (I - Q) x = 1 in natural order; I - Q is a non-singular M-matrix
    # so every pivot stays positive without row exchanges.
    size = len(transitions)
    rows = []
    col_rows = defaultdict(set)
    for i, row in enumerate(transitions):
        coefficients = {j: -p for j, p in row.items()}
        coefficients[i] = coefficients.get(i, Fraction(0)) + 1
        rows.append(coefficients)
        for j in coefficients:
            col_rows[j].add(i)
    rhs = [Fraction(1)] * size

    for i in range(size):
        row_i = rows[i]
        pivot = row_i.pop(i, Fraction(0))
        if pivot == 0:
            raise ValueError('Singular chain: some transient state cannot reach a proper coloring')
        col_rows[i].discard(i)
        if pivot != 1:
            for j in row_i:
                row_i[j] /= pivot
            rhs[i] /= pivot
        for r in sorted(col_rows[i]):
            if r <= i:
                continue
            row_r = rows[r]
            factor = row_r.pop(i)
            for j, value in row_i.items():
                updated = row_r.get(j, 0) - factor * value
                if updated == 0:
                    row_r.pop(j, None)
                    col_rows[j].discard(r)
                else:
                    row_r[j] = updated
                    col_rows[j].add(r)
            rhs[r] -= factor * rhs[i]
        col_rows[i] = {r for r in col_rows[i] if r < i}

    solution = [Fraction(0)] * size
    for i in range(size - 1, -1, -1):
        solution[i] = rhs[i] - sum((value * solution[j] for j, value in rows[i].items()), Fraction(0))
    return solution


def _solve_certified(transitions: List[Dict[int, Fraction]]) -> Tuple[np.ndarray, float]:
    """
    Sparse LU solve of (I - Q) x = 1 with iterative refinement. Since (I - Q)^-1 is non-negative its
    infinity norm is max(x*), so a residual r bounds the error by max(x) * |r| / (1 - |r|).
    """
    size = len(transitions)
    row_ndx, col_ndx, values = [], [], []
    for i, row in enumerate(transitions):
        diagonal = 1.0
        for j, p in row.items():
            if j == i:
                diagonal -= float(p)
            else:
                row_ndx.append(i)
                col_ndx.append(j)
                values.append(-float(p))
        row_ndx.append(i)
        col_ndx.append(i)
        values.append(diagonal)
    matrix = sparse.csc_matrix((values, (row_ndx, col_ndx)), shape=(size, size))
    ones = np.ones(size)

    solver = linalg.splu(matrix)
    x = solver.solve(ones)
    for _ in range(REFINEMENT_STEPS):
        residual = ones - matrix @ x
        x = x + solver.solve(residual)

    residual = ones - matrix @ x
    max_row = int(np.max(np.diff(matrix.tocsr().indptr)))
    rounding = (max_row + 2) * np.finfo(float).eps * float(np.max(abs(matrix) @ np.abs(x)))
    r = float(np.max(np.abs(residual))) + rounding
    if r >= 1.0:
        raise ArithmeticError('Residual too large to certify the Markov solve')
    bound = float(np.max(np.abs(x))) * r / (1.0 - r)
    return x, bound


def _start_distribution(g: Graph, palette_size: int, start: StartPolicy) -> List[Tuple[tuple, Fraction]]:
    n = g.get_n()
    if isinstance(start, RandomStart):
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


def exact_expected_recolorings_dc(g: Graph, palette_size: int, start: StartPolicy, scheduler: SchedulerPolicy,
                                  method: str = 'auto', exact_limit: int = EXACT_STATE_LIMIT) -> ExactValue:
    """
    Expected Step-3 draws of Decentralized Coloring until a proper coloring, under a uniform or
    mimic-persistent scheduler, averaged over all starts for a random start.

    method is 'exact' (rational elimination), 'certified' (sparse float solve with a certified
    error bound) or 'auto' (exact up to exact_limit transient states).
    """
    check_coloring_space(g.get_n(), palette_size)
    distribution = _start_distribution(g, palette_size, start)

    chain = AbsorbingChain(g, palette_size, scheduler)
    chain.explore([chain.key(labels) for (labels, _) in distribution])
    size = chain.get_state_count()
    if size == 0:
        return ExactValue(0)

    if method == 'auto':
        method = 'exact' if size <= exact_limit else 'certified'
    logger.info(f'solving {size}-state chain for {g} with D={palette_size} using {method} method')

    if method == 'exact':
        solution = _solve_exact(chain.transitions)
        expectation = Fraction(0)
        for (labels, weight) in distribution:
            key = chain.key(labels)
            if key in chain.index:
                expectation += weight * solution[chain.index[key]]
        return ExactValue(expectation)
    elif method == 'certified':
        solution, bound = _solve_certified(chain.transitions)
        values = []
        for (labels, weight) in distribution:
            key = chain.key(labels)
            if key in chain.index:
                values.append(float(weight) * float(solution[chain.index[key]]))
        if bound > ERROR_BUDGET * max(1.0, float(np.max(solution))):
            logger.warning(f'certified error bound {bound:.3g} exceeds budget {ERROR_BUDGET}')
        return ExactValue(Fraction(math.fsum(values)), bound)
    else:
        raise ValueError(f'Unsupported solve method: {method}')
