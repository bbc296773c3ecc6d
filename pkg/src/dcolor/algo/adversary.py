from enum import Enum, auto
from typing import List, Sequence, Tuple

from dcolor.algo import SchedulerPolicy, SchedulerError
from dcolor.model import Graph
from dcolor.model.coloring import Coloring, component_labels, conflicted_vertices, free_colors, phi_drift
from dcolor.model.generators import gen_complete_bipartite
from dcolor.utils import RandomStream

GREEN = 1

MIMIC_UNIFORM = 'uniform'
MIMIC_LOWEST = 'lowest'


class AdversaryStrategy(Enum):
    MIMIC_PERSISTENT = auto()
    MIN_PHI_DRIFT = auto()
    MAX_CONFLICTED = auto()
    SCRIPTED = auto()


def bad_bipartite_start(degree: int) -> Tuple[Graph, Coloring]:
    """
    K_{degree,degree} with every left vertex green (color 1) and the right side using colors
    1..degree, palette degree + 1. Only the green right vertex and the left side are conflicted, and
    every left vertex has a single free color.
    """
    if degree < 1:
        raise ValueError(f'Degree must be at least 1: {degree}')
    g = gen_complete_bipartite(degree, degree)
    coloring = Coloring([GREEN] * degree + list(range(1, degree + 1)), degree + 1)

    expected = list(range(degree)) + [degree]
    if conflicted_vertices(g, coloring) != expected:
        raise RuntimeError(f'Bad bipartite start for degree {degree} has unexpected conflicts')
    for v in range(degree):
        if len(free_colors(g, coloring, v)) != 1:
            raise RuntimeError(f'Left vertex {v} of bad bipartite start has more than one free color')
    return g, coloring


def monochromatic_start(g: Graph, palette_size: int) -> Coloring:
    return Coloring([GREEN] * g.get_n(), palette_size)


def mimic_persistent_pick(conflicted: List[int], history: List[int], rng: RandomStream,
                          mode: str = MIMIC_UNIFORM) -> int:
    """
    Keeps selecting the previous vertex while it is conflicted, so single draws chain into the
    persistent process's redraw loop; otherwise starts on a new conflicted vertex.
    """
    if history and history[-1] in conflicted:
        return history[-1]
    if mode == MIMIC_LOWEST:
        return conflicted[0]
    elif mode == MIMIC_UNIFORM:
        return rng.choice(conflicted)
    else:
        raise ValueError(f'Unsupported mimic mode: {mode}')


def min_phi_drift_pick(g: Graph, c: Coloring, conflicted: List[int]) -> int:
    """
    The conflicted vertex whose uniform recolor raises the monochromatic component count least in
    expectation; ties go to the lowest id.
    """
    labels = component_labels(g, c)
    best, best_drift = None, None
    for v in conflicted:
        drift = phi_drift(g, c, v, labels)
        if best_drift is None or drift < best_drift:
            best, best_drift = v, drift
    return best


def max_conflicted_pick(g: Graph, c: Coloring, conflicted: List[int]) -> int:
    colors = c.get_colors()
    best, best_clashes = None, -1
    for v in conflicted:
        clashes = sum(1 for u in g.get_neighbors(v) if colors[u] == colors[v])
        if clashes > best_clashes:
            best, best_clashes = v, clashes
    return best


def scripted_pick(script: Sequence[int], conflicted: List[int], history: List[int]) -> int:
    ndx = len(history)
    if ndx >= len(script):
        return conflicted[0]
    v = script[ndx]
    if v not in conflicted:
        raise SchedulerError(f'Script entry {ndx} names vertex {v}, which is not conflicted')
    return v


class MimicPersistent(SchedulerPolicy):
    def __init__(self, mode: str = MIMIC_UNIFORM):
        if mode not in (MIMIC_UNIFORM, MIMIC_LOWEST):
            raise ValueError(f'Unsupported mimic mode: {mode}')
        self.mode = mode

    def get_mode(self) -> str:
        return self.mode

    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        return mimic_persistent_pick(conflicted, history, rng, self.mode)

    def __str__(self):
        return 'mimic' if self.mode == MIMIC_UNIFORM else 'mimic:lowest'


class MinPhiDrift(SchedulerPolicy):
    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        return min_phi_drift_pick(g, c, conflicted)

    def __str__(self):
        return 'min-drift'


class MaxConflicted(SchedulerPolicy):
    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        return max_conflicted_pick(g, c, conflicted)

    def __str__(self):
        return 'max-conflicted'


class Scripted(SchedulerPolicy):
    def __init__(self, script: Sequence[int]):
        if any(v < 0 for v in script):
            raise ValueError('Script contains a negative vertex id')
        self.script = list(script)

    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        if any(v >= g.get_n() for v in self.script):
            raise ValueError(f'Script references vertices outside 0..{g.get_n() - 1}')
        return scripted_pick(self.script, conflicted, history)

    def __str__(self):
        return 'script(' + ' '.join(str(v) for v in self.script) + ')'


def create_adversary(strategy: AdversaryStrategy, **params) -> SchedulerPolicy:
    if strategy == AdversaryStrategy.MIMIC_PERSISTENT:
        return MimicPersistent(params.get('mode', MIMIC_UNIFORM))
    elif strategy == AdversaryStrategy.MIN_PHI_DRIFT:
        return MinPhiDrift()
    elif strategy == AdversaryStrategy.MAX_CONFLICTED:
        return MaxConflicted()
    elif strategy == AdversaryStrategy.SCRIPTED:
        return Scripted(params['script'])
    else:
        raise ValueError(f'Unsupported adversary strategy: {strategy}')
