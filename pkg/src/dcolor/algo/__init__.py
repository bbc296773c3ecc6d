from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, ColoringError, random_coloring
from dcolor.utils import RandomStream


class SchedulerError(RuntimeError):
    pass


class StartPolicy(ABC):
    """
    How the initial coloring of Step 1 is produced.
    """

    @abstractmethod
    def initial_coloring(self, g: Graph, palette_size: int, rng: RandomStream) -> Coloring:
        """
        Produces a fresh coloring the run may mutate.
        """
        pass


class RandomStart(StartPolicy):
    """
    Every vertex draws its initial color uniformly from the palette.
    """

    def initial_coloring(self, g: Graph, palette_size: int, rng: RandomStream) -> Coloring:
        return random_coloring(g.get_n(), palette_size, rng)

    def __str__(self):
        return 'random'


class FixedStart(StartPolicy):
    """
    An adversarially (or otherwise externally) chosen initial coloring.
    """

    def __init__(self, coloring: Coloring):
        self.coloring = coloring

    def get_coloring(self) -> Coloring:
        return self.coloring

    def initial_coloring(self, g: Graph, palette_size: int, rng: RandomStream) -> Coloring:
        self.coloring.check_graph(g)
        if max(self.coloring.get_colors()) > palette_size:
            raise ColoringError(f'Fixed start uses colors beyond palette size {palette_size}')
        return Coloring(self.coloring.get_colors(), palette_size)

    def __str__(self):
        return f'fixed({self.coloring})'


class SchedulerPolicy(ABC):
    """
    Chooses which conflicted vertex recolors next (Step 2).
    """

    @abstractmethod
    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        """
        Returns a member of conflicted (ascending vertex ids). history holds every vertex selected so far.
        """
        pass

    def persistent_order(self, n: int, rng: RandomStream) -> Optional[List[int]]:
        """
        For the persistent process: a complete visiting order fixed up front, or None when the
        policy has to be consulted again after every fixed vertex.
        """
        return None


class UniformRandom(SchedulerPolicy):
    """
    Uniform choice among the conflicted vertices. For the persistent process this is simulated by a
    uniform random permutation drawn up front.
    """

    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        return rng.choice(conflicted)

    def persistent_order(self, n: int, rng: RandomStream) -> Optional[List[int]]:
        return rng.permutation(n)

    def __str__(self):
        return 'uniform'


class FixedPermutation(SchedulerPolicy):
    """
    Always the conflicted vertex appearing earliest in a fixed order.
    """

    def __init__(self, order: Sequence[int]):
        if sorted(order) != list(range(len(order))):
            raise ValueError(f'Order is not a permutation of 0..{len(order) - 1}')
        self.order = list(order)
        self.position = [0] * len(order)
        for ndx, v in enumerate(order):
            self.position[v] = ndx

    def get_order(self) -> List[int]:
        return self.order

    def pick(self, g: Graph, c: Coloring, conflicted: List[int], history: List[int],
             rng: RandomStream) -> int:
        if len(self.order) != g.get_n():
            raise ValueError(f'Order covers {len(self.order)} vertices but graph has {g.get_n()}')
        return min(conflicted, key=lambda v: self.position[v])

    def persistent_order(self, n: int, rng: RandomStream) -> Optional[List[int]]:
        if len(self.order) != n:
            raise ValueError(f'Order covers {len(self.order)} vertices but graph has {n}')
        return self.order

    def __str__(self):
        return 'perm(' + ' '.join(str(v) for v in self.order) + ')'


def scheduler_pick(policy: SchedulerPolicy, g: Graph, c: Coloring, conflicted: List[int],
                   history: List[int], rng: RandomStream) -> int:
    """
    Delegates Step 2 to the policy and refuses any answer outside the conflicted set.
    """
    if not conflicted:
        raise SchedulerError('No conflicted vertex to schedule')
    v = policy.pick(g, c, conflicted, history, rng)
    if v not in conflicted:
        raise SchedulerError(f'{policy} picked vertex {v}, which is not conflicted')
    return v


class RunResult:
    """
    Telemetry of one run. total_draws counts Step 1 and Step 3 draws; step3_draws only the recolors
    after the start; selections counts Step 2 choices.
    """

    def __init__(self, n: int, step3_draws: int, per_vertex_draws: List[int], selections: int,
                 terminated: bool, final_coloring: Coloring,
                 trace: Optional[List[Tuple[int, List[int]]]] = None):
        self.n = n
        self.step3_draws = step3_draws
        self.per_vertex_draws = per_vertex_draws
        self.selections = selections
        self.terminated = terminated
        self.final_coloring = final_coloring
        self.trace = trace

    def get_total_draws(self) -> int:
        return self.n + self.step3_draws

    def get_step3_draws(self) -> int:
        return self.step3_draws

    def get_per_vertex_draws(self) -> List[int]:
        return self.per_vertex_draws

    def get_selections(self) -> int:
        return self.selections

    def is_terminated(self) -> bool:
        return self.terminated

    def get_final_coloring(self) -> Coloring:
        return self.final_coloring

    def get_trace(self) -> Optional[List[Tuple[int, List[int]]]]:
        return self.trace

    def __eq__(self, other):
        return isinstance(other, RunResult) and self.n == other.n \
            and self.step3_draws == other.step3_draws and self.per_vertex_draws == other.per_vertex_draws \
            and self.selections == other.selections and self.terminated == other.terminated \
            and self.final_coloring == other.final_coloring and self.trace == other.trace

    def __str__(self):
        return f'total_draws={self.get_total_draws()}; step3_draws={self.step3_draws}; ' \
               f'selections={self.selections}; terminated={self.terminated}'
