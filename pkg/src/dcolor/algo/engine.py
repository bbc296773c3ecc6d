import logging
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

from dcolor.algo import StartPolicy, SchedulerPolicy, RunResult, SchedulerError, scheduler_pick
from dcolor.model import Graph
from dcolor.model.tracker import ConflictTracker
from dcolor.utils import RandomStream


def default_step_cap(n: int, palette_size: int) -> int:
    return 10 * n * palette_size * palette_size


class ColoringProcess(ABC):
    """
    A decentralized recoloring process: Step 1 start, then Step 2 selection and Step 3 recoloring
    until no vertex is conflicted or the Step-3 draw budget is spent.
    """

    logger = logging.getLogger(__name__)

    def __init__(self, g: Graph, palette_size: int, start: StartPolicy, scheduler: SchedulerPolicy,
                 step_cap: Optional[int] = None, record_trace: bool = False):
        if palette_size < 1:
            raise ValueError(f'Palette size must be at least 1: {palette_size}')
        self.graph = g
        self.palette_size = palette_size
        self.start = start
        self.scheduler = scheduler
        self.step_cap = default_step_cap(g.get_n(), palette_size) if step_cap is None else step_cap
        self.record_trace = record_trace

    @abstractmethod
    def run(self, rng: RandomStream) -> RunResult:
        """
        Executes one run; the result is a function of the rng seed alone.
        """
        pass


class DecentralizedColoring(ColoringProcess):
    """
    Every selection makes exactly one uniform draw from the whole palette, current color included.
    """

    def run(self, rng: RandomStream) -> RunResult:
        g = self.graph
        n = g.get_n()
        palette_size = self.palette_size
        tracker = ConflictTracker(g, self.start.initial_coloring(g, palette_size, rng))
        coloring = tracker.get_coloring()

        per_vertex = [0] * n
        history = []
        trace = [] if self.record_trace else None
        draws = 0
        terminated = True
        while not tracker.is_proper():
            if draws >= self.step_cap:
                terminated = False
                self.logger.debug(f'step cap {self.step_cap} reached on {g}')
                break
            v = scheduler_pick(self.scheduler, g, coloring, tracker.get_conflicted(), history, rng)
            color = rng.color(palette_size)
            tracker.recolor(v, color)
            history.append(v)
            per_vertex[v] += 1
            draws += 1
            if trace is not None:
                trace.append((v, [color]))

        return RunResult(n, draws, per_vertex, len(history), terminated, coloring, trace)


class PersistentColoring(ColoringProcess):
    """
    A selected vertex keeps drawing until it is no longer conflicted. Fixed vertices never become
    conflicted again, so no vertex is ever selected twice.
    """

    def run(self, rng: RandomStream) -> RunResult:
        g = self.graph
        n = g.get_n()
        tracker = ConflictTracker(g, self.start.initial_coloring(g, self.palette_size, rng))
        coloring = tracker.get_coloring()

        per_vertex = [0] * n
        history = []
        trace = [] if self.record_trace else None
        draws = 0

        def fix(v: int) -> bool:
            nonlocal draws
            history.append(v)
            (drawn, fixed) = self._fix(tracker, v, rng, self.step_cap - draws)
            per_vertex[v] += len(drawn)
            draws += len(drawn)
            if trace is not None:
                trace.append((v, drawn))
            return fixed

        order = self.scheduler.persistent_order(n, rng)
        terminated = True
        if order is not None:
            for v in order:
                if tracker.is_conflicted(v) and not fix(v):
                    terminated = False
                    break
            if terminated and not tracker.is_proper():
                raise SchedulerError('Persistent order exhausted with conflicted vertices left')
        else:
            selected = set()
            while not tracker.is_proper():
                v = scheduler_pick(self.scheduler, g, coloring, tracker.get_conflicted(), history, rng)
                if v in selected:
                    raise SchedulerError(f'Persistent run selected vertex {v} twice')
                selected.add(v)
                if not fix(v):
                    terminated = False
                    break

        return RunResult(n, draws, per_vertex, len(history), terminated, coloring, trace)

    def _fix(self, tracker: ConflictTracker, v: int, rng: RandomStream, budget: int) -> Tuple[List[int], bool]:
        # redraw v until unconflicted or budget draws are spent
        drawn = []
        while tracker.is_conflicted(v):
            if len(drawn) >= budget:
                self.logger.debug(f'step cap {self.step_cap} reached on {self.graph}')
                return drawn, False
            color = rng.color(self.palette_size)
            tracker.recolor(v, color)
            drawn.append(color)
        return drawn, True


def run_decentralized(g: Graph, palette_size: int, start: StartPolicy, scheduler: SchedulerPolicy,
                      rng: RandomStream, step_cap: Optional[int] = None, record_trace: bool = False) -> RunResult:
    return DecentralizedColoring(g, palette_size, start, scheduler, step_cap, record_trace).run(rng)


def run_persistent(g: Graph, palette_size: int, start: StartPolicy, scheduler: SchedulerPolicy,
                   rng: RandomStream, step_cap: Optional[int] = None, record_trace: bool = False) -> RunResult:
    return PersistentColoring(g, palette_size, start, scheduler, step_cap, record_trace).run(rng)


ALGORITHMS = {
    'dc': DecentralizedColoring,
    'persistent': PersistentColoring
}


def create_process(algorithm: str, g: Graph, palette_size: int, start: StartPolicy, scheduler: SchedulerPolicy,
                   step_cap: Optional[int] = None, record_trace: bool = False) -> ColoringProcess:
    if algorithm not in ALGORITHMS:
        raise ValueError(f'Unsupported algorithm: {algorithm}')
    return ALGORITHMS[algorithm](g, palette_size, start, scheduler, step_cap, record_trace)
