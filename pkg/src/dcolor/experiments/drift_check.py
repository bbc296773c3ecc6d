import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, conflicted_vertices, is_proper, random_coloring
from dcolor.model.generators import gen_erdos_renyi, gen_fig2_like
from dcolor.oracle import ExactValue
from dcolor.oracle.drift import exact_expected_conflict_deltas
from dcolor.utils import RandomStream

logger = logging.getLogger(__name__)

MIN_VERTICES = 2
MAX_ATTEMPTS = 1000


def random_invalid_state(rng: RandomStream, n_max: int, palette_max: int) -> Tuple[Graph, Coloring]:
    """
    A G(n, p) graph with max degree below palette_max, a palette in [max degree + 1, palette_max] and
    a uniformly random coloring with at least one conflicted edge.
    """
    for _ in range(MAX_ATTEMPTS):
        n = MIN_VERTICES + rng.randbelow(n_max - MIN_VERTICES + 1)
        g = gen_erdos_renyi(n, rng.uniform(), rng.randbelow(2 ** 31))
        degree = g.get_max_degree()
        if degree == 0 or degree > palette_max - 1:
            continue
        palette_size = degree + 1 + rng.randbelow(palette_max - degree)
        for _ in range(MAX_ATTEMPTS):
            c = random_coloring(n, palette_size, rng)
            if not is_proper(g, c):
                return g, c
    raise RuntimeError(f'Unable to sample an invalid state with n <= {n_max}, D <= {palette_max}')


class DriftViolation:
    def __init__(self, sample: int, graph: Graph, coloring: Coloring, vertex: int, phi_drift: ExactValue,
                 edge_drift: ExactValue):
        self.sample = sample
        self.graph = graph
        self.coloring = coloring
        self.vertex = vertex
        self.phi_drift = phi_drift
        self.edge_drift = edge_drift

    def to_dict(self) -> dict:
        return {
            'sample': self.sample,
            'edges': self.graph.get_edges(),
            'n': self.graph.get_n(),
            'coloring': str(self.coloring),
            'vertex': self.vertex,
            'phi_drift': str(self.phi_drift),
            'edge_drift': str(self.edge_drift)
        }

    def __str__(self):
        return f'sample {self.sample}: vertex {self.vertex} of {self.graph} under {self.coloring} has ' \
               f'phi drift {self.phi_drift} and edge drift {self.edge_drift}'


class DriftReport:
    def __init__(self):
        self.samples = 0
        self.vertices_checked = 0
        self.min_phi_drift: Optional[ExactValue] = None
        self.max_edge_drift: Optional[ExactValue] = None
        self.min_phi_margin: Optional[Fraction] = None
        self.tight = 0
        self.violations: List[DriftViolation] = []
        self.fig2_phi_drift: Optional[ExactValue] = None

    def record(self, sample: int, g: Graph, c: Coloring, v: int, phi: ExactValue, edge: ExactValue):
        bound = Fraction(1, c.get_palette_size())
        self.vertices_checked += 1
        margin = phi.get_value() - bound
        if self.min_phi_drift is None or phi < self.min_phi_drift:
            self.min_phi_drift = phi
        if self.max_edge_drift is None or edge > self.max_edge_drift:
            self.max_edge_drift = edge
        if self.min_phi_margin is None or margin < self.min_phi_margin:
            self.min_phi_margin = margin
        if margin == 0:
            self.tight += 1
        if margin < 0 or edge.get_value() > -bound:
            violation = DriftViolation(sample, g, c, v, phi, edge)
            logger.error(f'drift violation: {violation}')
            self.violations.append(violation)

    def is_vacuous(self) -> bool:
        return self.vertices_checked == 0

    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            'samples': self.samples,
            'vertices_checked': self.vertices_checked,
            'min_phi_drift': None if self.min_phi_drift is None else str(self.min_phi_drift),
            'min_phi_margin': None if self.min_phi_margin is None else str(self.min_phi_margin),
            'max_edge_drift': None if self.max_edge_drift is None else str(self.max_edge_drift),
            'tight': self.tight,
            'fig2_phi_drift': None if self.fig2_phi_drift is None else str(self.fig2_phi_drift),
            'vacuous': self.is_vacuous(),
            'passed': self.passed(),
            'violations': [violation.to_dict() for violation in self.violations]
        }

    def __str__(self):
        if self.is_vacuous():
            return 'no conflicted vertices checked (vacuous pass)'
        return f'{self.vertices_checked} vertices over {self.samples} samples: min phi drift {self.min_phi_drift}, ' \
               f'max edge drift {self.max_edge_drift}, {self.tight} tight, {len(self.violations)} violations'


def check_state(report: DriftReport, sample: int, g: Graph, c: Coloring):
    for v in conflicted_vertices(g, c):
        (phi, _, edge) = exact_expected_conflict_deltas(g, c, v)
        report.record(sample, g, c, v, phi, edge)


def drift_check(samples: int = 1000, n_max: int = 12, palette_max: int = 6, seed: int = 0,
                include_fig2: bool = True) -> DriftReport:
    """
    Exact one-step drift of the component count and the conflicted-edge count for every conflicted
    vertex of randomly sampled invalid states; the component drift must be at least 1/D and the edge
    drift at most -1/D.
    """
    if samples < 0:
        raise ValueError(f'Sample count must be non-negative: {samples}')
    if n_max < MIN_VERTICES:
        raise ValueError(f'Need n_max >= {MIN_VERTICES}: {n_max}')
    if palette_max < 2:
        raise ValueError(f'Need palette_max >= 2: {palette_max}')

    report = DriftReport()
    rng = RandomStream(seed)
    for sample in range(samples):
        (g, c) = random_invalid_state(rng, n_max, palette_max)
        check_state(report, sample, g, c)
        report.samples += 1

    if include_fig2:
        (g, c, focus) = gen_fig2_like()
        (phi, _, edge) = exact_expected_conflict_deltas(g, c, focus)
        report.fig2_phi_drift = phi
        check_state(report, samples, g, c)
        report.samples += 1

    if report.is_vacuous():
        logger.warning('drift check saw no conflicted vertices; passing vacuously')
    else:
        logger.info(f'drift check: {report}')
    return report
