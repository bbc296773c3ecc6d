from fractions import Fraction
from typing import Dict, Tuple

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, is_conflicted, monochromatic_component_count, conflicted_vertex_count, \
    conflicted_edge_count
from dcolor.model.generators import FIG2_RED, FIG2_GREEN, FIG2_BLUE, FIG2_YELLOW, FIG2_PALETTE_SIZE
from dcolor.oracle import ExactValue

# change in the conflicted-vertex count for each recolor of the gadget's focus vertex
FIG2_VERTEX_DELTAS = {
    FIG2_GREEN: 0,
    FIG2_YELLOW: -1,
    FIG2_RED: 1,
    FIG2_BLUE: 1
}


class NotConflictedError(ValueError):
    def __init__(self, v: int):
        super(NotConflictedError, self).__init__(f'Vertex {v} is not conflicted; drift is only defined on invalid states')


def _require_conflicted(g: Graph, c: Coloring, v: int):
    c.check_graph(g)
    if not is_conflicted(g, c, v):
        raise NotConflictedError(v)


def recolor_deltas(g: Graph, c: Coloring, v: int, measure) -> Dict[int, int]:
    """
    measure(recolored) - measure(c) for every palette color v could be recolored to, by full recomputation.
    """
    before = measure(g, c)
    return {color: measure(g, c.recolored(v, color)) - before for color in range(1, c.get_palette_size() + 1)}


def _mean(deltas: Dict[int, int]) -> ExactValue:
    return ExactValue(Fraction(sum(deltas.values()), len(deltas)))


def exact_expected_phi_delta(g: Graph, c: Coloring, v: int) -> ExactValue:
    _require_conflicted(g, c, v)
    return _mean(recolor_deltas(g, c, v, monochromatic_component_count))


def exact_expected_conflict_deltas(g: Graph, c: Coloring, v: int) -> Tuple[ExactValue, ExactValue, ExactValue]:
    """
    Expected one-step change of (monochromatic components, conflicted vertices, conflicted edges).
    """
    _require_conflicted(g, c, v)
    return (_mean(recolor_deltas(g, c, v, monochromatic_component_count)),
            _mean(recolor_deltas(g, c, v, conflicted_vertex_count)),
            _mean(recolor_deltas(g, c, v, conflicted_edge_count)))


def verify_fig2_deltas(g: Graph, c: Coloring, v: int) -> bool:
    """
    Checks the gadget's delta table for the conflicted-vertex count: staying green changes nothing,
    yellow removes one conflicted vertex, red and blue each add one.
    """
    _require_conflicted(g, c, v)
    if c.get_palette_size() != FIG2_PALETTE_SIZE:
        return False
    return recolor_deltas(g, c, v, conflicted_vertex_count) == FIG2_VERTEX_DELTAS
