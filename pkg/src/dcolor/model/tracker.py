from typing import List

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, monochromatic_component_count, phi_delta


class ConflictTracker:
    """
    Incrementally maintained conflict state of a coloring: per-vertex count of same-colored
    neighbors, the conflicted vertex set and the conflicted edge count, plus the monochromatic
    component count when track_phi is set. Owns the coloring it is given; recolor through
    the tracker only.
    """

    def __init__(self, g: Graph, coloring: Coloring, track_phi: bool = False):
        coloring.check_graph(g)
        self.graph = g
        self.coloring = coloring
        self.track_phi = track_phi

        colors = coloring.colors
        self.clashes = [sum(1 for u in g.adjacency[v] if colors[u] == colors[v]) for v in range(g.n)]
        self.conflicted = {v for v in range(g.n) if self.clashes[v] > 0}
        self.edge_conflicts = sum(self.clashes) // 2
        self.phi = monochromatic_component_count(g, coloring) if track_phi else None

    def get_coloring(self) -> Coloring:
        return self.coloring

    def is_conflicted(self, v: int) -> bool:
        return self.clashes[v] > 0

    def is_proper(self) -> bool:
        return not self.conflicted

    def get_conflicted(self) -> List[int]:
        return sorted(self.conflicted)

    def get_conflicted_count(self) -> int:
        return len(self.conflicted)

    def get_clashes(self, v: int) -> int:
        return self.clashes[v]

    def get_conflicted_edge_count(self) -> int:
        return self.edge_conflicts

    def get_phi(self) -> int:
        if self.phi is None:
            raise ValueError('ConflictTracker created without track_phi')
        return self.phi

    def recolor(self, v: int, color: int):
        colors = self.coloring.colors
        old = colors[v]
        if old == color:
            return
        if self.track_phi:
            self.phi += phi_delta(self.graph, self.coloring, v, color)

        clashes = self.clashes
        conflicted = self.conflicted
        for u in self.graph.adjacency[v]:
            neighbor_color = colors[u]
            if neighbor_color == old:
                clashes[u] -= 1
                clashes[v] -= 1
                self.edge_conflicts -= 1
                if clashes[u] == 0:
                    conflicted.discard(u)
            elif neighbor_color == color:
                clashes[u] += 1
                clashes[v] += 1
                self.edge_conflicts += 1
                if clashes[u] == 1:
                    conflicted.add(u)
        colors[v] = color
        if clashes[v] > 0:
            conflicted.add(v)
        else:
            conflicted.discard(v)
