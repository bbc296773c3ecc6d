from enum import Enum, auto
from fractions import Fraction
from typing import List, Optional, Sequence, Set

from dcolor.model import Graph
from dcolor.utils import RandomStream


class ColoringError(ValueError):
    pass


class PotentialKind(Enum):
    """
    The three candidate potentials for tracking convergence of a coloring process.
    """

    MONOCHROMATIC_COMPONENTS = auto()
    CONFLICTED_EDGES = auto()
    CONFLICTED_VERTICES = auto()


class Coloring:
    """
    Mutable assignment of a color in 1..D to every vertex; the evolving state of a run.
    """

    __slots__ = ['colors', 'palette_size']

    def __init__(self, colors: Sequence[int], palette_size: int):
        if palette_size < 1:
            raise ColoringError(f'Palette size must be at least 1: {palette_size}')
        for v, color in enumerate(colors):
            if not 1 <= color <= palette_size:
                raise ColoringError(f'Color {color} of vertex {v} outside palette 1..{palette_size}')
        self.colors = list(colors)
        self.palette_size = palette_size

    def get_color(self, v: int) -> int:
        return self.colors[v]

    def set_color(self, v: int, color: int):
        if not 1 <= color <= self.palette_size:
            raise ColoringError(f'Color {color} outside palette 1..{self.palette_size}')
        self.colors[v] = color

    def get_colors(self) -> List[int]:
        return self.colors

    def get_palette_size(self) -> int:
        return self.palette_size

    def recolored(self, v: int, color: int) -> 'Coloring':
        copy = self.copy()
        copy.set_color(v, color)
        return copy

    def copy(self) -> 'Coloring':
        return Coloring(self.colors, self.palette_size)

    def check_graph(self, g: Graph):
        if len(self.colors) != g.get_n():
            raise ColoringError(f'Coloring covers {len(self.colors)} vertices but graph has {g.get_n()}')

    def __len__(self):
        return len(self.colors)

    def __eq__(self, other):
        return isinstance(other, Coloring) and self.palette_size == other.palette_size \
            and self.colors == other.colors

    def __hash__(self):
        return hash((self.palette_size, tuple(self.colors)))

    def __str__(self):
        return f'D={self.palette_size} ' + ' '.join(str(color) for color in self.colors)


class DisjointSet:
    """
    Union-find with path compression and union by rank.
    """

    def __init__(self, num_vertices: int):
        self.ranks = [0] * num_vertices
        self.parents = list(range(num_vertices))
        self.num_components = num_vertices

    def find(self, index: int) -> int:
        parents = self.parents
        root = index
        while root != parents[root]:
            root = parents[root]
        while parents[index] != root:
            parents[index], index = root, parents[index]
        return root

    def merge(self, a: int, b: int):
        a = self.find(a)
        b = self.find(b)
        if a == b:
            return

        ranks = self.ranks
        parents = self.parents
        if ranks[a] < ranks[b]:
            parents[a] = b
        elif ranks[a] > ranks[b]:
            parents[b] = a
        else:
            parents[b] = a
            ranks[a] += 1
        self.num_components -= 1

    def get_num_components(self) -> int:
        return self.num_components


def random_coloring(n: int, palette_size: int, rng: RandomStream) -> Coloring:
    if palette_size < 1:
        raise ColoringError(f'Palette size must be at least 1: {palette_size}')
    return Coloring([rng.color(palette_size) for _ in range(n)], palette_size)


def is_conflicted(g: Graph, c: Coloring, v: int) -> bool:
    colors = c.colors
    color = colors[v]
    for u in g.adjacency[v]:
        if colors[u] == color:
            return True
    return False


def conflicted_vertices(g: Graph, c: Coloring) -> List[int]:
    return [v for v in range(g.n) if is_conflicted(g, c, v)]


def is_proper(g: Graph, c: Coloring) -> bool:
    return conflicted_edge_count(g, c) == 0


def free_colors(g: Graph, c: Coloring, v: int) -> Set[int]:
    """
    Palette colors not used by any neighbor of v; v's own color is not excluded.
    """
    colors = c.colors
    used = {colors[u] for u in g.adjacency[v]}
    return {color for color in range(1, c.palette_size + 1) if color not in used}


def conflicted_edge_count(g: Graph, c: Coloring) -> int:
    colors = c.colors
    count = 0
    for u, neighbors in enumerate(g.adjacency):
        for v in neighbors:
            if u < v and colors[u] == colors[v]:
                count += 1
    return count


def conflicted_vertex_count(g: Graph, c: Coloring) -> int:
    return len(conflicted_vertices(g, c))


def component_labels(g: Graph, c: Coloring) -> List[int]:
    """
    Labels every vertex with the representative of its monochromatic component.
    """
    colors = c.colors
    components = DisjointSet(g.n)
    for u, neighbors in enumerate(g.adjacency):
        for v in neighbors:
            if u < v and colors[u] == colors[v]:
                components.merge(u, v)
    return [components.find(v) for v in range(g.n)]


def monochromatic_component_count(g: Graph, c: Coloring) -> int:
    colors = c.colors
    components = DisjointSet(g.n)
    for u, neighbors in enumerate(g.adjacency):
        for v in neighbors:
            if u < v and colors[u] == colors[v]:
                components.merge(u, v)
    return components.get_num_components()


def potential(g: Graph, c: Coloring, kind: PotentialKind) -> int:
    if kind == PotentialKind.MONOCHROMATIC_COMPONENTS:
        return monochromatic_component_count(g, c)
    elif kind == PotentialKind.CONFLICTED_EDGES:
        return conflicted_edge_count(g, c)
    elif kind == PotentialKind.CONFLICTED_VERTICES:
        return conflicted_vertex_count(g, c)
    else:
        raise ValueError(f'Unsupported potential: {kind}')


def _pieces_without(g: Graph, colors: List[int], v: int) -> int:
    # number of components v's monochromatic component falls into once v is removed
    color = colors[v]
    seeds = [u for u in g.adjacency[v] if colors[u] == color]
    seen = {v}
    pieces = 0
    for seed in seeds:
        if seed in seen:
            continue
        pieces += 1
        seen.add(seed)
        frontier = [seed]
        while frontier:
            w = frontier.pop()
            for z in g.adjacency[w]:
                if z not in seen and colors[z] == color:
                    seen.add(z)
                    frontier.append(z)
    return pieces


def phi_delta(g: Graph, c: Coloring, v: int, color: int, labels: Optional[List[int]] = None) -> int:
    """
    Change in the monochromatic component count when v is recolored to color, computed from
    v's neighborhood: pieces of v's old component minus color-components v would join.
    """
    colors = c.colors
    if colors[v] == color:
        return 0
    if labels is None:
        labels = component_labels(g, c)
    joined = {labels[u] for u in g.adjacency[v] if colors[u] == color}
    return _pieces_without(g, colors, v) - len(joined)


def phi_drift(g: Graph, c: Coloring, v: int, labels: Optional[List[int]] = None) -> Fraction:
    """
    Expected change in the monochromatic component count under a uniform recolor of v.
    """
    colors = c.colors
    own = colors[v]
    if labels is None:
        labels = component_labels(g, c)
    pieces = _pieces_without(g, colors, v)
    joined = len({labels[u] for u in g.adjacency[v] if colors[u] != own})
    palette_size = c.palette_size
    return Fraction((palette_size - 1) * pieces - joined, palette_size)


def greedy_coloring(g: Graph, order: Optional[Sequence[int]] = None,
                    palette_size: Optional[int] = None) -> Coloring:
    """
    One pass over the vertices, giving each the smallest color unused by its already-colored
    neighbors. Needs at most max_degree + 1 colors.
    """
    if palette_size is None:
        palette_size = g.max_degree + 1
    if order is None:
        order = range(g.n)
    colors = [0] * g.n
    for v in order:
        used = {colors[u] for u in g.adjacency[v]}
        color = 1
        while color in used:
            color += 1
        colors[v] = color
    return Coloring(colors, palette_size)
