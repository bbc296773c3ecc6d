from typing import Tuple

import networkx as nx

from dcolor.model import Graph, GraphError
from dcolor.model.coloring import Coloring

# palette of the conflicted-vertex gadget
FIG2_RED = 1
FIG2_GREEN = 2
FIG2_BLUE = 3
FIG2_YELLOW = 4
FIG2_PALETTE_SIZE = 4


def from_edge_list(n: int, edges) -> Graph:
    return Graph.from_edge_list(n, edges)


def gen_clique(n: int) -> Graph:
    if n < 1:
        raise GraphError(f'Clique needs n >= 1: {n}')
    return Graph.from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def gen_complete_bipartite(a: int, b: int) -> Graph:
    """
    Left side 0..a-1, right side a..a+b-1, every cross edge present.
    """
    if a < 1 or b < 1:
        raise GraphError(f'Complete bipartite graph needs both sides non-empty: ({a}, {b})')
    return Graph.from_edge_list(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f'Cycle needs n >= 3: {n}')
    return Graph.from_edge_list(n, [(v, (v + 1) % n) for v in range(n)])


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """
    G(n, p): each unordered pair independently with probability p, deterministic given seed.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f'Edge probability outside [0, 1]: {p}')
    if n < 1:
        raise GraphError(f'Graph needs at least one vertex: n={n}')
    nx_graph = nx.gnp_random_graph(n, p, seed=seed)
    return Graph.from_edge_list(n, nx_graph.edges())


def gen_fig2_like() -> Tuple[Graph, Coloring, int]:
    """
    Five-vertex gadget on which a uniform recolor of the focus vertex raises the expected number
    of conflicted vertices by 1/4: focus v (green) adjacent to u (green), r (red) and b (blue), with u
    also adjacent to w (green). Vertex ids are v=0, u=1, r=2, b=3, w=4.
    """
    focus, u, r, b, w = 0, 1, 2, 3, 4
    graph = Graph.from_edge_list(5, [(focus, u), (focus, r), (focus, b), (u, w)])
    colors = [FIG2_GREEN, FIG2_GREEN, FIG2_RED, FIG2_BLUE, FIG2_GREEN]
    return graph, Coloring(colors, FIG2_PALETTE_SIZE), focus
