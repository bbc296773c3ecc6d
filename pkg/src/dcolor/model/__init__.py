from typing import List, Tuple, Iterable


class GraphError(ValueError):
    pass


class VertexRangeError(GraphError):
    def __init__(self, u: int, v: int, n: int):
        super(VertexRangeError, self).__init__(f'Edge ({u}, {v}) references a vertex outside 0..{n - 1}')


class SelfLoopError(GraphError):
    def __init__(self, v: int):
        super(SelfLoopError, self).__init__(f'Self-loop at vertex {v}')


class DuplicateEdgeError(GraphError):
    def __init__(self, u: int, v: int):
        super(DuplicateEdgeError, self).__init__(f'Duplicate edge ({u}, {v})')


class Graph:
    """
    Immutable undirected simple graph on dense vertex ids 0..n-1 with sorted adjacency lists
    and cached maximum degree.
    """

    __slots__ = ['n', 'adjacency', 'max_degree', 'edge_count']

    def __init__(self, n: int, adjacency: List[Tuple[int, ...]]):
        if n < 1:
            raise GraphError(f'Graph needs at least one vertex: n={n}')
        if len(adjacency) != n:
            raise GraphError(f'Adjacency has {len(adjacency)} entries for n={n}')
        self.n = n
        self.adjacency = tuple(tuple(sorted(neighbors)) for neighbors in adjacency)
        self.max_degree = max(len(neighbors) for neighbors in self.adjacency)
        self.edge_count = sum(len(neighbors) for neighbors in self.adjacency) // 2

    @staticmethod
    def from_edge_list(n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        """
        Builds a graph from (u, v) pairs. Out-of-range ids, self-loops and duplicate edges
        (in either orientation) are rejected rather than repaired.
        """
        if n < 1:
            raise GraphError(f'Graph needs at least one vertex: n={n}')
        neighbor_sets = [set() for _ in range(n)]
        for (u, v) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(u, v, n)
            if u == v:
                raise SelfLoopError(u)
            if v in neighbor_sets[u]:
                raise DuplicateEdgeError(u, v)
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        return Graph(n, [tuple(neighbors) for neighbors in neighbor_sets])

    def get_n(self) -> int:
        return self.n

    def get_neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def get_adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self.adjacency

    def get_degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def get_max_degree(self) -> int:
        return self.max_degree

    def get_edge_count(self) -> int:
        return self.edge_count

    def get_edges(self) -> List[Tuple[int, int]]:
        """
        All edges as (u, v) with u < v, in lexicographic order.
        """
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def validate(self):
        """
        Re-checks simplicity, symmetry and the cached maximum degree; raises GraphError on violation.
        """
        for v, neighbors in enumerate(self.adjacency):
            if len(set(neighbors)) != len(neighbors):
                raise GraphError(f'Repeated neighbor in adjacency of {v}')
            for u in neighbors:
                if u == v:
                    raise SelfLoopError(v)
                if not 0 <= u < self.n:
                    raise VertexRangeError(v, u, self.n)
                if v not in self.adjacency[u]:
                    raise GraphError(f'Asymmetric adjacency: {u} in N({v}) but {v} not in N({u})')
        if self.max_degree != max(len(neighbors) for neighbors in self.adjacency):
            raise GraphError('Cached max degree is stale')

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self):
        return hash((self.n, self.adjacency))

    def __str__(self):
        return f'Graph(n={self.n}, m={self.edge_count}, max_degree={self.max_degree})'
