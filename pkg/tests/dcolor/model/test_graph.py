import networkx as nx
import pytest

from dcolor.model import DuplicateEdgeError, Graph, GraphError, SelfLoopError, VertexRangeError
from dcolor.algo.adversary import bad_bipartite_start
from dcolor.model.generators import gen_clique, gen_complete_bipartite, gen_cycle, gen_erdos_renyi, gen_fig2_like, \
    FIG2_GREEN


def test_from_edge_list():
    g = Graph.from_edge_list(4, [(2, 0), (0, 1), (1, 2)])
    assert 4 == g.get_n()
    assert (1, 2) == g.get_neighbors(0)
    assert 0 == g.get_degree(3)
    assert 2 == g.get_max_degree()
    assert 3 == g.get_edge_count()
    assert [(0, 1), (0, 2), (1, 2)] == g.get_edges()
    g.validate()


def test_invalid_edges_are_rejected():
    with pytest.raises(VertexRangeError):
        Graph.from_edge_list(3, [(0, 3)])
    with pytest.raises(SelfLoopError):
        Graph.from_edge_list(3, [(1, 1)])
    with pytest.raises(DuplicateEdgeError):
        Graph.from_edge_list(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edge_list(0, [])


def test_validate_catches_asymmetry():
    with pytest.raises(GraphError):
        Graph(2, [(1,), ()]).validate()


def test_equality():
    assert Graph.from_edge_list(3, [(0, 1)]) == Graph.from_edge_list(3, [(1, 0)])
    assert hash(Graph.from_edge_list(3, [(0, 1)])) == hash(Graph.from_edge_list(3, [(1, 0)]))
    assert Graph.from_edge_list(3, [(0, 1)]) != Graph.from_edge_list(3, [(1, 2)])
    assert 'Graph(n=3, m=1, max_degree=1)' == str(Graph.from_edge_list(3, [(0, 1)]))


def test_generators():
    assert 28 == gen_clique(8).get_edge_count()
    assert 7 == gen_clique(8).get_max_degree()
    assert 1 == gen_clique(1).get_n()

    bipartite = gen_complete_bipartite(2, 3)
    assert 6 == bipartite.get_edge_count()
    assert (2, 3, 4) == bipartite.get_neighbors(0)

    cycle = gen_cycle(5)
    assert 5 == cycle.get_edge_count()
    assert 2 == cycle.get_max_degree()
    with pytest.raises(GraphError):
        gen_cycle(2)


@pytest.mark.parametrize('make', [
    lambda: gen_clique(1),
    lambda: gen_clique(9),
    lambda: gen_complete_bipartite(1, 1),
    lambda: gen_complete_bipartite(3, 7),
    lambda: gen_cycle(3),
    lambda: gen_cycle(12),
    lambda: gen_erdos_renyi(50, 0.0, 1),
    lambda: gen_erdos_renyi(50, 0.3, 2),
    lambda: gen_erdos_renyi(20, 1.0, 3),
    lambda: gen_fig2_like()[0],
    lambda: bad_bipartite_start(5)[0]
])
def test_generated_graphs_validate(make):
    g = make()
    g.validate()
    assert sorted(set(g.get_edges())) == g.get_edges()
    assert all(u < v for (u, v) in g.get_edges())


def test_erdos_renyi_matches_networkx():
    g = gen_erdos_renyi(30, 0.2, 11)
    expected = nx.gnp_random_graph(30, 0.2, seed=11)
    assert sorted(tuple(sorted(edge)) for edge in expected.edges()) == g.get_edges()
    assert g == gen_erdos_renyi(30, 0.2, 11)
    with pytest.raises(GraphError):
        gen_erdos_renyi(5, 1.5, 0)


def test_fig2_gadget():
    (g, c, focus) = gen_fig2_like()
    assert 0 == focus
    assert [(0, 1), (0, 2), (0, 3), (1, 4)] == g.get_edges()
    assert FIG2_GREEN == c.get_color(focus)
    assert 4 == c.get_palette_size()
