import pytest
from hypothesis import given, strategies as st

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, conflicted_edge_count, conflicted_vertices, monochromatic_component_count
from dcolor.model.generators import gen_fig2_like
from dcolor.model.tracker import ConflictTracker


@st.composite
def recolor_sequences(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    palette_size = draw(st.integers(min_value=1, max_value=4))
    colors = draw(st.lists(st.integers(min_value=1, max_value=palette_size), min_size=n, max_size=n))
    steps = draw(st.lists(st.tuples(st.integers(min_value=0, max_value=n - 1),
                                    st.integers(min_value=1, max_value=palette_size)), max_size=30))
    return Graph.from_edge_list(n, edges), Coloring(colors, palette_size), steps


@given(recolor_sequences())
def test_tracker_matches_recomputation(sequence):
    (g, c, steps) = sequence
    tracker = ConflictTracker(g, c, track_phi=True)
    for (v, color) in steps:
        tracker.recolor(v, color)
        assert conflicted_vertices(g, c) == tracker.get_conflicted()
        assert conflicted_edge_count(g, c) == tracker.get_conflicted_edge_count()
        assert monochromatic_component_count(g, c) == tracker.get_phi()
        assert (len(conflicted_vertices(g, c)) == 0) == tracker.is_proper()


def test_tracker_fig2():
    (g, c, focus) = gen_fig2_like()
    tracker = ConflictTracker(g, c)
    assert 3 == tracker.get_conflicted_count()
    assert 1 == tracker.get_clashes(focus)
    tracker.recolor(focus, 4)
    assert [1, 4] == tracker.get_conflicted()
    assert 4 == c.get_color(focus)
    with pytest.raises(ValueError):
        tracker.get_phi()
