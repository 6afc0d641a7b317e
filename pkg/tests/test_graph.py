import pytest
from hypothesis import given

from monoextract.errors import PreconditionError
from monoextract.generators import complete, complete_bipartite, cycle, petersen, transitive_tournament
from monoextract.graph import (
    Digraph,
    EdgeColouring,
    Graph,
    Orientation,
    digon_colouring,
    induced_subgraph,
    orientation_to_colouring,
    underlying_graph,
)

from conftest import digraphs, graphs


def test_induced_triangle_in_k4():
    v = induced_subgraph(complete(4), {0, 1, 2})
    assert v.vertices == (0, 1, 2)
    assert v.edges == [(0, 1), (0, 2), (1, 2)]


def test_induced_identity_on_c5():
    g = cycle(5)
    v = induced_subgraph(g, range(5))
    assert v.edges == list(g.edges)


def test_petersen_six_cycle_is_induced():
    g = petersen()
    from monoextract.cycles import induced_cycles
    six = next(c for c in induced_cycles(g.adjacency, g.vertex_mask, 6) if len(c) == 6)
    v = induced_subgraph(g, six)
    assert v.m == 6 and all(v.degree(x) == 2 for x in six)


def test_views_compose_and_reject_outside_vertices():
    v = induced_subgraph(complete(5), {0, 1, 2, 3})
    w = v.view({1, 2})
    assert w.base is v.base and w.vertices == (1, 2)
    with pytest.raises(PreconditionError):
        v.view({4})


def test_graph_rejects_loops_and_parallel_edges():
    with pytest.raises(PreconditionError):
        Graph(3, [(1, 1)])
    with pytest.raises(PreconditionError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(PreconditionError):
        Graph(2, [(0, 2)])


def test_bipartition_is_certified():
    g = complete_bipartite(2, 3)
    assert g.bipartition == (0b00011, 0b11100)
    with pytest.raises(PreconditionError):
        Graph(3, [(0, 1), (1, 2), (0, 2)], bipartition=([0], [1, 2]))


def test_underlying_graph_examples():
    tri = Orientation(3, [(0, 1), (1, 2), (2, 0)])
    assert underlying_graph(tri) == complete(3)
    assert underlying_graph(Digraph(2, [(0, 1), (1, 0)])) == Graph(2, [(0, 1)])
    ad = Orientation(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert underlying_graph(ad) == complete_bipartite(2, 2)


def test_orientation_to_colouring_examples():
    ab = Orientation(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert set(orientation_to_colouring(ab, ([0, 1], [2, 3])).colours) == {1}
    # a1 -> b1 -> a2 -> b2 -> a1 with a = {0, 1}, b = {2, 3}
    c4 = Orientation(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    col = orientation_to_colouring(c4, ([0, 1], [2, 3]))
    walk = [(0, 2), (2, 1), (1, 3), (3, 0)]
    assert [col.colour(u, v) for u, v in walk] == [1, 2, 1, 2]
    ba = Orientation(6, [(b, a) for a in range(3) for b in range(3, 6)])
    assert set(orientation_to_colouring(ba, (range(3), range(3, 6))).colours) == {2}


def test_orientation_to_colouring_needs_valid_parts():
    with pytest.raises(PreconditionError):
        orientation_to_colouring(Orientation(3, [(0, 1), (1, 2)]), ([0, 1], [2]))


def test_digon_colouring_examples():
    tri = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
    assert set(digon_colouring(tri).colours) == {1}
    assert set(digon_colouring(transitive_tournament(3)).colours) == {2}
    mixed = Digraph(3, [(0, 1), (1, 0), (0, 2)])
    col = digon_colouring(mixed)
    assert col.colour(0, 1) == 1 and col.colour(0, 2) == 2


def test_orientation_rejects_digons():
    with pytest.raises(PreconditionError):
        Orientation(2, [(0, 1), (1, 0)])


def test_colouring_must_be_total_and_in_range():
    g = cycle(4)
    with pytest.raises(PreconditionError):
        EdgeColouring(g, 2, {(0, 1): 1})
    with pytest.raises(PreconditionError):
        EdgeColouring(g, 2, [1, 2, 3, 1])


@given(graphs())
def test_subgraph_matches_view(g):
    verts = [v for v in range(g.n) if v % 2 == 0]
    sub, labels = g.subgraph(verts)
    view = induced_subgraph(g, verts)
    assert sorted((labels[u], labels[v]) for u, v in sub.edges) == view.edges


@given(digraphs())
def test_digon_colouring_partitions_edges(d):
    col = digon_colouring(d)
    assert len(col.colour_class(1)) == len(d.digons())
    assert col.base.m == len(col.colour_class(1)) + len(col.colour_class(2))
