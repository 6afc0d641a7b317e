import itertools

import pytest
from hypothesis import settings, strategies as st

from monoextract.graph import Digraph, EdgeColouring, Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def brute_min_degree(adj_sets, verts):
    return min((len(adj_sets[v] & verts) for v in verts), default=0)


@st.composite
def graphs(draw, max_n=9, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def coloured_graphs(draw, max_n=8, k=2):
    g = draw(graphs(max_n=max_n))
    cols = draw(st.lists(st.integers(1, k), min_size=g.m, max_size=g.m))
    return EdgeColouring(g, k, cols)


@st.composite
def digraphs(draw, max_n=7, oriented=False):
    n = draw(st.integers(0, max_n))
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        choice = draw(st.integers(0, 2 if oriented else 3))
        if choice == 1:
            arcs.append((u, v))
        elif choice == 2:
            arcs.append((v, u))
        elif choice == 3:
            arcs += [(u, v), (v, u)]
    return Digraph(n, arcs)


def alternating_c4():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    return EdgeColouring(g, 2, {(0, 1): 1, (1, 2): 2, (2, 3): 1, (0, 3): 2})


@pytest.fixture
def alt_c4():
    return alternating_c4()
