import itertools
from fractions import Fraction

import pytest
from hypothesis import given

from monoextract.config import Limits
from monoextract.errors import LimitExceeded, PreconditionError
from monoextract.generators import burling, complete, complete_bipartite, cycle, path, petersen, star
from monoextract.graph import Graph, induced_subgraph
from monoextract.measures import (
    avg_degree,
    biclique_number,
    chromatic_number,
    clique_number,
    core_mask,
    degeneracy,
    find_biclique,
    kst_edge_bound,
    maximal_cliques,
    min_degree,
)

from conftest import graphs


def _sets(g):
    return [set(g.neighbours(v)) for v in range(g.n)]


def brute_clique(g):
    nb = _sets(g)
    best = 0
    for r in range(g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            if all(v in nb[u] for u, v in itertools.combinations(s, 2)):
                best = r
    return best


def brute_degeneracy(g):
    nb = _sets(g)
    best = 0
    for r in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            ss = set(s)
            best = max(best, min(len(nb[v] & ss) for v in s))
    return best


def brute_chromatic(g):
    for k in range(g.n + 1):
        for cols in itertools.product(range(k), repeat=g.n):
            if all(cols[u] != cols[v] for u, v in g.edges):
                return k
    return g.n


def brute_biclique(g):
    nb = _sets(g)
    best = 0
    for s in range(1, g.n // 2 + 1):
        for x in itertools.combinations(range(g.n), s):
            common = set.intersection(*(nb[v] for v in x))
            if len(common) >= s:
                best = s
    return best


@pytest.mark.parametrize("g,expected", [(complete(5), 4), (path(3), 1), (cycle(6), 2)])
def test_min_degree(g, expected):
    assert min_degree(g) == expected


@pytest.mark.parametrize("g,expected", [(complete(4), 3), (path(3), Fraction(4, 3)), (complete_bipartite(3, 3), 3)])
def test_avg_degree(g, expected):
    assert avg_degree(g) == expected


@pytest.mark.parametrize("g,expected", [(complete_bipartite(3, 3), 3), (star(5), 1), (cycle(4), 2)])
def test_degeneracy(g, expected):
    cert = degeneracy(g)
    assert cert.value == expected
    assert cert.replay(g) == expected


@pytest.mark.parametrize("g,expected", [(complete_bipartite(3, 3), 3), (petersen(), 1), (cycle(4), 2)])
def test_biclique_number(g, expected):
    assert biclique_number(g) == expected


@pytest.mark.parametrize("g,expected", [(complete(6), 6), (cycle(5), 2), (petersen(), 2)])
def test_clique_number(g, expected):
    assert clique_number(g) == expected


@pytest.mark.parametrize("g,expected", [(cycle(5), 3), (complete_bipartite(3, 3), 2), (petersen(), 3)])
def test_chromatic_number(g, expected):
    assert chromatic_number(g) == expected


def test_burling_level3_chromatic():
    g, _ = burling(3)
    assert chromatic_number(g) >= 3


def test_exact_limits_refuse_large_inputs():
    with pytest.raises(LimitExceeded):
        chromatic_number(complete(6), Limits(chromatic_n=5))
    with pytest.raises(LimitExceeded):
        clique_number(complete(6), Limits(clique_n=5))


def test_view_measures_use_base_coordinates():
    v = induced_subgraph(complete(5), {1, 3, 4})
    assert min_degree(v) == 2 and clique_number(v) == 3


@given(graphs(max_n=7))
def test_measures_match_brute_force(g):
    assert clique_number(g) == brute_clique(g)
    assert degeneracy(g).value == brute_degeneracy(g)
    assert degeneracy(g).replay(g) == degeneracy(g).value
    assert biclique_number(g) == brute_biclique(g)


@given(graphs(max_n=6))
def test_chromatic_matches_brute_force(g):
    assert chromatic_number(g) == brute_chromatic(g)


@given(graphs(max_n=8))
def test_core_mask_is_maximal_core(g):
    for k in range(4):
        core = core_mask(g.adjacency, g.vertex_mask, k)
        verts = [v for v in range(g.n) if core >> v & 1]
        assert all((g.adj(v) & core).bit_count() >= k for v in verts)
        # no larger set has minimum degree k
        nb = _sets(g)
        for r in range(len(verts) + 1, g.n + 1):
            for s in itertools.combinations(range(g.n), r):
                assert min(len(nb[v] & set(s)) for v in s) < k


@given(graphs(max_n=8))
def test_maximal_cliques_are_maximal(g):
    nb = _sets(g)
    seen = set()
    for c in maximal_cliques(g):
        cs = set(c)
        assert all(v in nb[u] for u, v in itertools.combinations(c, 2))
        assert not any(cs <= nb[w] for w in range(g.n) if w not in cs)
        seen.add(frozenset(c))
    if g.n:
        assert seen


@given(graphs(max_n=8))
def test_find_biclique_is_valid(g):
    s = biclique_number(g)
    got = find_biclique(g, s)
    assert got is not None
    x, y = got
    assert len(x) == len(y) == s and not set(x) & set(y)
    assert all(g.has_edge(u, v) for u in x for v in y)


def test_kst_bound_at_s1_is_zero():
    for n in (1, 5, 17):
        assert kst_edge_bound(1, n) == 0


def test_kst_bound_exceeds_c4_free_maximum_on_four_vertices():
    pairs = list(itertools.combinations(range(4), 2))
    best = 0
    for code in range(1 << 6):
        g = Graph(4, [e for i, e in enumerate(pairs) if code >> i & 1])
        if biclique_number(g) < 2:
            best = max(best, g.m)
    assert best == 4
    assert kst_edge_bound(2, 4) >= best


def test_kst_bound_is_certified_upper_bound():
    # (s-1)^(1/s) and n^(1-1/s) are bracketed, so the result can only err upwards
    for s in range(1, 5):
        for n in range(s, 40):
            exact = 0.5 * ((s - 1) ** (1 / s) * (n - s + 1) * n ** (1 - 1 / s) + (s - 1) * n)
            got = kst_edge_bound(s, n)
            assert got >= Fraction(exact) - Fraction(1, 10 ** 9)
            assert got - Fraction(exact) < Fraction(1, 10 ** 6)


def test_kst_bound_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        kst_edge_bound(0, 3)


def _c4_free_classes(n_max):
    """C4-free graphs up to isomorphism, grown one vertex at a time."""
    import networkx as nx

    def inv(adj):
        deg = [a.bit_count() for a in adj]
        return tuple(sorted((deg[v], tuple(sorted(deg[w] for w in range(len(adj)) if adj[v] >> w & 1)))
                            for v in range(len(adj))))

    def to_nx(adj):
        h = nx.Graph()
        h.add_nodes_from(range(len(adj)))
        h.add_edges_from((u, v) for u in range(len(adj)) for v in range(u) if adj[u] >> v & 1)
        return h

    levels = [[[]]]
    for _ in range(n_max):
        out = {}
        for adj in levels[-1]:
            n = len(adj)
            for nb in range(1 << n):
                # a new vertex closes a C4 iff two of its neighbours share a neighbour
                if any((a & nb).bit_count() > 1 for a in adj):
                    continue
                new = [a | ((nb >> v) & 1) << n for v, a in enumerate(adj)] + [nb]
                bucket = out.setdefault(inv(new), [])
                h = to_nx(new)
                if not any(nx.is_isomorphic(h, x) for _, x in bucket):
                    bucket.append((new, h))
        levels.append([a for b in out.values() for a, _ in b])
    return levels


def test_kst_bound_exceeds_c4_free_maximum_on_ten_vertices():
    levels = _c4_free_classes(9)
    assert [len(x) for x in levels[1:]] == [1, 2, 4, 8, 18, 44, 117, 351, 1230]
    best = 0
    for adj in levels[9]:
        e = sum(a.bit_count() for a in adj) // 2
        for nb in range(1 << 9):
            if not any((a & nb).bit_count() > 1 for a in adj):
                best = max(best, e + nb.bit_count())
    assert best == 16
    assert kst_edge_bound(2, 10) >= best
    for n in range(2, 10):
        assert kst_edge_bound(2, n) >= max(sum(a.bit_count() for a in adj) // 2 for adj in levels[n])
