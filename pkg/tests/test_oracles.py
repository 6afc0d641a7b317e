import itertools

import pytest
from hypothesis import given, strategies as st

from monoextract.config import Limits
from monoextract.errors import LimitExceeded, PreconditionError
from monoextract.classes import antidirected_cycle
from monoextract.generators import complete, cycle, gnp, transitive_tournament
from monoextract.graph import EdgeColouring, Orientation
from monoextract.oracles import OracleStats, antidirected_dense_oracle, mono_dense_oracle

from conftest import coloured_graphs, digraphs


def _ok_mono(col, s, c, d):
    s = set(s)
    for u, v in col.base.edges:
        if u in s and v in s and col.colour(u, v) != c:
            return False
    return all(sum(col.base.has_edge(v, w) for w in s) >= d for v in s)


def brute_mono(col, d):
    """(size, smallest colour reaching it) over all vertex subsets."""
    n = col.base.n
    for r in range(n, 0, -1):
        cs = [c for c in range(1, col.k + 1)
              for s in itertools.combinations(range(n), r) if _ok_mono(col, s, c, d)]
        if cs:
            return r, min(cs)
    return 0, None


def _ok_anti(dg, s, d):
    s = set(s)
    for v in s:
        outs = any(dg.has_arc(v, w) for w in s)
        ins = any(dg.has_arc(w, v) for w in s)
        if outs and ins:
            return False
    return all(sum(dg.has_arc(v, w) or dg.has_arc(w, v) for w in s) >= d for v in s)


def brute_anti(dg, d):
    for r in range(dg.n, 0, -1):
        if any(_ok_anti(dg, s, d) for s in itertools.combinations(range(dg.n), r)):
            return r
    return 0


@given(coloured_graphs(max_n=8, k=2), st.integers(0, 3))
def test_mono_oracle_matches_brute_force(col, d):
    got = mono_dense_oracle(col.base, col, d)
    size, colour = brute_mono(col, d)
    if size == 0:
        assert got is None
        return
    assert got is not None and len(got.vertices) == size
    assert _ok_mono(col, got.vertices, got.colour, d)
    assert got.colour == colour


@given(coloured_graphs(max_n=7, k=3), st.integers(1, 2))
def test_mono_oracle_three_colours(col, d):
    got = mono_dense_oracle(col.base, col, d)
    size, _ = brute_mono(col, d)
    assert (0 if got is None else len(got.vertices)) == size


def test_mono_oracle_examples():
    k4 = complete(4)
    col = EdgeColouring(k4, 2, [1] * k4.m)
    w = mono_dense_oracle(k4, col, 3)
    assert w.vertices == (0, 1, 2, 3) and w.colour == 1
    # alternating C4: each colour is a perfect matching, nothing with min degree 2
    c4 = cycle(4)
    alt = EdgeColouring(c4, 2, {e: 1 + (i % 2) for i, e in enumerate([(0, 1), (1, 2), (2, 3), (0, 3)])})
    assert mono_dense_oracle(c4, alt, 2) is None
    assert len(mono_dense_oracle(c4, alt, 1).vertices) == 2


def test_mono_oracle_guards():
    g = gnp(10, "1/2", 0)
    col = EdgeColouring(g, 1, [1] * g.m)
    with pytest.raises(LimitExceeded):
        mono_dense_oracle(g, col, 1, Limits(oracle_n=8))
    with pytest.raises(PreconditionError):
        mono_dense_oracle(g, col, -1)


def test_mono_oracle_reports_nodes():
    g = gnp(12, "1/2", 4)
    col = EdgeColouring(g, 2, [1 + i % 2 for i in range(g.m)])
    stats = OracleStats()
    mono_dense_oracle(g, col, 2, stats=stats)
    assert stats.nodes > 0 and stats.exhaustive


@given(digraphs(max_n=7, oriented=True), st.integers(0, 3))
def test_antidirected_oracle_matches_brute_force(dg, d):
    dg = Orientation(dg.n, dg.arcs)
    got = antidirected_dense_oracle(dg, d)
    size = brute_anti(dg, d)
    assert (0 if got is None else len(got.vertices)) == size
    if got is not None:
        assert _ok_anti(dg, got.vertices, d)


def test_antidirected_oracle_examples():
    w = antidirected_dense_oracle(antidirected_cycle(6), 2)
    assert len(w.vertices) == 6
    k = Orientation(6, [(a, b) for a in range(3) for b in range(3, 6)])
    assert len(antidirected_dense_oracle(k, 3).vertices) == 6
    assert antidirected_dense_oracle(transitive_tournament(5), 2) is None


def test_antidirected_oracle_rejects_digons():
    from monoextract.graph import Digraph
    with pytest.raises(PreconditionError):
        antidirected_dense_oracle(Digraph(2, [(0, 1), (1, 0)]), 1)
