import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monoextract.errors import PreconditionError, RetriesExhausted
from monoextract.extraction import (
    ANTIDIRECTED,
    EXHAUSTED,
    MONO_CLIQUE,
    MONO_DENSE,
    TRANSITIVE,
    KOParams,
    ThmConstants,
    biased_mono_bipartite,
    digraph_split,
    f2_expr,
    f_oriented_expr,
    fk_expr,
    g_of_d,
    klst_search,
    ko_extract,
    mono_extract,
    mono_extract_k,
    oriented_extract,
    peel,
    verify_mono_witness,
    verify_outcome,
)
from monoextract.bits import iter_bits
from monoextract.classes import is_antidirected
from monoextract.densest import densest_mask, densest_prefix, max_avg_degree
from monoextract.generators import (
    complete,
    complete_bipartite,
    cycle,
    gnp,
    path,
    petersen,
    random_colouring,
    random_orientation,
    star,
    transitive_tournament,
)
from monoextract.graph import Digraph, EdgeColouring, Graph, Orientation, induced_subgraph
from monoextract.measures import avg_degree, min_degree
from monoextract.oracles import antidirected_dense_oracle, mono_dense_oracle
from monoextract.rng import derive_seed, stage_rng

from conftest import coloured_graphs, graphs


def brute_density(g):
    best = Fraction(0)
    for code in range(1, 1 << g.n):
        vs = [v for v in range(g.n) if code >> v & 1]
        e = sum(1 for u, v in g.edges if code >> u & 1 and code >> v & 1)
        best = max(best, Fraction(2 * e, len(vs)))
    return best


# -- constants ---------------------------------------------------------

def test_g_of_d_exact():
    assert g_of_d(1) == 2 ** 72
    assert g_of_d(2) == 2 ** 137
    for d in range(1, 9):
        assert g_of_d(d) == d * 2 ** (64 * d + 8)


def test_symbolic_chain():
    assert f2_expr("d") == "f_KLST(R(d+1,d+1), g(d))"
    assert fk_expr(1, 5) == "5"
    assert fk_expr(3, "d") == fk_expr(2, f2_expr("d"))
    assert f_oriented_expr(4, "d") == "f_KLST(8, f_KLST(R(d+1,d+1), g(d)))"


def test_thm_constants_modes():
    faithful = ThmConstants.build(3, "faithful")
    assert faithful.threshold == g_of_d(3) and faithful.ramsey_target == 20
    practical = ThmConstants.build(3)
    assert practical.threshold == 6 and practical.substitutions
    with pytest.raises(PreconditionError):
        ThmConstants.build(2, "faithful", threshold=5)
    with pytest.raises(PreconditionError):
        ThmConstants.build(2, "fast")


def test_ko_params_lemma_constants():
    p = KOParams.lemma(2, Fraction(64))
    assert (p.p, p.lo, p.hi, p.ratio, p.w_threshold) == (Fraction(1, 2), 8, 128, Fraction(1, 4), 128)
    with pytest.raises(PreconditionError):
        KOParams.lemma(2, Fraction(32))
    with pytest.raises(PreconditionError):
        KOParams.lemma(1, Fraction(100))


# -- peeling and densest subgraphs -------------------------------------

def test_peel_examples():
    assert peel(complete(5), 2).vertices == tuple(range(5))
    assert peel(star(9), 1).vertices == tuple(range(10))
    assert peel(path(3), Fraction(2, 3)).vertices == (0, 1, 2)
    with pytest.raises(PreconditionError):
        peel(path(3), 2)


@given(graphs(max_n=10))
def test_peel_half_average_degree(g):
    if g.m == 0:
        return
    ad = avg_degree(g)
    h = peel(g, ad / 2)
    assert h.n > 0 and min_degree(h) >= ad / 2


def test_densest_examples():
    k4_pendant = Graph(5, list(complete(4).edges) + [(3, 4)])
    assert densest_prefix(k4_pendant).vertices == (0, 1, 2, 3)
    assert densest_prefix(cycle(6)).vertices == tuple(range(6))


def test_densest_random_g12():
    g = gnp(12, "1/2", 2024)
    assert max_avg_degree(g) == brute_density(g)
    m = densest_mask(g)
    assert avg_degree(induced_subgraph(g, m)) == brute_density(g)


@given(graphs(max_n=9, min_n=1))
def test_densest_matches_brute_force(g):
    assert max_avg_degree(g) == brute_density(g)


# -- regularisation ----------------------------------------------------

def _check_ko(g, piece, params):
    for a in range(g.n):
        if piece.a >> a & 1:
            assert params.lo <= (g.adj(a) & piece.b).bit_count() <= params.hi
    assert piece.a.bit_count() >= params.ratio * piece.b.bit_count()


def test_ko_on_k64_64():
    g = complete_bipartite(64, 64)
    piece, params, rep = ko_extract(g, 2, seed=11)
    assert not params.substituted and params.lo == 8 and params.hi == 128
    _check_ko(g, piece, params)
    assert piece.a.bit_count() >= piece.b.bit_count() / 4


def test_ko_on_k40_40_minus_matching():
    g = Graph(80, [(i, 40 + j) for i in range(40) for j in range(40) if i != j], bipartition=(range(40), range(40, 80)))
    piece, params, rep = ko_extract(g, 2, seed=3)
    assert params.Gamma == 39
    _check_ko(g, piece, params)


def test_ko_guards():
    with pytest.raises(PreconditionError):
        ko_extract(complete_bipartite(10, 10), 2)  # Ad = 10 <= 32
    with pytest.raises(PreconditionError):
        ko_extract(complete(3), 1, practical=True)
    piece, params, rep = ko_extract(complete_bipartite(10, 10), 2, practical=True)
    assert params.substituted and rep.substitutions
    _check_ko(complete_bipartite(10, 10), piece, params)


def test_ko_is_deterministic():
    g = complete_bipartite(64, 64)
    a = ko_extract(g, 2, seed=99)
    b = ko_extract(g, 2, seed=99)
    assert (a[0].a, a[0].b) == (b[0].a, b[0].b)


# -- biased fingerprint step -------------------------------------------

def test_biased_smallest_case():
    h = Graph(3, [(0, 1), (0, 2)], bipartition=([0], [1, 2]))
    col = EdgeColouring(h, 2, [1, 1])
    c, piece, rep = biased_mono_bipartite(h, col, 1, 2, seed=0)
    assert c == 1 and piece.a == 0b001 and piece.b == 0b010


def test_biased_all_colour_two():
    h = complete_bipartite(6, 3)
    col = EdgeColouring(h, 2, [2] * h.m)
    c, piece, rep = biased_mono_bipartite(h, col, 1, 3, seed=5)
    assert c == 2
    assert verify_mono_witness(col, piece.vertices, 2, 1)


def _biased_instance():
    nb = 10
    na = nb << 10
    rng = stage_rng(1, "biased-instance")
    edges = []
    for a in range(na):
        for b in rng.choice(nb, size=int(rng.integers(4, 11)), replace=False):
            edges.append((a, na + int(b)))
    g = Graph(na + nb, edges, bipartition=(range(na), range(na, na + nb)))
    return g, EdgeColouring(g, 2, [1 + int(x) for x in rng.integers(0, 2, size=g.m)])


def test_biased_success_rate_on_wide_instance():
    g, col = _biased_instance()
    ok = 0
    for i in range(100):
        try:
            c, piece, rep = biased_mono_bipartite(g, col, 2, 10, derive_seed(3, i), max_retries=256)
        except RetriesExhausted:
            continue
        ok += 1
        for a in iter_bits(piece.a):
            nbrs = g.adj(a) & piece.b
            assert nbrs.bit_count() == 2
            assert all(col.colour(a, b) == c for b in iter_bits(nbrs))
    assert ok >= 95


# -- dense bipartite search --------------------------------------------

def test_klst_examples():
    r = klst_search(complete(5), 4, 1)
    assert r.kind == "clique" and len(r.vertices) == 4
    r = klst_search(cycle(6), 3, 2)
    assert r.kind == "bipartite" and r.vertices == tuple(range(6))
    r = klst_search(petersen(), 3, 2)
    assert r.kind == "bipartite"
    v = induced_subgraph(petersen(), r.vertices)
    assert min_degree(v) >= 2 and v.m == len(r.vertices)  # an induced even cycle


@given(graphs(max_n=9), st.integers(1, 3))
def test_klst_outputs_are_valid(g, d):
    r = klst_search(g, 4, d)
    if r.kind == "clique":
        assert len(r.vertices) == 4 and all(g.has_edge(u, v) for u, v in itertools.combinations(r.vertices, 2))
    elif r.kind == "bipartite":
        v = induced_subgraph(g, r.vertices)
        a, b = r.parts
        assert a | b == v.mask and not a & b
        assert all(not g.has_edge(x, y) for x, y in itertools.combinations(r.vertices, 2)
                   if (a >> x & 1) == (a >> y & 1))
        assert min_degree(v) >= d


# -- two-colour extraction ---------------------------------------------

def test_mono_extract_k6():
    g = complete(6)
    for code in range(0, 1 << 15, 97):
        col = EdgeColouring(g, 2, [1 + (code >> i & 1) for i in range(15)])
        out = mono_extract(g, col, 2, seed=code)
        assert out.kind == MONO_CLIQUE and len(out.witness) == 3 and out.verified
        assert verify_outcome(out, g, col, 2)


def test_mono_extract_c5_one_colour():
    g = cycle(5)
    out = mono_extract(g, EdgeColouring(g, 2, [1] * 5), 2)
    assert out.kind == MONO_DENSE and out.witness == tuple(range(5)) and out.colour == 1


def test_mono_extract_alternating_c4(alt_c4):
    out = mono_extract(alt_c4.base, alt_c4, 2)
    assert out.kind == EXHAUSTED and not out.verified
    assert mono_dense_oracle(alt_c4.base, alt_c4, 2) is None


def test_mono_extract_faithful_mode_small_instance(alt_c4):
    g = complete(6)
    col = EdgeColouring(g, 2, [1] * 15)
    out = mono_extract(g, col, 2, "faithful")
    assert out.kind == MONO_CLIQUE and out.params["constants"]["threshold"] == str(g_of_d(2))
    out = mono_extract(alt_c4.base, alt_c4, 1, "faithful")
    assert out.kind in (EXHAUSTED, MONO_CLIQUE, MONO_DENSE)
    assert out.kind == EXHAUSTED or verify_outcome(out, alt_c4.base, alt_c4, 1)


def test_mono_extract_rejects_bad_inputs(alt_c4):
    with pytest.raises(PreconditionError):
        mono_extract(alt_c4.base, alt_c4, 0)
    with pytest.raises(PreconditionError):
        mono_extract(alt_c4.base, alt_c4, 1, "other")
    with pytest.raises(PreconditionError):
        mono_extract(cycle(5), alt_c4, 1)


@given(coloured_graphs(max_n=9), st.integers(1, 3), st.integers(0, 2 ** 32))
def test_mono_extract_sound_and_complete_small_d(col, d, seed):
    g = col.base
    out = mono_extract(g, col, d, seed=seed)
    if out.kind != EXHAUSTED:
        assert verify_outcome(out, g, col, d)
    oracle = mono_dense_oracle(g, col, d)
    if d <= 2:
        assert (oracle is not None) == (out.kind != EXHAUSTED)
    elif out.kind != EXHAUSTED:
        assert oracle is not None


def test_mono_extract_deterministic():
    g = gnp(12, "1/2", 5)
    col = random_colouring(g, 2, 5)
    a = mono_extract(g, col, 2, seed=8).to_json(timing=False)
    b = mono_extract(g, col, 2, seed=8).to_json(timing=False)
    assert a == b


def test_mono_extract_on_view():
    g = complete(7)
    col = EdgeColouring(g, 2, [1] * g.m)
    out = mono_extract(induced_subgraph(g, {2, 3, 5, 6}), col, 2)
    assert out.found and set(out.witness) <= {2, 3, 5, 6}


# -- k colours -----------------------------------------------------------

def test_mono_extract_k_single_colour():
    g = cycle(4)
    out = mono_extract_k(g, EdgeColouring(g, 1, [1] * 4), 2)
    assert out.found and out.witness == (0, 1, 2, 3)


def test_mono_extract_k_three_colours_on_k17():
    g = complete(17)
    for seed in range(5):
        col = random_colouring(g, 3, seed)
        out = mono_extract_k(g, col, 2, seed=seed)
        assert out.found and verify_outcome(out, g, col, 2)
        assert len(out.witness) >= 3


def test_mono_extract_k_delegates_for_two_colours():
    for s in range(40):
        g = gnp(9, "1/2", s)
        col = random_colouring(g, 2, s)
        a = mono_extract_k(g, col, 2, seed=s).to_json(timing=False)
        b = mono_extract(g, col, 2, seed=s).to_json(timing=False)
        assert a == b


def test_mono_extract_k_faithful_three_colours():
    g = cycle(6)
    col = EdgeColouring(g, 3, [1, 2, 3, 1, 2, 3])
    out = mono_extract_k(g, col, 2, "faithful")
    assert out.kind == EXHAUSTED


# -- oriented and digraph extraction -------------------------------------

def test_oriented_tt8():
    out = oriented_extract(transitive_tournament(8), 4, 1)
    assert out.kind == TRANSITIVE and len(out.order) == 4
    assert verify_outcome(out, transitive_tournament(8), None, 1, 4)


def test_oriented_k33_antidirected():
    d = Orientation(6, [(a, b) for a in range(3) for b in range(3, 6)])
    out = oriented_extract(d, 3, 3)
    assert out.kind == ANTIDIRECTED and out.witness == tuple(range(6))


def test_oriented_k66_random():
    g = complete_bipartite(6, 6)
    for s in range(20):
        d = random_orientation(g, s)
        out = oriented_extract(d, 3, 1, seed=s)
        assert out.kind != EXHAUSTED
        assert verify_outcome(out, d, None, 1, 3)
        if out.kind == ANTIDIRECTED:
            assert is_antidirected(induced_subgraph(d, out.witness))


@given(st.integers(3, 9), st.integers(0, 2 ** 32), st.integers(1, 2), st.integers(2, 3))
def test_oriented_sound(n, seed, d, r):
    dg = random_orientation(gnp(n, "7/10", seed), seed)
    out = oriented_extract(dg, r, d, seed=seed)
    if out.kind != EXHAUSTED:
        assert verify_outcome(out, dg, None, d, r)
    elif d == 1:
        assert not dg.arcs
    if out.kind == ANTIDIRECTED and d >= 1:
        assert antidirected_dense_oracle(dg, d) is not None


def test_oriented_rejects_digons():
    with pytest.raises(PreconditionError):
        oriented_extract(Digraph(2, [(0, 1), (1, 0)]), 2, 1)


def test_digraph_split_examples():
    sym_k4 = Digraph(4, [(u, v) for u in range(4) for v in range(4) if u != v])
    out = digraph_split(sym_k4, 3)
    assert out.found and out.extra["digraph_kind"] == "symmetric" and out.witness == (0, 1, 2, 3)
    out = digraph_split(transitive_tournament(5), 2)
    assert out.found and out.extra["digraph_kind"] == "oriented"


def test_digraph_split_mixed():
    arcs = []
    for a in range(3):
        for b in range(3, 6):
            arcs += [(a, b), (b, a)]
    arcs += [(6, 7), (7, 8), (8, 6), (6, 0)]
    d = Digraph(9, arcs)
    out = digraph_split(d, 3)
    assert out.extra["digraph_kind"] == "symmetric" and out.witness == tuple(range(6))
