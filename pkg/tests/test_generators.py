from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from monoextract.errors import LimitExceeded, PreconditionError
from monoextract.generators import (
    GenSpec,
    burling,
    burling_profile,
    cube,
    generate,
    gen,
    girth,
    high_girth_bipartite,
    is_triangle_free,
    petersen,
    random_orientation,
)
from monoextract.graph import EdgeColouring, Graph, Orientation
from monoextract.measures import chromatic_number
from monoextract.rng import bernoulli_mask, check_seed, derive_seed, stage_rng

SPECS = [
    GenSpec("gnp", {"n": 12, "p": "1/3"}, 5),
    GenSpec("bipartite", {"n_a": 5, "n_b": 7, "p": 0.5}, 6),
    GenSpec("tournament", {"n": 9}, 7),
    GenSpec("orientation", {"graph": {"family": "gnp", "params": {"n": 8}}}, 8),
    GenSpec("colouring", {"k": 3, "graph": {"family": "complete", "params": {"n": 6}}}, 9),
    GenSpec("high-girth-bipartite", {"n": 20, "delta": 3, "girth": 6}, 10),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.family)
def test_same_spec_same_instance(spec):
    assert generate(spec) == generate(spec)


def test_seeds_matter():
    a = gen(GenSpec("gnp", {"n": 20}, 1))
    b = gen(GenSpec("gnp", {"n": 20}, 2))
    assert a != b


def test_spec_json_round_trip():
    for spec in SPECS:
        assert GenSpec.from_json(spec.to_json()) == spec


def test_gnp_extremes():
    assert gen(GenSpec("gnp", {"n": 7, "p": 0}, 0)).m == 0
    assert gen(GenSpec("gnp", {"n": 7, "p": 1}, 0)).m == 21


def test_gnp_density_roughly_right():
    g = gen(GenSpec("gnp", {"n": 60, "p": "1/4"}, 3))
    assert abs(g.m / (60 * 59 / 2) - 0.25) < 0.05


def test_bipartite_is_certified():
    g = gen(SPECS[1])
    a, b = g.bipartition
    assert a == (1 << 5) - 1 and b == ((1 << 12) - 1) ^ a
    assert all((a >> u & 1) != (a >> v & 1) for u, v in g.edges)


def test_tournament_is_complete_orientation():
    t = gen(SPECS[2])
    assert isinstance(t, Orientation) and len(t.arcs) == 36


def test_colouring_uses_range():
    col = gen(SPECS[4])
    assert isinstance(col, EdgeColouring) and set(col.colours) <= {1, 2, 3}


def test_forward_orientation():
    g = Graph(4, [(0, 2), (0, 3), (1, 2)]).with_bipartition([0, 1], [2, 3])
    o = random_orientation(g, 0, "forward")
    assert sorted(o.arcs) == [(0, 2), (0, 3), (1, 2)]
    with pytest.raises(PreconditionError):
        random_orientation(Graph(3, [(0, 1), (1, 2), (0, 2)]), 0, "forward")


@pytest.mark.parametrize("bad", [
    GenSpec("nope", {}, 0),
    GenSpec("gnp", {}, 0),
    GenSpec("gnp", {"n": 5, "p": 2}, 0),
    GenSpec("gnp", {"n": 5, "p": "x"}, 0),
    GenSpec("gnp", {"n": "five"}, 0),
    GenSpec("gnp", {"n": 5}, -1),
    GenSpec("colouring", {"k": 2}, 0),
])
def test_bad_specs(bad):
    with pytest.raises(PreconditionError):
        generate(bad)


def test_named_graphs():
    assert petersen().m == 15 and girth(petersen()) == 5
    assert cube().m == 12 and girth(cube()) == 4
    assert gen(GenSpec("cube", {"dim": 4}, 0)).n == 16


def test_high_girth_reports_achieved():
    g, info = generate(SPECS[5])
    assert info["achieved_girth"] is None or info["achieved_girth"] >= 6
    assert info["achieved_delta"] >= 1
    assert g.bipartition is not None


@pytest.mark.parametrize("level,expected_n", [(1, 1), (2, 3), (3, 13)])
def test_burling_small_levels(level, expected_n):
    g, family = burling(level)
    assert g.n == expected_n
    assert is_triangle_free(g)
    assert chromatic_number(g) == level


def test_burling_family_members_are_stable():
    g, family = burling(3)
    for s in family:
        assert not any((s >> u & 1) and (s >> v & 1) for u, v in g.edges)


def test_burling_profile():
    p = burling_profile(3)
    assert p["triangle_free"] and p["chi"] == 3 and p["clique_number"] == 2


def test_burling_limit():
    with pytest.raises(LimitExceeded):
        burling(10)


# -- rng ---------------------------------------------------------------

def test_stage_rng_is_independent_per_stage():
    a = stage_rng(1, "x", 0).integers(0, 1 << 30, 5)
    assert np.array_equal(a, stage_rng(1, "x", 0).integers(0, 1 << 30, 5))
    assert not np.array_equal(a, stage_rng(1, "y", 0).integers(0, 1 << 30, 5))
    assert not np.array_equal(a, stage_rng(1, "x", 1).integers(0, 1 << 30, 5))


@given(st.integers(0, 2 ** 64 - 1), st.integers(0, 10 ** 6))
def test_derive_seed_range(seed, i):
    s = derive_seed(seed, i)
    assert 0 <= s < 2 ** 64 and s == derive_seed(seed, i)


def test_derive_seed_distinct():
    assert len({derive_seed(0, i) for i in range(1000)}) == 1000


@pytest.mark.parametrize("bad", [-1, 2 ** 64, 1.5, "3"])
def test_check_seed(bad):
    with pytest.raises(PreconditionError):
        check_seed(bad)


def test_bernoulli_extremes_and_rate():
    rng = stage_rng(0, "t")
    verts = list(range(2000))
    assert bernoulli_mask(rng, verts, Fraction(0)) == 0
    assert bernoulli_mask(rng, verts, Fraction(1)) == (1 << 2000) - 1
    k = bernoulli_mask(rng, verts, Fraction(1, 8)).bit_count()
    assert 180 < k < 320
    with pytest.raises(PreconditionError):
        bernoulli_mask(rng, verts, Fraction(3, 2))
    with pytest.raises(LimitExceeded):
        bernoulli_mask(rng, verts, Fraction(1, 1 << 63))
