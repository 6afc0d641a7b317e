"""Seed-deterministic instance generators.

``GenSpec(family, params, seed)`` always yields the same instance.
Probabilities may be given as floats, ints or ``"a/b"`` strings; they are
converted to exact fractions before sampling.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .bits import iter_bits
from .config import Limits, default_limits
from .errors import LimitExceeded, PreconditionError
from .graph import Digraph, EdgeColouring, Graph, Orientation
from .measures import biclique_number, chromatic_number, clique_number, core_mask, degeneracy, min_degree
from .rng import bernoulli_mask, check_seed, stage_rng

FAMILIES = ("gnp", "bipartite", "tournament", "orientation", "colouring", "burling", "high-girth-bipartite")


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params, "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "GenSpec":
        return cls(obj["family"], dict(obj.get("params", {})), int(obj.get("seed", 0)))

    def __hash__(self) -> int:
        return hash((self.family, repr(sorted(self.params.items())), self.seed))


def _prob(p: Any) -> Fraction:
    try:
        q = Fraction(str(p)) if not isinstance(p, Fraction) else p
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"bad probability {p!r}") from None
    if not 0 <= q <= 1:
        raise PreconditionError(f"probability {p!r} outside [0, 1]")
    return q


def _posint(params: dict, key: str, minimum: int = 0) -> int:
    if key not in params:
        raise PreconditionError(f"missing parameter {key!r}")
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, int):
        try:
            v = int(str(v), 0)
        except ValueError:
            raise PreconditionError(f"parameter {key!r} must be an integer") from None
    if v < minimum:
        raise PreconditionError(f"parameter {key!r} must be >= {minimum}")
    return v


# -- named graphs ------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("cycles need n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)]).with_bipartition(range(a), range(a, a + b))


def star(k: int) -> Graph:
    return complete_bipartite(1, k)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def cube(dim: int = 3) -> Graph:
    n = 1 << dim
    return Graph(n, [(u, u ^ (1 << b)) for u in range(n) for b in range(dim) if u < u ^ (1 << b)])


def transitive_tournament(n: int) -> Orientation:
    return Orientation(n, combinations(range(n), 2))


def directed_cycle(n: int) -> Orientation:
    return Orientation(n, [(i, (i + 1) % n) for i in range(n)])


NAMED = {
    "complete": (complete, ("n",)),
    "cycle": (cycle, ("n",)),
    "path": (path, ("n",)),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
    "star": (star, ("k",)),
    "petersen": (petersen, ()),
    "cube": (cube, ("dim",)),
    "transitive_tournament": (transitive_tournament, ("n",)),
    "directed_cycle": (directed_cycle, ("n",)),
}


# -- random families ---------------------------------------------------

def gnp(n: int, p, seed: int) -> Graph:
    p = _prob(p)
    rng = stage_rng(seed, "gnp")
    pairs = list(combinations(range(n), 2))
    keep = bernoulli_mask(rng, list(range(len(pairs))), p)
    return Graph(n, [e for i, e in enumerate(pairs) if (keep >> i) & 1])


def random_bipartite(na: int, nb: int, p, seed: int) -> Graph:
    p = _prob(p)
    rng = stage_rng(seed, "bipartite")
    pairs = [(i, na + j) for i in range(na) for j in range(nb)]
    keep = bernoulli_mask(rng, list(range(len(pairs))), p)
    g = Graph(na + nb, [e for i, e in enumerate(pairs) if (keep >> i) & 1])
    return g.with_bipartition(range(na), range(na, na + nb))


def tournament(n: int, seed: int) -> Orientation:
    rng = stage_rng(seed, "tournament")
    pairs = list(combinations(range(n), 2))
    flips = rng.integers(0, 2, size=len(pairs)) if pairs else []
    return Orientation(n, [(u, v) if f == 0 else (v, u) for (u, v), f in zip(pairs, flips)])


def random_orientation(g: Graph, seed: int, mode: str = "uniform") -> Orientation:
    """Uniform orientation, or (``forward``) every edge from part A to part B."""
    if mode == "forward":
        bip = g.bipartition or g.find_bipartition()
        if bip is None:
            raise PreconditionError("forward orientation needs a bipartite graph")
        a = bip[0]
        return Orientation(g.n, [(u, v) if (a >> u) & 1 else (v, u) for (u, v) in g.edges])
    if mode != "uniform":
        raise PreconditionError(f"unknown orientation mode {mode!r}")
    rng = stage_rng(seed, "orientation")
    flips = rng.integers(0, 2, size=g.m) if g.m else []
    return Orientation.of(g, [f == 0 for f in flips])


def random_colouring(g: Graph, k: int, seed: int) -> EdgeColouring:
    if k < 1:
        raise PreconditionError("k must be positive")
    rng = stage_rng(seed, "colouring")
    cols = rng.integers(1, k + 1, size=g.m) if g.m else []
    return EdgeColouring(g, k, [int(c) for c in cols])


# -- Burling sequence --------------------------------------------------

def burling(level: int, limits: Limits | None = None) -> tuple[Graph, list[int]]:
    """Level ``k`` graph of the Burling sequence and its family of stable sets.

    Level 1 is one vertex with stable-set family ``{{v}}``. Level ``k+1``
    takes a main copy of level ``k``; for every stable set ``S`` of the main
    copy it adds a fresh copy ``G_S``, and for every stable set ``T`` of
    ``G_S`` a new vertex ``y`` adjacent exactly to ``T``. The new family is
    ``{S | T, S | {y}}``. Any proper colouring of level ``k`` leaves some
    family member with ``k`` distinct colours, so ``chi >= k``; the graph is
    triangle-free because each ``y`` sees only a stable set.
    """
    limits = limits or default_limits()
    if level < 1:
        raise PreconditionError("Burling level must be at least 1")
    if level > limits.burling_level:
        raise LimitExceeded("burling level", level, limits.burling_level)
    n, edges, family = 1, [], [1]
    for _ in range(level - 1):
        base_n, base_edges, base_family = n, list(edges), list(family)
        new_edges = list(base_edges)
        new_family = []
        nxt = base_n
        for s in base_family:
            off = nxt
            nxt += base_n
            new_edges += [(u + off, v + off) for (u, v) in base_edges]
            for t in base_family:
                tt = t << off
                y = nxt
                nxt += 1
                new_edges += [(w, y) for w in iter_bits(tt)]
                new_family.append(s | tt)
                new_family.append(s | 1 << y)
        n, edges, family = nxt, new_edges, new_family
    return Graph(n, edges), family


def is_triangle_free(g: Graph) -> bool:
    adj = g.adjacency
    return not any(adj[u] & adj[v] for (u, v) in g.edges)


def burling_profile(level: int, limits: Limits | None = None) -> dict:
    """Measured degeneracy, biclique number, chromatic number and triangle-freeness."""
    limits = limits or default_limits()
    g, _ = burling(level, limits)
    prof = {
        "level": level,
        "n": g.n,
        "m": g.m,
        "degeneracy": degeneracy(g).value,
        "tau": biclique_number(g, Limits(biclique_n=max(limits.biclique_n, g.n))),
        "triangle_free": is_triangle_free(g),
        "clique_number": clique_number(g, Limits(clique_n=max(limits.clique_n, g.n))),
    }
    # exact colouring stays cheap on these sparse triangle-free instances
    prof["chi"] = chromatic_number(g, Limits(chromatic_n=max(limits.chromatic_n, g.n)))
    return prof


# -- high girth bipartite ----------------------------------------------

def _shortest_cycle_through(adj, e: tuple[int, int]) -> int | None:
    """Length of a shortest cycle using edge ``e``, or ``None``."""
    u, v = e
    dist = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        for w in iter_bits(adj[x]):
            if x == u and w == v:
                continue
            if w not in dist:
                dist[w] = dist[x] + 1
                q.append(w)
    return dist[v] + 1 if v in dist else None


def girth(g: Graph) -> int | None:
    best = None
    for e in g.edges:
        c = _shortest_cycle_through(g.adjacency, e)
        if c is not None and (best is None or c < best):
            best = c
    return best


def high_girth_bipartite(n: int, delta: int, target_girth: int, seed: int) -> tuple[Graph, dict]:
    """Union of ``delta`` random perfect matchings on two parts of size ``n``,
    short cycles broken by edge deletion, then peeled back to min degree.

    Best effort: the achieved minimum degree and girth are reported.
    """
    if n < 1 or delta < 1 or delta > n:
        raise PreconditionError("need 1 <= delta <= n")
    rng = stage_rng(seed, "high-girth-bipartite")
    edges: set[tuple[int, int]] = set()
    for _ in range(delta):
        for _attempt in range(100):
            perm = rng.permutation(n)
            cand = {(i, n + int(perm[i])) for i in range(n)}
            if not cand & edges:
                edges |= cand
                break
        else:
            edges |= {(i, n + int(rng.permutation(n)[i])) for i in range(n)}
    adj = [0] * (2 * n)
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    order = sorted(edges)
    rng.shuffle(order)
    for (u, v) in order:
        if not (adj[u] >> v) & 1:
            continue
        c = _shortest_cycle_through(adj, (u, v))
        if c is not None and c < target_girth:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
    g = Graph._from_adj(adj).with_bipartition(range(n), range(n, 2 * n))
    # re-peel: keep the largest k-core that is nonempty, k <= delta
    mask, k = g.vertex_mask, delta
    while k > 0:
        mask = core_mask(g.adjacency, g.vertex_mask, k)
        if mask:
            break
        k -= 1
    sub, labels = g.subgraph(iter_bits(mask)) if mask else (g, tuple(range(g.n)))
    info = {
        "requested_delta": delta,
        "requested_girth": target_girth,
        "achieved_delta": min_degree(sub) if sub.n else 0,
        "achieved_girth": girth(sub),
        "n": sub.n,
    }
    return sub, info


# -- dispatcher --------------------------------------------------------

def _sub_graph(params: dict, seed: int):
    """Nested graph parameter: a GenSpec dict, or a named graph dict."""
    spec = params.get("graph")
    if spec is None:
        raise PreconditionError("missing parameter 'graph'")
    if isinstance(spec, Graph):
        return spec
    if isinstance(spec, dict):
        inner = GenSpec.from_json({"seed": seed, **spec}) if "family" in spec else None
        if inner is None:
            raise PreconditionError("nested graph must name a family")
        obj, _ = generate(inner)
        if not isinstance(obj, Graph):
            raise PreconditionError("nested family must produce a graph")
        return obj
    raise PreconditionError("graph parameter must be a GenSpec object")


def generate(spec: GenSpec, limits: Limits | None = None) -> tuple[Any, dict]:
    """Instance plus an info dict (achieved parameters where relevant)."""
    check_seed(spec.seed)
    p, s, fam = spec.params, spec.seed, spec.family
    if fam in NAMED:
        fn, keys = NAMED[fam]
        args = [_posint(p, k, 1) for k in keys if k in p or fam != "cube"]
        return fn(*args), {}
    if fam == "gnp":
        return gnp(_posint(p, "n"), p.get("p", "1/2"), s), {}
    if fam == "bipartite":
        return random_bipartite(_posint(p, "n_a"), _posint(p, "n_b"), p.get("p", "1/2"), s), {}
    if fam == "tournament":
        return tournament(_posint(p, "n"), s), {}
    if fam == "orientation":
        return random_orientation(_sub_graph(p, s), s, p.get("mode", "uniform")), {}
    if fam == "colouring":
        return random_colouring(_sub_graph(p, s), _posint(p, "k", 1), s), {}
    if fam == "burling":
        g, family = burling(_posint(p, "level", 1), limits)
        return g, {"stable_sets": len(family)}
    if fam == "high-girth-bipartite":
        return high_girth_bipartite(_posint(p, "n", 1), _posint(p, "delta", 1), _posint(p, "girth", 3), s)
    raise PreconditionError(f"unknown family {fam!r}")


def gen(spec: GenSpec, limits: Limits | None = None):
    return generate(spec, limits)[0]
