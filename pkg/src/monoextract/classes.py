"""Recognisers and verifiers for even holes, odd signings, antidirected
cycles and orientations avoiding forbidden induced subdigraphs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence, Union

from .bits import iter_bits, mask_of
from .config import Limits, default_limits
from .cycles import induced_cycles, is_induced_cycle
from .errors import BudgetExceeded, LimitExceeded, PreconditionError
from .graph import Digraph, Graph, InducedView, Orientation, underlying_graph
from .measures import clique_number, min_degree


class Signing:
    """0/1 label on every edge of ``base``."""

    __slots__ = ("base", "labels")

    def __init__(self, base: Graph, labels: Union[Mapping[tuple[int, int], int], Sequence[int]]):
        if isinstance(labels, Mapping):
            norm = {tuple(sorted(e)): int(b) for e, b in labels.items()}
            missing = [e for e in base.edges if e not in norm]
            if missing:
                raise PreconditionError(f"unlabelled edge {missing[0]}")
            extra = set(norm) - set(base.edges)
            if extra:
                raise PreconditionError(f"label on non-edge {sorted(extra)[0]}")
            seq = tuple(norm[e] for e in base.edges)
        else:
            seq = tuple(int(b) for b in labels)
            if len(seq) != base.m:
                raise PreconditionError("need one label per edge")
        if any(b not in (0, 1) for b in seq):
            raise PreconditionError("labels must be 0 or 1")
        self.base = base
        self.labels = seq

    def label(self, u: int, v: int) -> int:
        return self.labels[self.base.edges.index((min(u, v), max(u, v)))]

    def __repr__(self) -> str:
        return f"Signing(m={len(self.labels)}, ones={sum(self.labels)})"


# -- antidirected structure -------------------------------------------

def _dig_and_mask(d: Union[Digraph, InducedView]) -> tuple[Digraph, int]:
    if isinstance(d, InducedView):
        if not isinstance(d.base, Digraph):
            raise TypeError("expected a digraph view")
        return d.base, d.mask
    return d, d.vertex_mask


def is_antidirected(d: Union[Digraph, InducedView]) -> bool:
    """Every vertex is a source or a sink."""
    dg, mask = _dig_and_mask(d)
    for v in iter_bits(mask):
        if dg.out_adj(v) & dg.in_adj(v) & mask:
            raise PreconditionError(f"digon at vertex {v}: not an oriented graph")
    return all(not (dg.out_adj(v) & mask and dg.in_adj(v) & mask) for v in iter_bits(mask))


def _alternates(d: Digraph, cycle: Sequence[int]) -> bool:
    k = len(cycle)
    for i, v in enumerate(cycle):
        a, b = cycle[i - 1], cycle[(i + 1) % k]
        outs = d.has_arc(v, a) + d.has_arc(v, b)
        if outs not in (0, 2):
            return False
    return True


def find_induced_antidirected_cycle(
    d: Orientation, len_min: int = 4, limits: Limits | None = None
) -> list[int] | None:
    """Induced cycle of even length >= max(4, len_min) on which arcs alternate."""
    limits = limits or default_limits()
    if d.n > limits.antidirected_cycle_n:
        raise LimitExceeded("find_induced_antidirected_cycle", d.n, limits.antidirected_cycle_n)
    g = underlying_graph(d)
    lo = max(4, len_min)
    for cyc in induced_cycles(g.adjacency, g.vertex_mask, lo):
        if len(cyc) % 2 == 0 and _alternates(d, cyc):
            return cyc
    return None


def _path_key(paths: Mapping, i: int, j: int) -> list[int]:
    if (i, j) in paths:
        return list(paths[(i, j)])
    if (j, i) in paths:
        return list(reversed(paths[(j, i)]))
    raise PreconditionError(f"missing branch path between {i} and {j}")


def antidirected_concatenation_check(k: Orientation, branch_paths: Mapping[tuple[int, int], Sequence[int]]) -> bool:
    """Check that joining P_{1,2}, P_{2,3}, ..., P_{l,1} gives an induced antidirected
    cycle with at least ``2l`` vertices.

    ``branch_paths`` maps each pair of branch vertices (keys use the actual
    vertex ids) to the path between them, listed from the first to the
    second. Branch vertices are taken in increasing order. Raises
    ``PreconditionError`` when ``k`` is not an antidirected subdivision of
    a complete graph with these paths.
    """
    branch = sorted({v for pair in branch_paths for v in pair})
    ell = len(branch)
    if ell < 3:
        raise PreconditionError("an antidirected subdivision of K_l needs l >= 3 branch vertices")
    if len(branch_paths) != ell * (ell - 1) // 2:
        raise PreconditionError("branch_paths must hold exactly one path per pair of branch vertices")
    if not is_antidirected(k):
        raise PreconditionError("digraph is not antidirected")
    g = underlying_graph(k)
    used_edges: set[tuple[int, int]] = set()
    interior: set[int] = set()
    for (a, b), path in branch_paths.items():
        p = list(path)
        if p[0] != a or p[-1] != b:
            raise PreconditionError(f"path for ({a},{b}) does not join its endpoints")
        if (len(p) - 1) % 2:
            raise PreconditionError(f"path for ({a},{b}) has odd length")
        for x in p[1:-1]:
            if x in interior or x in branch:
                raise PreconditionError("branch paths are not internally disjoint")
            interior.add(x)
        for x, y in zip(p, p[1:]):
            if not g.has_edge(x, y):
                raise PreconditionError(f"path edge {x}-{y} missing from the digraph")
            used_edges.add((min(x, y), max(x, y)))
    if used_edges != set(g.edges) or set(range(k.n)) != set(branch) | interior:
        raise PreconditionError("digraph is not exactly the subdivision described by branch_paths")
    kinds = {(k.out_adj(v) != 0) for v in branch}
    if len(kinds) != 1:
        raise PreconditionError("branch vertices are not all sources or all sinks")

    cycle: list[int] = []
    for idx in range(ell):
        seg = _path_key(branch_paths, branch[idx], branch[(idx + 1) % ell])
        cycle.extend(seg[:-1])
    return (
        len(cycle) >= 2 * ell
        and is_induced_cycle(g.adjacency, cycle)
        and _alternates(k, cycle)
    )


# -- even holes and odd signings --------------------------------------

def is_even_hole_free(g: Graph, limits: Limits | None = None) -> bool:
    limits = limits or default_limits()
    if g.n > limits.even_hole_n:
        raise LimitExceeded("is_even_hole_free", g.n, limits.even_hole_n)
    return not any(len(c) % 2 == 0 for c in induced_cycles(g.adjacency, g.vertex_mask, 4))


def eh_mindeg_property(g: Graph, limits: Limits | None = None) -> bool:
    """``min_degree <= 2 * clique_number - 2`` on an even-hole-free graph."""
    if not is_even_hole_free(g, limits):
        raise PreconditionError("graph contains an even hole")
    return min_degree(g) <= 2 * clique_number(g, limits) - 2


def _edge_index(g: Graph) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(g.edges)}


def _cycle_edge_masks(g: Graph) -> list[int]:
    idx = _edge_index(g)
    out = []
    for c in induced_cycles(g.adjacency, g.vertex_mask, 3):
        m = 0
        for i in range(len(c)):
            u, v = c[i - 1], c[i]
            m |= 1 << idx[(min(u, v), max(u, v))]
        out.append(m)
    return out


def verify_odd_signing(g: Graph, s: Signing, limits: Limits | None = None) -> bool:
    """Every induced cycle, triangles included, has an odd label sum."""
    limits = limits or default_limits()
    if g.n > limits.odd_signing_n:
        raise LimitExceeded("verify_odd_signing", g.n, limits.odd_signing_n)
    if s.base != g:
        raise PreconditionError("signing belongs to a different graph")
    code = sum(b << i for i, b in enumerate(s.labels))
    return all((code & cm).bit_count() % 2 == 1 for cm in _cycle_edge_masks(g))


def _spanning_forest(g: Graph) -> set[int]:
    idx = _edge_index(g)
    seen = 0
    forest = set()
    for r in range(g.n):
        if (seen >> r) & 1:
            continue
        seen |= 1 << r
        stack = [r]
        while stack:
            u = stack.pop()
            for w in iter_bits(g.adj(u) & ~seen):
                seen |= 1 << w
                forest.add(idx[(min(u, w), max(u, w))])
                stack.append(w)
    return forest


def find_odd_signing(g: Graph, limits: Limits | None = None) -> Signing | None:
    """Search one labelling per switching class.

    Switching at a vertex flips every label on its edges and preserves the
    parity of every cycle, so labels on a spanning forest can be fixed to 0
    and only the ``2^(m-n+c)`` labellings of the remaining edges are tried.
    """
    limits = limits or default_limits()
    if g.m > limits.signing_edges:
        raise BudgetExceeded("find_odd_signing", limits.signing_edges)
    forest = _spanning_forest(g)
    free = [i for i in range(g.m) if i not in forest]
    cycles = _cycle_edge_masks(g)
    # re-index each cycle onto the free edges
    pos = {e: j for j, e in enumerate(free)}
    reduced = []
    for cm in cycles:
        r = 0
        for i in iter_bits(cm):
            if i in pos:
                r |= 1 << pos[i]
        reduced.append(r)
    for code in range(1 << len(free)):
        if all((code & r).bit_count() & 1 for r in reduced):
            labels = [0] * g.m
            for j, i in enumerate(free):
                labels[i] = (code >> j) & 1
            return Signing(g, labels)
    return None


# -- forbidden induced subdigraphs -------------------------------------

_CANON: dict[tuple[int, int], int] = {}


def _code(k: int, arcs: Iterable[tuple[int, int]]) -> int:
    c = 0
    for i, j in arcs:
        c |= 1 << (i * k + j)
    return c


def canonical_code(k: int, code: int) -> int:
    """Smallest arc-bitset code over all relabellings of a k-vertex digraph."""
    key = (k, code)
    got = _CANON.get(key)
    if got is not None:
        return got
    arcs = [(b // k, b % k) for b in iter_bits(code)]
    best = None
    for p in permutations(range(k)):
        c = 0
        for i, j in arcs:
            c |= 1 << (p[i] * k + p[j])
        if best is None or c < best:
            best = c
    _CANON[key] = best
    return best


def canonical_form(d: Digraph) -> tuple[int, int]:
    return d.n, canonical_code(d.n, _code(d.n, d.arcs))


def contains_induced(d: Digraph, f: Digraph) -> tuple[int, ...] | None:
    """Vertex set of some induced copy of ``f`` in ``d``, or ``None``."""
    k, target = canonical_form(f)
    for s in combinations(range(d.n), k):
        idx = {v: i for i, v in enumerate(s)}
        arcs = [(idx[u], idx[v]) for u in s for v in iter_bits(d.out_adj(u)) if v in idx]
        if canonical_code(k, _code(k, arcs)) == target:
            return s
    return None


@dataclass
class OrientationSearch:
    orientation: Orientation | None
    nodes: int
    converse_fixed: bool


def orientation_search(
    g: Graph, family: Union[Digraph, Iterable[Digraph]], limits: Limits | None = None
) -> OrientationSearch:
    """Backtracking over edge directions with incremental induced-copy rejection.

    Every vertex subset that could host a member of the family is checked
    exactly once, when its last edge receives a direction. If the family
    is closed under reversing all arcs, the first edge's direction is fixed.
    """
    limits = limits or default_limits()
    fam = [family] if isinstance(family, Digraph) else list(family)
    if g.m > limits.orientation_edges:
        raise BudgetExceeded(f"orientation_without ({g.m} edges)", limits.orientation_edges)
    forbidden: dict[int, set[int]] = {}
    counts: dict[int, set[int]] = {}
    for f in fam:
        if not f.is_oriented():
            continue  # a member with a digon never occurs in an orientation
        k, c = canonical_form(f)
        forbidden.setdefault(k, set()).add(c)
        counts.setdefault(k, set()).add(len(f.arcs))
    converse = {k: {canonical_code(k, _code(k, [(j, i) for i, j in ((b // k, b % k) for b in iter_bits(c))]))
                    for c in cs} for k, cs in forbidden.items()}
    closed = all(converse[k] == forbidden[k] for k in forbidden)

    idx = _edge_index(g)
    m = g.m
    checks: list[list[tuple[int, list[tuple[int, int, int]]]]] = [[] for _ in range(m)]
    for k, cnts in counts.items():
        if k > g.n:
            continue
        for s in combinations(range(g.n), k):
            loc = {v: i for i, v in enumerate(s)}
            es = [(idx[(u, v)], loc[u], loc[v]) for u, v in combinations(s, 2) if g.has_edge(u, v)]
            if len(es) not in cnts:
                continue
            if not es:
                # edgeless member present in every orientation
                return OrientationSearch(None, 0, closed)
            last = max(e[0] for e in es)
            checks[last].append((k, es))

    fwd = [True] * m
    nodes = 0
    budget = limits.enumeration_budget

    def ok_at(i: int) -> bool:
        for k, es in checks[i]:
            c = 0
            for ei, a, b in es:
                c |= 1 << (a * k + b if fwd[ei] else b * k + a)
            if canonical_code(k, c) in forbidden[k]:
                return False
        return True

    def search(i: int) -> bool:
        nonlocal nodes
        if i == m:
            return True
        for val in ((True,) if (closed and i == 0) else (True, False)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("orientation_without", budget)
            fwd[i] = val
            if ok_at(i) and search(i + 1):
                return True
        return False

    if search(0):
        return OrientationSearch(Orientation.of(g, fwd), nodes, closed)
    return OrientationSearch(None, nodes, closed)


def orientation_without(
    g: Graph, family: Union[Digraph, Iterable[Digraph]], limits: Limits | None = None
) -> Orientation | None:
    """An orientation of ``g`` with no induced copy of any family member."""
    return orientation_search(g, family, limits).orientation


def antidirected_cycle(length: int) -> Orientation:
    """AC_length on vertices 0..length-1, even vertices sources."""
    if length < 4 or length % 2:
        raise PreconditionError("antidirected cycles have even length >= 4")
    arcs = []
    for i in range(length):
        j = (i + 1) % length
        arcs.append((i, j) if i % 2 == 0 else (j, i))
    return Orientation(length, arcs)


def antidirected_path(length: int) -> Orientation:
    """AP_length: path on ``length`` vertices whose first vertex is a source."""
    if length < 2:
        raise PreconditionError("antidirected paths have at least 2 vertices")
    return Orientation(length, [(i, i + 1) if i % 2 == 0 else (i + 1, i) for i in range(length - 1)])
