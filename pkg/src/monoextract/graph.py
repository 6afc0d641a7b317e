"""Immutable graph, digraph and edge-colouring model.

Vertices are the integers ``0..n-1`` and vertex sets are int bitsets, so
neighbourhood intersections are single ``&`` operations. Induced
subgraphs are :class:`InducedView` objects that keep the base graph's
vertex indices; witnesses produced anywhere in the package are therefore
always reported in the coordinates of the original input.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence, Union

from .bits import bits_list, iter_bits, mask_of
from .errors import PreconditionError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph with per-vertex neighbour bitsets.

    ``bipartition`` is an optional certified pair of vertex masks. It is
    checked at construction and never recomputed behind the caller's back.
    """

    __slots__ = ("_n", "_adj", "_edges", "_bip")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        bipartition: tuple[Iterable[int], Iterable[int]] | None = None,
    ):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        adj = [0] * n
        es = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            e2 = _norm(u, v)
            if e2 in es:
                raise PreconditionError(f"parallel edge {e2}")
            es.add(e2)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._n = n
        self._adj = tuple(adj)
        self._edges = tuple(sorted(es))
        self._bip = None
        if bipartition is not None:
            self._bip = self._certify(*bipartition)

    @classmethod
    def _from_adj(cls, adj: Sequence[int], bip=None) -> "Graph":
        g = cls.__new__(cls)
        g._n = len(adj)
        g._adj = tuple(adj)
        g._edges = tuple(
            (u, v) for u in range(len(adj)) for v in iter_bits(adj[u] >> (u + 1) << (u + 1))
        )
        g._bip = bip
        return g

    def _certify(self, a: Iterable[int], b: Iterable[int]) -> tuple[int, int]:
        ma = a if isinstance(a, int) else mask_of(a)
        mb = b if isinstance(b, int) else mask_of(b)
        if ma & mb:
            raise PreconditionError("bipartition parts overlap")
        if (ma | mb) != (1 << self._n) - 1:
            raise PreconditionError("bipartition does not cover every vertex")
        for v in iter_bits(ma):
            if self._adj[v] & ma:
                raise PreconditionError(f"part A is not independent (vertex {v})")
        for v in iter_bits(mb):
            if self._adj[v] & mb:
                raise PreconditionError(f"part B is not independent (vertex {v})")
        return (ma, mb)

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def adjacency(self) -> tuple[int, ...]:
        return self._adj

    @property
    def vertex_mask(self) -> int:
        return (1 << self._n) - 1

    @property
    def bipartition(self) -> tuple[int, int] | None:
        return self._bip

    def adj(self, v: int) -> int:
        return self._adj[v]

    def neighbours(self, v: int) -> list[int]:
        return bits_list(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self._adj]

    def vertices(self) -> tuple[int, ...]:
        return tuple(range(self._n))

    def with_bipartition(self, a: Iterable[int], b: Iterable[int]) -> "Graph":
        return Graph._from_adj(self._adj, self._certify(a, b))

    def find_bipartition(self) -> tuple[int, int] | None:
        """2-colour the graph by BFS; lowest vertex of each component goes to A."""
        side = [-1] * self._n
        for s in range(self._n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in iter_bits(self._adj[u]):
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return None
        a = mask_of(v for v in range(self._n) if side[v] == 0)
        return (a, self.vertex_mask & ~a)

    def certified(self) -> "Graph":
        """Return this graph with a bipartition attached, found by an explicit check."""
        if self._bip is not None:
            return self
        bip = self.find_bipartition()
        if bip is None:
            raise PreconditionError("graph is not bipartite")
        return Graph._from_adj(self._adj, bip)

    def subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Compact copy of ``G[vertices]`` plus the label map new -> old."""
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        adj = []
        for v in labels:
            a = 0
            for w in iter_bits(self._adj[v]):
                j = index.get(w)
                if j is not None:
                    a |= 1 << j
            adj.append(a)
        bip = None
        if self._bip is not None:
            ma = mask_of(index[v] for v in labels if (self._bip[0] >> v) & 1)
            bip = (ma, ((1 << len(labels)) - 1) & ~ma)
        return Graph._from_adj(adj, bip), labels

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


class Digraph:
    """Loopless digraph; digons (opposite arc pairs) are allowed."""

    __slots__ = ("_n", "_arcs", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = ()):
        out = [0] * n
        inn = [0] * n
        seen = set()
        for a in arcs:
            u, v = int(a[0]), int(a[1])
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"arc ({u},{v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            if (u, v) in seen:
                raise PreconditionError(f"parallel arc ({u},{v})")
            seen.add((u, v))
            out[u] |= 1 << v
            inn[v] |= 1 << u
        self._n = n
        self._arcs = tuple(sorted(seen))
        self._out = tuple(out)
        self._in = tuple(inn)
        self._validate()

    def _validate(self) -> None:
        pass

    @property
    def n(self) -> int:
        return self._n

    @property
    def arcs(self) -> tuple[Edge, ...]:
        return self._arcs

    @property
    def vertex_mask(self) -> int:
        return (1 << self._n) - 1

    def out_adj(self, v: int) -> int:
        return self._out[v]

    def in_adj(self, v: int) -> int:
        return self._in[v]

    def adj(self, v: int) -> int:
        return self._out[v] | self._in[v]

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self._out[u] >> v) & 1)

    def is_digon(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) and self.has_arc(v, u)

    def digons(self) -> list[Edge]:
        return [(u, v) for (u, v) in self._arcs if u < v and self.has_arc(v, u)]

    def simple_arcs(self) -> list[Edge]:
        return [(u, v) for (u, v) in self._arcs if not self.has_arc(v, u)]

    def is_oriented(self) -> bool:
        return all(not (self._out[v] & self._in[v]) for v in range(self._n))

    def is_symmetric(self) -> bool:
        return all(self._out[v] == self._in[v] for v in range(self._n))

    def subdigraph(self, vertices: Iterable[int]) -> tuple["Digraph", tuple[int, ...]]:
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        arcs = [(index[u], index[v]) for (u, v) in self._arcs if u in index and v in index]
        return type(self)(len(labels), arcs), labels

    def converse(self) -> "Digraph":
        return type(self)(self._n, [(v, u) for (u, v) in self._arcs])

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self._n == other._n and self._arcs == other._arcs

    def __hash__(self) -> int:
        return hash(("d", self._n, self._arcs))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self._n}, arcs={len(self._arcs)})"


class Orientation(Digraph):
    """Digon-free digraph."""

    __slots__ = ()

    def _validate(self) -> None:
        for v in range(self._n):
            both = self._out[v] & self._in[v]
            if both:
                w = (both & -both).bit_length() - 1
                raise PreconditionError(f"digon between {v} and {w} in an orientation")

    @classmethod
    def of(cls, g: Graph, forward: Iterable[bool]) -> "Orientation":
        """Orient edge ``(u, v)``, ``u < v``, as ``u -> v`` where ``forward`` is true."""
        fw = list(forward)
        if len(fw) != g.m:
            raise PreconditionError("need one direction per edge")
        return cls(g.n, [(u, v) if f else (v, u) for (u, v), f in zip(g.edges, fw)])


class EdgeColouring:
    """Total map from the edges of ``base`` to colours ``1..k``."""

    __slots__ = ("_base", "_k", "_colour", "_cadj")

    def __init__(self, base: Graph, k: int, colour: Union[Mapping[Edge, int], Sequence[int]]):
        if k < 1:
            raise PreconditionError("colour count must be at least 1")
        if isinstance(colour, Mapping):
            cmap = {}
            for e, c in colour.items():
                cmap[_norm(*e)] = int(c)
            if set(cmap) != set(base.edges):
                missing = set(base.edges) - set(cmap)
                extra = set(cmap) - set(base.edges)
                raise PreconditionError(f"colouring not total on edges (missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})")
            seq = tuple(cmap[e] for e in base.edges)
        else:
            seq = tuple(int(c) for c in colour)
            if len(seq) != base.m:
                raise PreconditionError("need one colour per edge")
        for c in seq:
            if not 1 <= c <= k:
                raise PreconditionError(f"colour {c} outside 1..{k}")
        cadj = [[0] * base.n for _ in range(k + 1)]
        for (u, v), c in zip(base.edges, seq):
            cadj[c][u] |= 1 << v
            cadj[c][v] |= 1 << u
        self._base = base
        self._k = k
        self._colour = seq
        self._cadj = tuple(tuple(row) for row in cadj)

    @property
    def base(self) -> Graph:
        return self._base

    @property
    def k(self) -> int:
        return self._k

    @property
    def colours(self) -> tuple[int, ...]:
        """Colours in the base graph's (lexicographic) edge order."""
        return self._colour

    def colour(self, u: int, v: int) -> int:
        e = _norm(u, v)
        lo, hi = 0, len(self._base.edges)
        edges = self._base.edges
        while lo < hi:
            mid = (lo + hi) // 2
            if edges[mid] < e:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(edges) or edges[lo] != e:
            raise KeyError(e)
        return self._colour[lo]

    def as_dict(self) -> dict[Edge, int]:
        return dict(zip(self._base.edges, self._colour))

    def cadj(self, c: int, v: int) -> int:
        """Colour-``c`` neighbourhood of ``v`` as a bitset."""
        return self._cadj[c][v]

    def colour_class(self, c: int) -> list[Edge]:
        return [e for e, x in zip(self._base.edges, self._colour) if x == c]

    def restrict(self, labels: Sequence[int], sub: Graph) -> "EdgeColouring":
        """Colouring of ``sub``, a compact copy whose vertex i is ``labels[i]``."""
        return EdgeColouring(sub, self._k, [self.colour(labels[u], labels[v]) for (u, v) in sub.edges])

    def merged(self, c1: int, c2: int) -> "EdgeColouring":
        """Identify colours ``c1`` and ``c2`` into the last colour of a (k-1)-colouring."""
        if c1 == c2 or not (1 <= c1 <= self._k and 1 <= c2 <= self._k):
            raise PreconditionError("merge needs two distinct valid colours")
        keep = [c for c in range(1, self._k + 1) if c not in (c1, c2)]
        remap = {c: i + 1 for i, c in enumerate(keep)}
        remap[c1] = remap[c2] = self._k - 1
        return EdgeColouring(self._base, self._k - 1, [remap[c] for c in self._colour])

    def is_monochromatic_on(self, mask: int) -> int | None:
        """Colour shared by every edge of ``G[mask]`` (0 if edgeless), else ``None``."""
        adj = self._base.adjacency
        found = 0
        for v in iter_bits(mask):
            a = adj[v] & mask
            if not a:
                continue
            if found:
                if self._cadj[found][v] & mask != a:
                    return None
                continue
            for c in range(1, self._k + 1):
                if self._cadj[c][v] & mask == a:
                    found = c
                    break
            else:
                return None
        return found

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeColouring)
            and self._k == other._k
            and self._base == other._base
            and self._colour == other._colour
        )

    def __hash__(self) -> int:
        return hash((self._base, self._k, self._colour))

    def __repr__(self) -> str:
        return f"EdgeColouring(n={self._base.n}, m={self._base.m}, k={self._k})"


class InducedView:
    """Induced subgraph / subdigraph that keeps base vertex indices."""

    __slots__ = ("base", "mask")

    def __init__(self, base: Union[Graph, Digraph], mask: int):
        self.base = base
        self.mask = mask

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    @property
    def n(self) -> int:
        return self.mask.bit_count()

    @property
    def vertex_mask(self) -> int:
        return self.mask

    def adj(self, v: int) -> int:
        return self.base.adj(v) & self.mask

    def degree(self, v: int) -> int:
        return (self.base.adj(v) & self.mask).bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.mask >> u) & (self.mask >> v) & 1) and bool((self.base.adj(u) >> v) & 1)

    @property
    def edges(self) -> list[Edge]:
        if isinstance(self.base, Graph):
            return [(u, v) for (u, v) in self.base.edges if (self.mask >> u) & (self.mask >> v) & 1]
        es = set()
        for (u, v) in self.base.arcs:
            if (self.mask >> u) & (self.mask >> v) & 1:
                es.add(_norm(u, v))
        return sorted(es)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def arcs(self) -> list[Edge]:
        if not isinstance(self.base, Digraph):
            raise TypeError("arcs are only defined on digraph views")
        return [(u, v) for (u, v) in self.base.arcs if (self.mask >> u) & (self.mask >> v) & 1]

    @property
    def bipartition(self) -> tuple[int, int] | None:
        bip = getattr(self.base, "bipartition", None)
        if bip is None:
            return None
        return (bip[0] & self.mask, bip[1] & self.mask)

    def view(self, vertices: Iterable[int] | int) -> "InducedView":
        return induced_subgraph(self, vertices)

    def compact(self):
        """``(compact graph or digraph, labels)`` with labels mapping new -> base."""
        if isinstance(self.base, Graph):
            return self.base.subgraph(self.vertices)
        return self.base.subdigraph(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, InducedView) and self.base == other.base and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.base, self.mask))

    def __repr__(self) -> str:
        return f"InducedView(n={self.n}, vertices={list(self.vertices)})"


GraphLike = Union[Graph, InducedView]


def induced_subgraph(base: Union[Graph, Digraph, InducedView], vertices: Iterable[int] | int) -> InducedView:
    """View of ``base`` restricted to ``vertices`` (views compose by intersection)."""
    mask = vertices if isinstance(vertices, int) else mask_of(vertices)
    if isinstance(base, InducedView):
        if mask & ~base.mask:
            bad = (mask & ~base.mask & -(mask & ~base.mask)).bit_length() - 1
            raise PreconditionError(f"vertex {bad} is not in the view")
        return InducedView(base.base, mask)
    if mask >> base.n:
        raise PreconditionError(f"vertex index out of range for n={base.n}")
    return InducedView(base, mask)


def adjacency_and_mask(g: Union[Graph, InducedView]) -> tuple[Sequence[int], int]:
    """Uniform access for routines that accept a graph or a view of one."""
    if isinstance(g, InducedView):
        if not isinstance(g.base, Graph):
            return [g.base.adj(v) for v in range(g.base.n)], g.mask
        return g.base.adjacency, g.mask
    if isinstance(g, Digraph):
        return [g.adj(v) for v in range(g.n)], g.vertex_mask
    return g.adjacency, g.vertex_mask


def underlying_graph(d: Digraph) -> Graph:
    """Edge ``uv`` wherever at least one arc joins ``u`` and ``v``."""
    return Graph._from_adj([d.out_adj(v) | d.in_adj(v) for v in range(d.n)])


def orientation_to_colouring(d: Orientation, parts: tuple[Iterable[int], Iterable[int]]) -> EdgeColouring:
    """Colour 1 on arcs leaving part A, colour 2 on arcs entering it."""
    if not d.is_oriented():
        raise PreconditionError("orientation_to_colouring needs an oriented graph")
    g = underlying_graph(d)
    a, b = parts
    try:
        g = g.with_bipartition(a, b)
    except PreconditionError as exc:
        raise PreconditionError(f"bipartition not valid for the underlying graph: {exc}") from None
    ma = g.bipartition[0]
    cols = []
    for (u, v) in g.edges:
        src_a = (ma >> u) & 1
        tail = u if d.has_arc(u, v) else v
        cols.append(1 if tail == (u if src_a else v) else 2)
    return EdgeColouring(g, 2, cols)


def digon_colouring(d: Digraph) -> EdgeColouring:
    """Colour 1 on digon pairs, colour 2 on simple arcs."""
    g = underlying_graph(d)
    return EdgeColouring(g, 2, [1 if d.is_digon(u, v) else 2 for (u, v) in g.edges])
