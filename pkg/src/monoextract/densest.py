"""Exact maximum-density subgraph via Goldberg's min-cut network.

Density here is ``|E(S)|/|S|``, half the average degree. Capacities are
scaled to integers so every comparison is exact; the flow itself comes
from ``scipy.sparse.csgraph.maximum_flow``.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .bits import bits_list, iter_bits, mask_of
from .errors import LimitExceeded, PreconditionError
from .graph import GraphLike, InducedView, adjacency_and_mask, induced_subgraph

_INT32 = (1 << 31) - 1


def _density(adj, mask: int) -> Fraction:
    e = sum((adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2
    return Fraction(e, mask.bit_count())


class _Network:
    """Goldberg network for ``G[mask]`` at a fixed rational guess ``a/b``.

    A minimum cut with source side ``{s} | S`` costs ``b*m*k + 2(a|S| - b|E(S)|)``
    where ``k`` is the vertex count, so ``S`` maximises ``b|E(S)| - a|S|``.
    """

    def __init__(self, adj, mask: int):
        self.verts = bits_list(mask)
        self.index = {v: i for i, v in enumerate(self.verts)}
        self.k = len(self.verts)
        self.deg = [(adj[v] & mask).bit_count() for v in self.verts]
        self.m = sum(self.deg) // 2
        self.pairs = [(self.index[u], self.index[w]) for u in self.verts for w in iter_bits(adj[u] & mask)]

    def min_cut(self, g: Fraction, forced: int | None = None, largest: bool = False) -> tuple[int, int]:
        """Return ``(value, S)`` for the smallest (or largest) source side as a base mask."""
        a, b = g.numerator, g.denominator
        k, s, t = self.k, self.k, self.k + 1
        big = b * self.m
        finite = b * len(self.pairs) + k * (2 * big + 2 * a)
        inf = finite + 1
        if inf > _INT32:
            raise LimitExceeded("densest subgraph capacities", inf, _INT32)
        rows, cols, caps = [], [], []
        for i, j in self.pairs:
            rows.append(i); cols.append(j); caps.append(b)
        for i in range(k):
            rows.append(s); cols.append(i); caps.append(inf if i == forced else big)
            rows.append(i); cols.append(t); caps.append(big + 2 * a - b * self.deg[i])
        cap = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(k + 2, k + 2))
        res = maximum_flow(cap, s, t)
        residual = cap.toarray().astype(np.int64) - res.flow.toarray()
        if largest:
            # everything that cannot reach the sink in the residual graph
            seen = _reach(residual.T, t)
            side = mask_of(self.verts[i] for i in range(k) if not seen[i])
        else:
            seen = _reach(residual, s)
            side = mask_of(self.verts[i] for i in range(k) if seen[i])
        return int(res.flow_value), side


def _reach(residual, start: int) -> list[bool]:
    seen = [False] * residual.shape[0]
    seen[start] = True
    q = deque([start])
    while q:
        u = q.popleft()
        for w in np.nonzero(residual[u] > 0)[0]:
            if not seen[w]:
                seen[w] = True
                q.append(w)
    return seen


def _components(adj, mask: int) -> list[int]:
    out = []
    while mask:
        comp = frontier = mask & -mask
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & mask & ~comp
            comp |= frontier
        out.append(comp)
        mask &= ~comp
    return out


def densest_mask(g: GraphLike) -> int:
    """Vertex mask of a maximum-density induced subgraph.

    Among all densest sets the smallest wins, then the lexicographically
    first sorted vertex tuple.
    """
    adj, mask = adjacency_and_mask(g)
    if not any(adj[v] & mask for v in iter_bits(mask)):
        raise PreconditionError("densest subgraph needs at least one edge")
    net = _Network(adj, mask)
    best = _density(adj, mask)
    # Dinkelbach: jump to the density of each improving set until none improves
    while True:
        _, side = net.min_cut(best)
        if not side:
            break
        dens = _density(adj, side)
        if dens <= best:
            break
        best = dens
    # Minimal densest sets are connected and lie inside one component of the
    # union of all densest sets. A connected regular component has no denser
    # proper subset, so it is itself minimal; otherwise force each vertex in.
    _, union = net.min_cut(best, largest=True)
    chosen = None

    def offer(side: int) -> None:
        nonlocal chosen
        key = (side.bit_count(), bits_list(side))
        if chosen is None or key < chosen[0]:
            chosen = (key, side)

    for comp in _components(adj, union):
        if len({(adj[v] & comp).bit_count() for v in iter_bits(comp)}) == 1:
            offer(comp)
            continue
        for v in iter_bits(comp):
            _, side = net.min_cut(best, forced=net.index[v])
            if _density(adj, side) == best:
                offer(side)
    assert chosen is not None
    return chosen[1]


def densest_prefix(g: GraphLike) -> InducedView:
    """Induced subgraph of maximum average degree, in base coordinates."""
    return induced_subgraph(g, densest_mask(g))


def max_avg_degree(g: GraphLike) -> Fraction:
    """Largest average degree of a nonempty induced subgraph (0 when edgeless)."""
    adj, mask = adjacency_and_mask(g)
    if not any(adj[v] & mask for v in iter_bits(mask)):
        return Fraction(0)
    return 2 * _density(adj, densest_mask(g))
