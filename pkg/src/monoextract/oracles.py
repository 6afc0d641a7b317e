"""Exhaustive ground truth for the extractors.

Both oracles search vertex subsets by branch and bound with core-based
pruning and return a maximum witness, or ``None`` when none exists.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .bits import bits_list, iter_bits
from .config import Limits, default_limits
from .errors import LimitExceeded, PreconditionError
from .graph import EdgeColouring, Orientation, adjacency_and_mask
from .measures import core_mask


@dataclass
class DenseWitness:
    vertices: tuple[int, ...]
    colour: int | None = None


@dataclass
class OracleStats:
    nodes: int = 0
    elapsed_ms: float = 0.0
    exhaustive: bool = True
    extra: dict = field(default_factory=dict)


def _max_mono_in_colour(adj, cadj, mask: int, d: int, order: list[int], stats: OracleStats) -> int:
    """Largest S within ``mask`` with no foreign edge and colour-degree >= d."""
    foreign = [adj[v] & ~cadj[v] for v in range(len(adj))]
    best = 0

    def rec(s: int, p: int) -> None:
        nonlocal best
        stats.nodes += 1
        x = core_mask(cadj, s | p, d)
        if s & ~x:
            return
        p = x & ~s
        if x.bit_count() <= best.bit_count():
            return
        if not any(foreign[v] & x for v in iter_bits(x)):
            best = x  # the whole remaining set already works
            return
        v = next(u for u in order if (p >> u) & 1)
        rec(s | 1 << v, p & ~(1 << v) & ~foreign[v])
        rec(s, p & ~(1 << v))

    start = core_mask(cadj, mask, d)
    if start:
        rec(0, start)
    return best


def mono_dense_oracle(
    g, col: EdgeColouring, d: int, limits: Limits | None = None, stats: OracleStats | None = None
) -> DenseWitness | None:
    """Maximum monochromatic induced subgraph with minimum degree >= d.

    Ties in size go to the smaller colour. Candidates are branched on in
    order of decreasing degree sum, after d-core filtering per colour.
    """
    limits = limits or default_limits()
    stats = stats if stats is not None else OracleStats()
    t0 = time.perf_counter()
    adj, mask = adjacency_and_mask(g)
    if mask.bit_count() > limits.oracle_n:
        raise LimitExceeded("mono_dense_oracle", mask.bit_count(), limits.oracle_n)
    if d < 0:
        raise PreconditionError("d must be non-negative")
    n = col.base.n
    best: DenseWitness | None = None
    for c in range(1, col.k + 1):
        cadj = [col.cadj(c, v) for v in range(n)]
        order = sorted(bits_list(mask), key=lambda v: (-(adj[v] & mask).bit_count() - (cadj[v] & mask).bit_count(), v))
        got = _max_mono_in_colour(adj, cadj, mask, d, order, stats)
        if got and (best is None or got.bit_count() > len(best.vertices)):
            best = DenseWitness(tuple(iter_bits(got)), c)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000
    return best


def antidirected_dense_oracle(
    dg: Orientation, d: int, limits: Limits | None = None, stats: OracleStats | None = None
) -> DenseWitness | None:
    """Maximum S with ``D[S]`` antidirected and underlying minimum degree >= d.

    Each chosen vertex is a source or a sink of ``D[S]``, so the search
    assigns roles: sources may only send arcs to sinks.
    """
    limits = limits or default_limits()
    stats = stats if stats is not None else OracleStats()
    t0 = time.perf_counter()
    if dg.n > limits.oracle_n:
        raise LimitExceeded("antidirected_dense_oracle", dg.n, limits.oracle_n)
    if not dg.is_oriented():
        raise PreconditionError("antidirected_dense_oracle needs an orientation")
    if d < 0:
        raise PreconditionError("d must be non-negative")
    adj = [dg.adj(v) for v in range(dg.n)]
    out = [dg.out_adj(v) for v in range(dg.n)]
    inn = [dg.in_adj(v) for v in range(dg.n)]
    order = sorted(range(dg.n), key=lambda v: (-adj[v].bit_count(), v))
    best = 0

    def union(ms: list[int], x: int) -> int:
        r = 0
        for v in iter_bits(x):
            r |= ms[v]
        return r

    def antidirected(x: int) -> bool:
        return all(not (out[v] & x and inn[v] & x) for v in iter_bits(x))

    def rec(src: int, snk: int, und: int) -> None:
        nonlocal best
        stats.nodes += 1
        can_src = und & ~union(adj, src) & ~union(inn, snk)
        can_snk = und & ~union(adj, snk) & ~union(out, src)
        possible = src | snk | can_src | can_snk
        x = core_mask(adj, possible, d)
        if (src | snk) & ~x or x.bit_count() <= best.bit_count():
            return
        if antidirected(x):
            best = x
            return
        und = x & ~(src | snk)
        v = next((u for u in order if (und >> u) & 1), None)
        if v is None:
            return
        bit = 1 << v
        if (can_src >> v) & 1:
            rec(src | bit, snk, und & ~bit)
        if (can_snk >> v) & 1:
            rec(src, snk | bit, und & ~bit)
        rec(src, snk, und & ~bit)

    rec(0, 0, dg.vertex_mask)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000
    return DenseWitness(tuple(iter_bits(best))) if best else None
