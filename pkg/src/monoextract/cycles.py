"""Induced-cycle enumeration shared by the class recognisers.

Each induced cycle is reported once, as a vertex list starting at its
smallest vertex and continuing towards the smaller of that vertex's two
cycle neighbours.
"""
from __future__ import annotations

from typing import Iterator, Sequence

from .bits import iter_bits


def induced_cycles(adj: Sequence[int], mask: int, min_len: int = 3) -> Iterator[list[int]]:
    """All chordless cycles of ``G[mask]`` with at least ``min_len`` vertices."""
    for s in iter_bits(mask):
        higher = mask & ~((2 << s) - 1)
        ns = adj[s] & higher
        for v1 in iter_bits(ns):
            yield from _extend(adj, higher, s, [s, v1], 1 << s | 1 << v1, 0, min_len)


def _extend(adj, higher, s, path, on_path, blocked, min_len):
    u = path[-1]
    # blocked holds the neighbours of every path vertex strictly between s and u
    for w in iter_bits(adj[u] & higher & ~on_path & ~blocked):
        if (adj[s] >> w) & 1:
            if len(path) >= 2 and path[1] < w and len(path) + 1 >= min_len:
                yield path + [w]
            continue
        yield from _extend(adj, higher, s, path + [w], on_path | 1 << w, blocked | adj[u], min_len)


def is_induced_cycle(adj: Sequence[int], cycle: Sequence[int]) -> bool:
    """True when ``cycle`` is a cycle whose vertex set induces exactly its edges."""
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    mask = 0
    for v in cycle:
        mask |= 1 << v
    for i, v in enumerate(cycle):
        want = 1 << cycle[i - 1] | 1 << cycle[(i + 1) % k]
        if adj[v] & mask != want:
            return False
    return True
