"""Exact graph parameters at desk scale.

All routines are exact; each refuses instances above its configured
limit rather than returning an approximation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .bits import bits_list, iter_bits, lowest
from .config import Limits, default_limits
from .errors import LimitExceeded, PreconditionError
from .graph import GraphLike, adjacency_and_mask


def min_degree(g: GraphLike) -> int:
    adj, mask = adjacency_and_mask(g)
    if not mask:
        raise PreconditionError("minimum degree of the empty graph is undefined")
    return min((adj[v] & mask).bit_count() for v in iter_bits(mask))


def avg_degree(g: GraphLike) -> Fraction:
    """Exact ``2|E|/|V|``."""
    adj, mask = adjacency_and_mask(g)
    n = mask.bit_count()
    if not n:
        raise PreconditionError("average degree of the empty graph is undefined")
    return Fraction(sum((adj[v] & mask).bit_count() for v in iter_bits(mask)), n)


def edge_count(g: GraphLike) -> int:
    adj, mask = adjacency_and_mask(g)
    return sum((adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


@dataclass(frozen=True)
class DegeneracyCertificate:
    value: int
    elimination_order: tuple[int, ...]

    def replay(self, g: GraphLike) -> int:
        """Largest number of later neighbours along the order."""
        adj, _ = adjacency_and_mask(g)
        later = 0
        for v in self.elimination_order:
            later |= 1 << v
        worst = 0
        for v in self.elimination_order:
            later &= ~(1 << v)
            worst = max(worst, (adj[v] & later).bit_count())
        return worst


def degeneracy(g: GraphLike) -> DegeneracyCertificate:
    """Min-degree peeling; ties go to the lowest vertex index."""
    adj, mask = adjacency_and_mask(g)
    deg = {v: (adj[v] & mask).bit_count() for v in iter_bits(mask)}
    order = []
    value = 0
    alive = mask
    while alive:
        v = min(deg, key=lambda x: (deg[x], x))
        value = max(value, deg[v])
        order.append(v)
        del deg[v]
        alive &= ~(1 << v)
        for w in iter_bits(adj[v] & alive):
            deg[w] -= 1
    return DegeneracyCertificate(value, tuple(order))


def core_mask(adj: Sequence[int], mask: int, k: int) -> int:
    """Vertex set of the k-core of ``G[mask]``."""
    changed = True
    while changed:
        changed = False
        for v in iter_bits(mask):
            if (adj[v] & mask).bit_count() < k:
                mask &= ~(1 << v)
                changed = True
    return mask


# -- cliques -----------------------------------------------------------

def _colour_sort(adj: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    order, bounds = [], []
    uncol = p
    colour = 0
    while uncol:
        colour += 1
        q = uncol
        while q:
            v = lowest(q)
            q &= ~adj[v] & ~(1 << v)
            uncol &= ~(1 << v)
            order.append(v)
            bounds.append(colour)
    return order, bounds


def _max_clique(adj: Sequence[int], mask: int, target: int | None = None) -> list[int]:
    best: list[int] = []

    def expand(cur: list[int], p: int) -> bool:
        nonlocal best
        order, bounds = _colour_sort(adj, p)
        for i in range(len(order) - 1, -1, -1):
            if len(cur) + bounds[i] <= len(best):
                return False
            v = order[i]
            np_ = p & adj[v]
            cur.append(v)
            if np_:
                if expand(cur, np_):
                    return True
            elif len(cur) > len(best):
                best = sorted(cur)
                if target is not None and len(best) >= target:
                    return True
            cur.pop()
            p &= ~(1 << v)
        return False

    if mask:
        expand([], mask)
    return best


def max_clique(g: GraphLike, limits: Limits | None = None) -> tuple[int, ...]:
    """A maximum clique, found by colour-bounded branch and bound."""
    limits = limits or default_limits()
    adj, mask = adjacency_and_mask(g)
    if mask.bit_count() > limits.clique_n:
        raise LimitExceeded("clique_number", mask.bit_count(), limits.clique_n)
    return tuple(_max_clique(adj, mask))


def find_clique(g: GraphLike, size: int, limits: Limits | None = None) -> tuple[int, ...] | None:
    """Some clique of exactly ``size`` vertices, or ``None``."""
    limits = limits or default_limits()
    adj, mask = adjacency_and_mask(g)
    if mask.bit_count() > limits.clique_n:
        raise LimitExceeded("clique search", mask.bit_count(), limits.clique_n)
    if size <= 0:
        return ()
    c = _max_clique(adj, core_mask(adj, mask, size - 1), target=size)
    if len(c) < size:
        return None
    return tuple(sorted(c)[:size])


def clique_number(g: GraphLike, limits: Limits | None = None) -> int:
    return len(max_clique(g, limits))


def maximal_cliques(g: GraphLike) -> Iterator[tuple[int, ...]]:
    """Bron-Kerbosch with pivoting, in a deterministic order."""
    adj, mask = adjacency_and_mask(g)

    def bk(r: list[int], p: int, x: int):
        if not p and not x:
            yield tuple(sorted(r))
            return
        px = p | x
        pivot = max(iter_bits(px), key=lambda u: ((adj[u] & p).bit_count(), -u))
        for v in bits_list(p & ~adj[pivot]):
            yield from bk(r + [v], p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if mask:
        yield from bk([], mask, 0)


# -- bicliques ---------------------------------------------------------

def find_biclique(g: GraphLike, s: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A (not necessarily induced) ``K_{s,s}`` as two vertex tuples, or ``None``."""
    adj, mask = adjacency_and_mask(g)
    if s <= 0:
        return ((), ())
    mask = core_mask(adj, mask, s)
    cands = bits_list(mask)

    def grow(chosen: list[int], common: int, start: int):
        if len(chosen) == s:
            return chosen
        need = s - len(chosen)
        for i in range(start, len(cands) - need + 1):
            v = cands[i]
            c2 = common & adj[v]
            if c2.bit_count() < s:
                continue
            got = grow(chosen + [v], c2, i + 1)
            if got:
                return got
        return None

    found = grow([], mask, 0)
    if found is None:
        return None
    common = mask
    for v in found:
        common &= adj[v]
    return tuple(found), tuple(bits_list(common)[:s])


def biclique_number(g: GraphLike, limits: Limits | None = None) -> int:
    """Largest ``s`` with a ``K_{s,s}`` subgraph."""
    limits = limits or default_limits()
    adj, mask = adjacency_and_mask(g)
    if mask.bit_count() > limits.biclique_n:
        raise LimitExceeded("biclique_number", mask.bit_count(), limits.biclique_n)
    upper = degeneracy(g).value  # tau <= degeneracy
    s = 0
    while s < upper and find_biclique(g, s + 1) is not None:
        s += 1
    return s


# -- colouring ---------------------------------------------------------

def _k_colourable(adj: Sequence[int], verts: list[int], k: int) -> list[int] | None:
    n = len(verts)
    index = {v: i for i, v in enumerate(verts)}
    nbrs = [[index[w] for w in iter_bits(adj[v]) if w in index] for v in verts]
    colour = [-1] * n
    # sat[i] = bitset of colours used by coloured neighbours
    sat = [0] * n

    def pick() -> int:
        best, key = -1, None
        for i in range(n):
            if colour[i] < 0:
                kk = (sat[i].bit_count(), len(nbrs[i]), -i)
                if key is None or kk > key:
                    best, key = i, kk
        return best

    def solve(done: int, used: int) -> bool:
        if done == n:
            return True
        i = pick()
        for c in range(min(k, used + 1)):
            if (sat[i] >> c) & 1:
                continue
            colour[i] = c
            touched = []
            for j in nbrs[i]:
                if colour[j] < 0 and not (sat[j] >> c) & 1:
                    sat[j] |= 1 << c
                    touched.append(j)
            if all(sat[j].bit_count() < k or colour[j] >= 0 for j in touched):
                if solve(done + 1, max(used, c + 1)):
                    return True
            for j in touched:
                sat[j] &= ~(1 << c)
            colour[i] = -1
        return False

    if solve(0, 0):
        return colour
    return None


def chromatic_number(g: GraphLike, limits: Limits | None = None) -> int:
    """Exact chromatic number: increase k from the clique bound until colourable."""
    limits = limits or default_limits()
    adj, mask = adjacency_and_mask(g)
    n = mask.bit_count()
    if n > limits.chromatic_n:
        raise LimitExceeded("chromatic_number", n, limits.chromatic_n)
    if n == 0:
        return 0
    verts = bits_list(mask)
    k = max(1, len(_max_clique(adj, mask)))
    while _k_colourable([a & mask for a in adj], verts, k) is None:
        k += 1
    return k


# -- Kovari-Sos-Turan --------------------------------------------------

_PREC = 64


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def _root_bounds(x: int, k: int) -> tuple[Fraction, Fraction]:
    scaled = x << (_PREC * k)
    r = _iroot(scaled, k)
    lo = Fraction(r, 1 << _PREC)
    hi = lo if r ** k == scaled else Fraction(r + 1, 1 << _PREC)
    return lo, hi


def kst_edge_bound(s: int, n: int) -> Fraction:
    """Certified rational upper bound on ``(1/2)((s-1)^(1/s)(n-s+1)n^(1-1/s) + (s-1)n)``.

    Irrational roots are bracketed with 64 fractional bits and the bracket
    end that makes the result larger is used.
    """
    if s < 1 or n < 1:
        raise PreconditionError("kst_edge_bound needs s >= 1 and n >= 1")
    c_lo, c_hi = _root_bounds(s - 1, s)
    r_lo, r_hi = _root_bounds(n, s)
    pw_hi = Fraction(n) / r_lo
    pw_lo = Fraction(n) / r_hi
    lin = n - s + 1
    if lin >= 0:
        first = c_hi * lin * pw_hi
    else:
        first = c_lo * lin * pw_lo
    return (first + (s - 1) * n) / 2
