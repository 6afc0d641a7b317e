"""Constructive Ramsey-type subroutines and exhaustive small-case oracles."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Iterable

from .bits import bits_list, iter_bits, lowest, mask_of
from .config import Limits, default_limits
from .errors import BudgetExceeded, PreconditionError, VerificationError
from .graph import Digraph, EdgeColouring, Graph
from .measures import _max_clique, find_biclique


def ramsey_upper(a: int, b: int) -> int:
    """Erdos-Szekeres bound ``binom(a+b-2, a-1)`` on R(a, b)."""
    if a < 1 or b < 1:
        raise PreconditionError("ramsey_upper needs a, b >= 1")
    return comb(a + b - 2, a - 1)


@dataclass(frozen=True)
class RamseyWitness:
    colour: int
    vertices: tuple[int, ...]


def verify_mono_clique(col: EdgeColouring, colour: int, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    g = col.base
    for u, v in combinations(vs, 2):
        if not g.has_edge(u, v) or col.colour(u, v) != colour:
            return False
    return True


def _es(col: EdgeColouring, x: int, a: int, b: int, strict: bool):
    """Erdos-Szekeres recursion on the clique ``x``: colour-1 K_a or colour-2 K_b."""
    if not x:
        return None
    if a == 1:
        return 1, [lowest(x)]
    if b == 1:
        return 2, [lowest(x)]
    v = lowest(x)
    rest = x & ~(1 << v)
    n1 = col.cadj(1, v) & rest
    n2 = col.cadj(2, v) & rest
    g1 = n1.bit_count() >= ramsey_upper(a - 1, b)
    g2 = n2.bit_count() >= ramsey_upper(a, b - 1)
    if strict:
        branches = [1] if g1 else [2] if g2 else []
    else:
        branches = [c for c, ok in ((1, g1), (2, g2)) if ok]
        branches += [c for c, ok in ((1, g1), (2, g2)) if not ok]
    for c in branches:
        if c == 1:
            got = _es(col, n1, a - 1, b, strict)
            if got is not None:
                return (1, got[1] + [v]) if got[0] == 1 else got
        else:
            got = _es(col, n2, a, b - 1, strict)
            if got is not None:
                return (2, got[1] + [v]) if got[0] == 2 else got
    return None


def ramsey_mono_clique(
    col: EdgeColouring,
    a: int,
    b: int,
    vertices: Iterable[int] | None = None,
    strict: bool = True,
) -> RamseyWitness | None:
    """Colour-1 clique of size ``a`` or colour-2 clique of size ``b``.

    ``vertices`` (default: all) must span a clique of the base graph. With
    ``strict`` the clique must reach ``binom(a+b-2, a-1)`` vertices and the
    recursion follows the guaranteed branch only, so it cannot fail. Without
    it, the recursion backtracks into the other branch when the guarantee
    is missing and may return ``None``.

    Ties between the two colour branches go to colour 1; the pivot is
    always the lowest remaining vertex.
    """
    if col.k != 2:
        raise PreconditionError("ramsey_mono_clique needs a 2-colouring")
    if a < 1 or b < 1:
        raise PreconditionError("a and b must be positive")
    g = col.base
    x = g.vertex_mask if vertices is None else mask_of(vertices)
    for v in iter_bits(x):
        if (g.adj(v) | (1 << v)) & x != x:
            raise PreconditionError("vertex set is not a clique of the base graph")
    if strict and x.bit_count() < ramsey_upper(a, b):
        raise PreconditionError(
            f"clique has {x.bit_count()} vertices, fewer than binom(a+b-2,a-1) = {ramsey_upper(a, b)}"
        )
    got = _es(col, x, a, b, strict)
    if got is None:
        if strict:
            raise VerificationError("Erdos-Szekeres recursion failed above the binomial bound")
        return None
    colour, vs = got
    w = RamseyWitness(colour, tuple(sorted(vs)))
    want = a if colour == 1 else b
    if len(w.vertices) != want or not verify_mono_clique(col, colour, w.vertices):
        raise VerificationError(f"ramsey_mono_clique produced an invalid witness {w}")
    return w


@dataclass
class OracleAnswer:
    query: dict
    answer: bool
    certificate: Any = None
    colourings_checked: int = 0
    nodes: int = 0
    elapsed_ms: float = 0.0
    exhaustive: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "query": self.query,
            "answer": self.answer,
            "colourings_checked": self.colourings_checked,
            "nodes": self.nodes,
            "exhaustive": self.exhaustive,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        out.update(self.extra)
        return out


def _complete_edges(n: int) -> list[tuple[int, int]]:
    # colex order: every pair inside {0..v} comes before any pair touching v+1
    return [(u, v) for v in range(n) for u in range(v)]


def ramsey_oracle(
    a: int,
    b: int,
    n: int,
    limits: Limits | None = None,
    prune: bool = True,
) -> OracleAnswer:
    """Does every 2-colouring of ``K_n`` contain a colour-1 ``K_a`` or colour-2 ``K_b``?

    Backtracking over the edges of ``K_n``: a branch is closed as soon as
    the partial colouring contains one of the two cliques, and a complete
    colouring that survives is returned as the certificate for ``False``.
    ``colourings_checked`` counts the full colourings covered (closed
    subtrees count all their completions), so an exhaustive ``True`` run
    always reports ``2**binom(n, 2)``. With ``a == b`` the first edge is
    fixed to colour 1 and the count is doubled by the colour swap.
    ``prune=False`` instead walks all ``2**binom(n, 2)`` colourings.
    """
    limits = limits or default_limits()
    budget = limits.enumeration_budget
    if a < 1 or b < 1 or n < 0:
        raise PreconditionError("ramsey_oracle needs a, b >= 1 and n >= 0")
    t0 = time.perf_counter()
    query = {"op": "ramsey", "a": a, "b": b, "n": n}
    edges = _complete_edges(n)
    m = len(edges)
    if a == 1 or b == 1:
        ans = n >= 1
        return OracleAnswer(query, ans, None if ans else [], 1 << m, 1, (time.perf_counter() - t0) * 1e3)
    if n < 2:
        cert: list = []
        return OracleAnswer(query, False, cert, 1 << m, 1, (time.perf_counter() - t0) * 1e3)

    target = {1: a, 2: b}
    if not prune:
        if (1 << m) > budget:
            raise BudgetExceeded("ramsey_oracle (unpruned)", budget)
        for code in range(1 << m):
            cadj = {1: [0] * n, 2: [0] * n}
            for i, (u, v) in enumerate(edges):
                c = 1 + ((code >> i) & 1)
                cadj[c][u] |= 1 << v
                cadj[c][v] |= 1 << u
            full = (1 << n) - 1
            if len(_max_clique(cadj[1], full, target=a)) < a and len(_max_clique(cadj[2], full, target=b)) < b:
                cert = [[u, v, 1 + ((code >> i) & 1)] for i, (u, v) in enumerate(edges)]
                return OracleAnswer(query, False, cert, code + 1, code + 1, (time.perf_counter() - t0) * 1e3)
        return OracleAnswer(query, True, None, 1 << m, 1 << m, (time.perf_counter() - t0) * 1e3)

    cadj = {1: [0] * n, 2: [0] * n}
    assign = [0] * m
    nodes = 0
    covered = 0
    swap = a == b

    def closes(u: int, v: int, c: int) -> bool:
        k = target[c]
        if k == 2:
            return True
        common = cadj[c][u] & cadj[c][v]
        if common.bit_count() < k - 2:
            return False
        return len(_max_clique(cadj[c], common, target=k - 2)) >= k - 2

    def search(i: int) -> bool:
        nonlocal nodes, covered
        if i == m:
            covered += 1
            return True
        u, v = edges[i]
        for c in ((1,) if (swap and i == 0) else (1, 2)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("ramsey_oracle", budget)
            if closes(u, v, c):
                covered += 1 << (m - i - 1)
                continue
            cadj[c][u] |= 1 << v
            cadj[c][v] |= 1 << u
            assign[i] = c
            if search(i + 1):
                return True
            cadj[c][u] &= ~(1 << v)
            cadj[c][v] &= ~(1 << u)
        return False

    found = search(0)
    elapsed = (time.perf_counter() - t0) * 1e3
    if found:
        cert = [[u, v, c] for (u, v), c in zip(edges, assign)]
        return OracleAnswer(query, False, cert, covered, nodes, elapsed)
    if swap:
        covered *= 2
    return OracleAnswer(query, True, None, covered, nodes, elapsed)


def colouring_from_certificate(n: int, cert: list) -> EdgeColouring:
    g = Graph(n, [(u, v) for u, v, _ in cert])
    return EdgeColouring(g, max([c for _, _, c in cert], default=1), {(u, v): c for u, v, c in cert})


def is_tournament_on(t: Digraph, x: int) -> bool:
    for v in iter_bits(x):
        others = x & ~(1 << v)
        if (t.out_adj(v) | t.in_adj(v)) & others != others or t.out_adj(v) & t.in_adj(v) & x:
            return False
    return True


def verify_transitive(t: Digraph, seq: Iterable[int]) -> bool:
    s = list(seq)
    if len(set(s)) != len(s):
        return False
    return all(t.has_arc(s[i], s[j]) and not t.has_arc(s[j], s[i]) for i in range(len(s)) for j in range(i + 1, len(s)))


def tt_extract(t: Digraph, r: int, vertices: Iterable[int] | None = None) -> tuple[int, ...]:
    """Transitive subtournament ``v_1 -> ... -> v_r`` (all arcs forward).

    Pivot is the lowest remaining vertex; recursion goes into the larger of
    its out- and in-neighbourhoods (out on ties) and the pivot is placed
    first or last accordingly. With at least ``2^(r-1)`` vertices this
    always succeeds; smaller tournaments are attempted and rejected only if
    the recursion runs dry.
    """
    if r < 1:
        raise PreconditionError("r must be at least 1")
    x = t.vertex_mask if vertices is None else mask_of(vertices)
    if not x:
        raise PreconditionError("empty tournament")
    if not is_tournament_on(t, x):
        raise PreconditionError("vertex set does not induce a tournament")

    def rec(y: int, k: int) -> list[int] | None:
        if not y:
            return None
        if k == 1:
            return [lowest(y)]
        v = lowest(y)
        rest = y & ~(1 << v)
        out = t.out_adj(v) & rest
        inn = t.in_adj(v) & rest
        if out.bit_count() >= inn.bit_count():
            tail = rec(out, k - 1)
            return None if tail is None else [v] + tail
        head = rec(inn, k - 1)
        return None if head is None else head + [v]

    got = rec(x, r)
    if got is None:
        raise PreconditionError(f"tournament of order {x.bit_count()} < 2^(r-1) = {1 << (r - 1)} "
                                f"and the recursion found no TT_{r}")
    seq = tuple(got)
    if len(seq) != r or not verify_transitive(t, seq):
        raise VerificationError(f"tt_extract produced a non-transitive sequence {seq}")
    return seq


def bipartite_ramsey_oracle(s: int, k: int, t: int, limits: Limits | None = None) -> OracleAnswer:
    """Does every k-colouring of ``K_{t,t}`` contain a monochromatic ``K_{s,s}``?

    Cells of the ``t x t`` colour matrix are filled row by row; a branch is
    closed when the new cell completes a monochromatic ``s x s``
    sub-matrix. Row and column permutations are broken by keeping both the
    rows and the columns in non-decreasing lexicographic order, which every
    orbit admits. ``nodes`` counts cell assignments tried.
    """
    limits = limits or default_limits()
    budget = limits.enumeration_budget
    if s < 1 or k < 1 or t < 0:
        raise PreconditionError("bipartite_ramsey_oracle needs s, k >= 1 and t >= 0")
    t0 = time.perf_counter()
    query = {"op": "bipartite-ramsey", "s": s, "k": k, "t": t}
    if t < s:
        cert = [[1] * t for _ in range(t)]
        return OracleAnswer(query, False, cert, 1, 1, (time.perf_counter() - t0) * 1e3)
    if s == 1:
        return OracleAnswer(query, True, None, 1, 1, (time.perf_counter() - t0) * 1e3)

    cell = [[0] * t for _ in range(t)]
    rows = [[0] * t for _ in range(k + 1)]  # rows[c][i] = bitset of columns coloured c
    col_eq = [True] * t  # col_eq[j]: columns j-1 and j agree on all finished rows
    nodes = 0

    def completes(i: int, j: int, c: int) -> bool:
        cand = [r for r in range(i) if (rows[c][r] >> j) & 1]
        if len(cand) < s - 1:
            return False
        base = rows[c][i] & ((1 << j) - 1)
        if base.bit_count() < s - 1:
            return False
        for rs in combinations(cand, s - 1):
            common = base
            for r in rs:
                common &= rows[c][r]
            if common.bit_count() >= s - 1:
                return True
        return False

    def search(i: int, j: int, row_eq: bool) -> bool:
        nonlocal nodes
        if i == t:
            return True
        for c in range(1, k + 1):
            if i > 0 and row_eq and cell[i - 1][j] > c:
                continue
            if j > 0 and col_eq[j] and cell[i][j - 1] > c:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("bipartite_ramsey_oracle", budget)
            if completes(i, j, c):
                continue
            cell[i][j] = c
            rows[c][i] |= 1 << j
            req = row_eq and i > 0 and cell[i - 1][j] == c
            if j + 1 < t:
                ok = search(i, j + 1, req)
            else:
                saved = col_eq[:]
                for jj in range(1, t):
                    col_eq[jj] = col_eq[jj] and cell[i][jj - 1] == cell[i][jj]
                ok = search(i + 1, 0, True)
                col_eq[:] = saved
            if ok:
                return True
            rows[c][i] &= ~(1 << j)
            cell[i][j] = 0
        return False

    found = search(0, 0, True)
    elapsed = (time.perf_counter() - t0) * 1e3
    if found:
        return OracleAnswer(query, False, [row[:] for row in cell], nodes, nodes, elapsed)
    return OracleAnswer(query, True, None, nodes, nodes, elapsed)


def complete_bipartite_colouring(matrix: list[list[int]]) -> EdgeColouring:
    """K_{t,t} with rows 0..t-1 and columns t..2t-1, coloured by ``matrix``."""
    t = len(matrix)
    g = Graph(2 * t, [(i, t + j) for i in range(t) for j in range(t)],
              bipartition=(range(t), range(t, 2 * t)))
    k = max((c for row in matrix for c in row), default=1)
    return EdgeColouring(g, k, {(i, t + j): matrix[i][j] for i in range(t) for j in range(t)})


def find_kss_in_colouring(col: EdgeColouring, s: int):
    """Monochromatic ``K_{s,s}`` as ``(colour, (X, Y))``, trying larger colour classes first."""
    sizes = [(len(col.colour_class(c)), c) for c in range(1, col.k + 1)]
    for _, c in sorted(sizes, key=lambda p: (-p[0], p[1])):
        cg = Graph._from_adj([col.cadj(c, v) for v in range(col.base.n)])
        got = find_biclique(cg, s)
        if got is not None:
            x, y = got
            for u in x:
                for v in y:
                    if col.colour(u, v) != c:
                        raise VerificationError("find_kss_in_colouring returned a non-monochromatic biclique")
            return c, (x, y)
    return None
