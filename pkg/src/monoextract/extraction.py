"""Randomised extraction of monochromatic and antidirected dense induced subgraphs.

The pipeline is: clique stage (Erdos-Szekeres), a KLST-style search for a
dense induced bipartite subgraph, Kuhn-Osthus regularisation, the biased
fingerprint experiment, and a final peel. ``faithful`` mode uses the
proven constants verbatim; ``practical`` mode substitutes working
thresholds and records every substitution. Every witness is re-verified
against the base graph before it is returned.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil, comb
from typing import Any, Iterable, Sequence, Union

from .bits import bits_list, iter_bits, lowest, mask_of
from .config import Limits, default_limits
from .cycles import induced_cycles
from .densest import densest_mask, densest_prefix  # noqa: F401
from .errors import PreconditionError, RetriesExhausted, VerificationError
from .graph import (
    Digraph,
    EdgeColouring,
    Graph,
    GraphLike,
    InducedView,
    Orientation,
    adjacency_and_mask,
    digon_colouring,
    induced_subgraph,
    orientation_to_colouring,
    underlying_graph,
)
from .measures import _max_clique, core_mask, maximal_cliques
from .ramsey import ramsey_mono_clique, ramsey_upper, tt_extract, verify_transitive
from .rng import bernoulli_mask, check_seed, stage_rng

MODES = ("faithful", "practical")

MONO_CLIQUE = "MonoClique"
MONO_DENSE = "MonoDense"
TRANSITIVE = "TransitiveTournament"
ANTIDIRECTED = "AntidirectedDense"
EXHAUSTED = "Exhausted"


# -- constants ---------------------------------------------------------

def g_of_d(d: int) -> int:
    """``d * 2^(64d + 8)`` as an exact integer."""
    if d < 1:
        raise PreconditionError("d must be positive")
    return d << (64 * d + 8)


def f2_expr(d: Union[int, str]) -> str:
    """Symbolic ``f(2, d) = f_KLST(R(d+1, d+1), g(d))``."""
    if isinstance(d, int):
        return f"f_KLST(R({d + 1},{d + 1}), {g_of_d(d)})"
    return f"f_KLST(R({d}+1,{d}+1), g({d}))"


def fk_expr(k: int, d: Union[int, str]) -> str:
    """Symbolic ``f(k, d)`` via ``f(k, d) = f(k-1, f(2, d))``."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if k == 1:
        return str(d)
    if k == 2:
        return f2_expr(d)
    return fk_expr(k - 1, f2_expr(d))


def f_oriented_expr(r: int, d: Union[int, str]) -> str:
    """Symbolic ``f_KLST(2^(r-1), f(2, d))`` for the oriented statement."""
    if r < 1:
        raise PreconditionError("r must be positive")
    return f"f_KLST({1 << (r - 1)}, {f2_expr(d)})"


@dataclass(frozen=True)
class ThmConstants:
    d: int
    g_of_d: int
    ramsey_target: int
    mode: str
    threshold: int
    substitutions: tuple[tuple[str, str], ...] = ()

    @classmethod
    def build(cls, d: int, mode: str = "practical", threshold: int | None = None) -> "ThmConstants":
        if mode not in MODES:
            raise PreconditionError(f"unknown mode {mode!r}")
        if d < 1:
            raise PreconditionError("d must be positive")
        g = g_of_d(d)
        subs: list[tuple[str, str]] = []
        if mode == "faithful":
            if threshold is not None and threshold != g:
                raise PreconditionError("faithful mode does not accept a threshold override")
            thr = g
        else:
            thr = 2 * d if threshold is None else threshold
            subs.append(("bipartite_threshold", f"g(d)={g} -> {thr}"))
        return cls(d, g, comb(2 * d, d), mode, thr, tuple(subs))

    @property
    def f2(self) -> str:
        return f2_expr(self.d)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "g_of_d": str(self.g_of_d),
            "ramsey_target": self.ramsey_target,
            "mode": self.mode,
            "threshold": str(self.threshold),
            "f2": self.f2,
            "substitutions": dict(self.substitutions),
        }


@dataclass(frozen=True)
class KOParams:
    d: Fraction
    Gamma: Fraction
    p: Fraction
    lo: Fraction
    hi: Fraction
    ratio: Fraction
    w_threshold: Fraction
    max_retries: int
    substituted: bool = False

    @classmethod
    def lemma(cls, d: int, gamma: Fraction, max_retries: int = 64) -> "KOParams":
        gamma = Fraction(gamma)
        if not 16 * d >= 32:
            raise PreconditionError("regularisation needs 16d >= 32, i.e. d >= 2")
        if not gamma > 16 * d:
            raise PreconditionError(f"regularisation needs average degree {gamma} > 16d = {16 * d}")
        return cls(Fraction(d), gamma, Fraction(16 * d) / gamma, Fraction(4 * d), Fraction(64 * d),
                   gamma / (128 * d), 2 * gamma, max_retries)

    @classmethod
    def practical(cls, gamma: Fraction, max_retries: int = 64) -> "KOParams":
        """Scale ``d = Gamma/32``: p = 1/2, window [Gamma/8, 2 Gamma], ratio 1/4."""
        gamma = Fraction(gamma)
        if gamma <= 0:
            raise PreconditionError("practical regularisation needs at least one edge")
        s = gamma / 32
        return cls(s, gamma, Fraction(1, 2), 4 * s, 64 * s, gamma / (128 * s), 2 * gamma, max_retries, True)

    def to_json(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in asdict(self).items()}


# -- reports -----------------------------------------------------------

@dataclass
class Trial:
    stage: str
    attempt: int
    accepted: bool
    sizes: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"stage": self.stage, "attempt": self.attempt, "accepted": self.accepted, "sizes": self.sizes}
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class TrialReport:
    stage: str
    seed: int
    trials: list[Trial] = field(default_factory=list)
    success: bool = False
    substitutions: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def retries(self) -> int:
        return len(self.trials)


@dataclass
class ExtractionOutcome:
    kind: str
    witness: tuple[int, ...] = ()
    colour: int | None = None
    order: tuple[int, ...] | None = None
    params: dict = field(default_factory=dict)
    trials: list[Trial] = field(default_factory=list)
    verified: bool = False
    stage: str | None = None
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.kind != EXHAUSTED

    def to_json(self, timing: bool = True) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "witness_vertices": list(self.witness)}
        if self.colour is not None:
            out["colour"] = self.colour
        if self.order is not None:
            out["order"] = list(self.order)
        out["params"] = self.params
        out["trials"] = [t.to_json(timing) for t in self.trials]
        out["verified"] = self.verified
        out["stage"] = self.stage
        out["notes"] = list(self.notes)
        out.update(self.extra)
        return out


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


# -- verifiers ---------------------------------------------------------

def _min_deg(adj: Sequence[int], mask: int) -> int:
    return min((adj[v] & mask).bit_count() for v in iter_bits(mask))


def verify_mono_witness(col: EdgeColouring, vertices: Iterable[int], colour: int, d: int) -> bool:
    """Nonempty, monochromatic in ``colour`` as induced in the base graph, min degree >= d."""
    mask = mask_of(vertices)
    if not mask:
        return False
    base = col.base
    if mask >> base.n:
        return False
    adj = base.adjacency
    for v in iter_bits(mask):
        if adj[v] & mask & ~col.cadj(colour, v):
            return False
    return _min_deg(adj, mask) >= d


def verify_antidirected_witness(dg: Digraph, vertices: Iterable[int], d: int) -> bool:
    mask = mask_of(vertices)
    if not mask or mask >> dg.n:
        return False
    for v in iter_bits(mask):
        o, i = dg.out_adj(v) & mask, dg.in_adj(v) & mask
        if o and i:
            return False
    return _min_deg([dg.adj(v) for v in range(dg.n)], mask) >= d


def verify_outcome(outcome: ExtractionOutcome, obj, col: EdgeColouring | None = None, d: int | None = None,
                   r: int | None = None) -> bool:
    """Independent re-check of a non-Exhausted outcome against its input."""
    if outcome.kind == EXHAUSTED:
        return True
    if outcome.kind in (MONO_CLIQUE, MONO_DENSE):
        if col is None:
            return False
        ok = verify_mono_witness(col, outcome.witness, outcome.colour, d or 0)
        if outcome.kind == MONO_CLIQUE:
            adj = col.base.adjacency
            m = mask_of(outcome.witness)
            ok = ok and all((adj[v] | 1 << v) & m == m for v in iter_bits(m))
        return ok
    if outcome.kind == TRANSITIVE:
        return outcome.order is not None and len(outcome.order) == r and verify_transitive(obj, outcome.order)
    if outcome.kind == ANTIDIRECTED:
        return verify_antidirected_witness(obj, outcome.witness, d or 0)
    return False


# -- peeling: average degree to minimum degree ------------------------

def peel(g: GraphLike, t: Union[int, Fraction]) -> InducedView:
    """Delete vertices of degree ``< t`` (lowest index first) until none is left.

    The surviving set does not depend on the deletion order: it is the
    ``ceil(t)``-core.
    """
    adj, mask = adjacency_and_mask(g)
    t = Fraction(t)
    k = max(0, ceil(t))
    out = mask
    while True:
        v = next((v for v in iter_bits(out) if (adj[v] & out).bit_count() < k), None)
        if v is None:
            break
        out &= ~(1 << v)
    if not out:
        raise PreconditionError(f"peeling to minimum degree {t} empties the graph")
    return induced_subgraph(g, out)


# -- bipartite helpers -------------------------------------------------

def _bipartition_of(g: GraphLike) -> tuple[int, int] | None:
    """Stored bipartition restricted to the view, else an explicit 2-colouring."""
    bip = g.bipartition if isinstance(g, (Graph, InducedView)) else None
    adj, mask = adjacency_and_mask(g)
    if bip is not None:
        return bip[0] & mask, bip[1] & mask
    side: dict[int, int] = {}
    for s in iter_bits(mask):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in iter_bits(adj[u] & mask):
                if w not in side:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return None
    a = mask_of(v for v, x in side.items() if x == 0)
    return a, mask & ~a


def _avg(adj, mask: int) -> Fraction:
    return Fraction(sum((adj[v] & mask).bit_count() for v in iter_bits(mask)), mask.bit_count())


# -- regularisation ----------------------------------------------------

@dataclass
class BipartitePiece:
    view: InducedView
    a: int
    b: int

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.view.vertices


def ko_extract(
    g: GraphLike,
    d: int,
    seed: int = 0,
    max_retries: int = 64,
    practical: bool = False,
) -> tuple[BipartitePiece, KOParams, TrialReport]:
    """Induced ``G*`` with parts ``(A*, B*)``, ``|A*| >= Gamma'/(128d) |B*|`` and
    every ``a`` in ``A*`` of degree in ``[4d, 64d]``.

    ``practical`` allows inputs below ``Gamma > 16d >= 32``: the scale is
    then replaced by ``Gamma'/32`` and the substitution recorded.
    """
    check_seed(seed)
    adj, mask = adjacency_and_mask(g)
    report = TrialReport("ko_extract", seed)
    bip = _bipartition_of(g)
    if bip is None:
        raise PreconditionError("ko_extract needs a bipartite graph")
    if not mask or not any(adj[v] & mask for v in iter_bits(mask)):
        raise PreconditionError("ko_extract needs at least one edge")
    gamma = _avg(adj, mask)
    lemma_ok = d >= 2 and gamma > 16 * d
    if not lemma_ok and not practical:
        raise PreconditionError(f"need Ad(G) = {gamma} > 16d and d >= 2 (d = {d})")

    dense = densest_mask(g)
    gamma2 = _avg(adj, dense)
    core = peel(induced_subgraph(g, dense), gamma2 / 2).mask
    pa, pb = bip[0] & core, bip[1] & core
    if pa.bit_count() < pb.bit_count():
        pa, pb = pb, pa
        report.notes.append("parts swapped so that |A| >= |B|")
    if d >= 2 and gamma2 > 16 * d:
        params = KOParams.lemma(d, gamma2, max_retries)
    else:
        params = KOParams.practical(gamma2, max_retries)
        report.substitutions["scale"] = f"d={d} -> Gamma'/32={params.d}"
    w = mask_of(a for a in iter_bits(pa) if (adj[a] & core).bit_count() > params.w_threshold)
    cand = pa & ~w
    bverts = bits_list(pb)
    for attempt in range(max_retries):
        t0 = time.perf_counter()
        rng = stage_rng(seed, "ko_extract", attempt)
        bstar = bernoulli_mask(rng, bverts, params.p)
        astar = mask_of(a for a in iter_bits(cand) if params.lo <= (adj[a] & bstar).bit_count() <= params.hi)
        na, nb = astar.bit_count(), bstar.bit_count()
        ok = nb > 0 and na > 0 and na >= params.ratio * nb
        report.trials.append(Trial("ko_extract", attempt, ok, {"A*": na, "B*": nb, "W": w.bit_count()}, _ms(t0)))
        if ok:
            for a in iter_bits(astar):
                x = (adj[a] & bstar).bit_count()
                if not params.lo <= x <= params.hi:
                    raise VerificationError("ko_extract degree window violated")
            report.success = True
            return BipartitePiece(induced_subgraph(g, astar | bstar), astar, bstar), params, report
    raise RetriesExhausted("ko_extract", report.trials)


def biased_mono_bipartite(
    h: GraphLike,
    col: EdgeColouring,
    t: int,
    cap: int | None = None,
    seed: int = 0,
    max_retries: int = 256,
    parts: tuple[int, int] | None = None,
) -> tuple[int, BipartitePiece, TrialReport]:
    """Fingerprint experiment: every ``a`` keeps exactly its fixed set ``B_a``.

    ``parts`` are masks ``(A, B)`` in base coordinates; by default the
    graph's bipartition is used. Returns the colour and the witness
    ``G[A* | B*]``, monochromatic with every ``A*`` vertex of degree ``t``.
    """
    check_seed(seed)
    if t < 1:
        raise PreconditionError("t must be positive")
    adj, mask = adjacency_and_mask(h)
    if parts is None:
        parts = _bipartition_of(h)
        if parts is None:
            raise PreconditionError("biased_mono_bipartite needs a bipartite graph")
    pa, pb = parts[0] & mask, parts[1] & mask
    for v in iter_bits(pa):
        if adj[v] & pa:
            raise PreconditionError("part A is not independent")
    for v in iter_bits(pb):
        if adj[v] & pb:
            raise PreconditionError("part B is not independent")
    degs = {a: (adj[a] & mask).bit_count() for a in iter_bits(pa)}
    if cap is None:
        cap = max(degs.values(), default=0)
    bad = [a for a, x in degs.items() if not 2 * t <= x <= cap]
    if bad:
        raise PreconditionError(f"degree window [{2 * t}, {cap}] violated at vertex {bad[0]}")
    report = TrialReport("biased_mono_bipartite", seed)
    regime = pa.bit_count() >= (1 << cap) * pb.bit_count()
    report.notes.append(f"regime |A| >= 2^cap |B|: {regime}")
    a1 = mask_of(a for a in iter_bits(pa) if (col.cadj(1, a) & mask).bit_count() >= (col.cadj(2, a) & mask).bit_count())
    a2 = mask_of(a for a in iter_bits(pa) if (col.cadj(2, a) & mask).bit_count() >= (col.cadj(1, a) & mask).bit_count())
    c, ac = (1, a1) if a1.bit_count() >= a2.bit_count() else (2, a2)
    finger = {}
    for a in iter_bits(ac):
        nb = bits_list(col.cadj(c, a) & pb)
        finger[a] = mask_of(nb[:t])
    bverts = bits_list(pb)
    half = Fraction(1, 2)
    for attempt in range(max_retries):
        t0 = time.perf_counter()
        rng = stage_rng(seed, "biased_mono_bipartite", attempt)
        bstar = bernoulli_mask(rng, bverts, half)
        astar = mask_of(a for a, fa in finger.items() if adj[a] & bstar == fa)
        na, nb = astar.bit_count(), bstar.bit_count()
        ok = na >= nb > 0
        report.trials.append(Trial("biased_mono_bipartite", attempt, ok, {"A*": na, "B*": nb, "A_c": ac.bit_count()}, _ms(t0)))
        if ok:
            w = astar | bstar
            for a in iter_bits(astar):
                if (adj[a] & w).bit_count() != t:
                    raise VerificationError("fingerprint vertex without degree exactly t")
            if col.is_monochromatic_on(w) not in (0, c):
                raise VerificationError("fingerprint witness is not monochromatic")
            if _avg(adj, w) < t:
                raise VerificationError("fingerprint witness has average degree below t")
            report.success = True
            return c, BipartitePiece(induced_subgraph(h, w), astar, bstar), report
    raise RetriesExhausted("biased_mono_bipartite", report.trials)


# -- KLST-style search -------------------------------------------------

@dataclass
class KLSTResult:
    kind: str  # "clique" | "bipartite" | "exhausted"
    vertices: tuple[int, ...] = ()
    parts: tuple[int, int] | None = None
    exact: bool = False
    note: str = ""


def _greedy_clique(adj, mask: int, r: int) -> list[int]:
    core = core_mask(adj, mask, r - 1)
    best: list[int] = []
    for s in iter_bits(core):
        cl, cand = [s], adj[s] & core
        while cand and len(cl) < r:
            v = max(iter_bits(cand), key=lambda x: ((adj[x] & cand).bit_count(), -x))
            cl.append(v)
            cand &= adj[v]
        if len(cl) > len(best):
            best = cl
        if len(best) >= r:
            break
    return best


def _exact_bipartite(adj, mask: int, d: int, budget: int) -> tuple[int, int] | None:
    """Branch over A / B / out per vertex with independence and degree pruning."""
    verts = bits_list(mask)
    nodes = 0

    def nbrs(x: int) -> int:
        out = 0
        for v in iter_bits(x):
            out |= adj[v]
        return out

    def feasible(a: int, b: int, und: int) -> bool:
        ua, ub = und & ~nbrs(a), und & ~nbrs(b)
        for v in iter_bits(a):
            if (adj[v] & (b | ub)).bit_count() < d:
                return False
        for v in iter_bits(b):
            if (adj[v] & (a | ua)).bit_count() < d:
                return False
        return True

    def done(a: int, b: int) -> bool:
        w = a | b
        return bool(a) and bool(b) and _min_deg(adj, w) >= d

    def rec(i: int, a: int, b: int) -> tuple[int, int] | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        und = mask_of(verts[i:])
        if not feasible(a, b, und):
            return None
        if done(a, b):
            return a, b
        if i == len(verts):
            return None
        v = verts[i]
        bit = 1 << v
        if not adj[v] & a:
            got = rec(i + 1, a | bit, b)
            if got:
                return got
        if (a or b) and not adj[v] & b:
            got = rec(i + 1, a, b | bit)
            if got:
                return got
        return rec(i + 1, a, b)

    return rec(0, 0, 0)


class _Budget(Exception):
    pass


def _heuristic_bipartite(adj, mask: int, d: int, seed: int, tries: int) -> tuple[int, int] | None:
    verts = bits_list(mask)
    for attempt in range(tries):
        rng = stage_rng(seed, "klst_heuristic", attempt)
        side = {}
        if attempt == 0:
            for v in verts:
                ca = sum(1 for w in iter_bits(adj[v] & mask) if side.get(w) == 0)
                cb = sum(1 for w in iter_bits(adj[v] & mask) if side.get(w) == 1)
                side[v] = 0 if ca <= cb else 1
        else:
            bitsarr = rng.integers(0, 2, size=len(verts))
            side = {v: int(x) for v, x in zip(verts, bitsarr)}
        a = mask_of(v for v in verts if side[v] == 0)
        b = mask & ~a
        for _ in range(50):
            moved = False
            for v in verts:
                own, other = (a, b) if (a >> v) & 1 else (b, a)
                if (adj[v] & own).bit_count() > (adj[v] & other).bit_count():
                    if (a >> v) & 1:
                        a &= ~(1 << v); b |= 1 << v
                    else:
                        b &= ~(1 << v); a |= 1 << v
                    moved = True
            if not moved:
                break
        # drop vertices with same-side neighbours until both sides are independent
        while True:
            worst, key = None, 0
            for v in iter_bits(a | b):
                own = a if (a >> v) & 1 else b
                k = (adj[v] & own).bit_count()
                if k > key:
                    worst, key = v, k
            if worst is None:
                break
            a &= ~(1 << worst)
            b &= ~(1 << worst)
        w = core_mask(adj, a | b, d)
        if w and w & a and w & b:
            return a & w, b & w
    return None


def klst_search(
    g: GraphLike,
    r: int | None,
    d: int,
    seed: int = 0,
    limits: Limits | None = None,
    heuristic_tries: int = 32,
) -> KLSTResult:
    """``K_r`` or an induced bipartite subgraph with minimum degree ``>= d``.

    Exact below ``limits.klst_n`` vertices (after reduction to the d-core),
    randomised max-cut style otherwise. Only verified witnesses are
    returned; ``exhausted`` never asserts non-existence.
    """
    limits = limits or default_limits()
    adj, mask = adjacency_and_mask(g)
    if r is not None and r >= 1:
        core_r = core_mask(adj, mask, r - 1)
        if core_r.bit_count() <= limits.clique_n:
            cl = _max_clique(adj, core_r, target=r)
        else:
            cl = _greedy_clique(adj, mask, r)
        if len(cl) >= r:
            cl = sorted(cl)[:r]
            return KLSTResult("clique", tuple(cl), exact=core_r.bit_count() <= limits.clique_n)
    core = core_mask(adj, mask, max(d, 1))
    if not core:
        return KLSTResult("exhausted", exact=True, note=f"{d}-core is empty")
    bip = _bipartition_of(induced_subgraph(g, core))
    if bip is not None:
        return KLSTResult("bipartite", tuple(iter_bits(core)), bip, exact=True)
    if core.bit_count() <= limits.klst_n:
        try:
            got = _exact_bipartite(adj, core, d, limits.enumeration_budget)
            if got is None:
                return KLSTResult("exhausted", exact=True, note="exact search found no induced bipartite subgraph")
            return KLSTResult("bipartite", tuple(iter_bits(got[0] | got[1])), got, exact=True)
        except _Budget:
            pass
    got = _heuristic_bipartite(adj, core, d, seed, heuristic_tries)
    if got is None:
        return KLSTResult("exhausted", note="heuristic search failed")
    return KLSTResult("bipartite", tuple(iter_bits(got[0] | got[1])), got, note="heuristic")


# -- monochromatic extraction ------------------------------------------

def _mono_outcome(kind, col, mask, colour, d, stage, params, trials, notes) -> ExtractionOutcome:
    w = tuple(iter_bits(mask))
    if not verify_mono_witness(col, w, colour, d):
        raise VerificationError(f"{stage} produced an unverified witness {w}")
    return ExtractionOutcome(kind, w, colour, None, params, trials, True, stage, notes)


def _direct_small_d(adj, mask: int, col: EdgeColouring, d: int, cycle_budget: int = 200_000):
    """d = 1: any edge. d = 2: a monochromatic induced cycle, which any witness contains.

    Returns ``(found, complete)``; ``complete`` means the search ran to the
    end, so a ``None`` result rules out every witness.
    """
    if d == 1:
        for u in iter_bits(mask):
            nb = adj[u] & mask
            if nb:
                v = lowest(nb)
                return (1 << u | 1 << v, col.colour(u, v)), True
        return None, True
    seen = 0
    for c in range(1, col.k + 1):
        cadj = [col.cadj(c, v) for v in range(col.base.n)]
        m2 = core_mask(cadj, mask, 2)
        if not m2:
            continue
        for cyc in induced_cycles(adj, m2, 3):
            seen += 1
            if seen > cycle_budget:
                return None, False
            if all((cadj[cyc[i - 1]] >> cyc[i]) & 1 for i in range(len(cyc))):
                return (mask_of(cyc), c), True
    return None, True


def _colour_peel(adj, mask: int, col: EdgeColouring, d: int, seed: int, trials: int, report: list[Trial]):
    """Per colour: drop low colour-degree vertices, then break foreign edges."""
    n = col.base.n
    for c in range(1, col.k + 1):
        cadj = [col.cadj(c, v) for v in range(n)]
        start = core_mask(cadj, mask, d)
        if not start:
            continue
        for attempt in range(trials):
            t0 = time.perf_counter()
            rng = stage_rng(seed, f"colour_peel_{c}", attempt)
            s = start
            while s:
                s = core_mask(cadj, s, d)
                if not s:
                    break
                bad = {v: (adj[v] & s & ~cadj[v]).bit_count() for v in iter_bits(s)}
                bad = {v: x for v, x in bad.items() if x}
                if not bad:
                    break
                if attempt == 0:
                    v = max(bad, key=lambda x: (bad[x], -x))
                else:
                    vs = sorted(bad)
                    wts = [bad[v] for v in vs]
                    v = vs[int(rng.choice(len(vs), p=[x / sum(wts) for x in wts]))]
                s &= ~(1 << v)
            ok = bool(s)
            report.append(Trial(f"colour_peel_{c}", attempt, ok, {"size": s.bit_count()}, _ms(t0)))
            if ok:
                return s, c
    return None


def _check_mode(mode: str, d: int) -> None:
    if mode not in MODES:
        raise PreconditionError(f"unknown mode {mode!r}")
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"d must be a positive integer, got {d!r}")


def mono_extract(
    g: GraphLike,
    col: EdgeColouring,
    d: int,
    mode: str = "practical",
    seed: int = 0,
    *,
    max_retries: int | None = None,
    threshold: int | None = None,
    ko_retries: int = 64,
    biased_retries: int = 256,
    fallback_trials: int = 16,
    limits: Limits | None = None,
) -> ExtractionOutcome:
    """Monochromatic induced subgraph with minimum degree ``>= d``, or Exhausted.

    ``g`` may be a view of ``col.base``; witnesses use base coordinates.
    """
    _check_mode(mode, d)
    check_seed(seed)
    limits = limits or default_limits()
    if col.k > 2:
        raise PreconditionError("mono_extract takes at most 2 colours; use mono_extract_k")
    base = g.base if isinstance(g, InducedView) else g
    if base != col.base:
        raise PreconditionError("colouring belongs to a different graph")
    if max_retries is not None:
        ko_retries = biased_retries = fallback_trials = max_retries
    adj, mask = adjacency_and_mask(g)
    consts = ThmConstants.build(d, mode, threshold)
    params = {"d": d, "mode": mode, "seed": seed, "constants": consts.to_json()}
    trials: list[Trial] = []
    notes: list[str] = []
    a = d + 1
    bound = ramsey_upper(a, a)

    # (1) clique stage
    t0 = time.perf_counter()
    work = col if col.k == 2 else EdgeColouring(col.base, 2, col.colours)
    core = core_mask(adj, mask, d)
    cliques: list[list[int]] = []
    if core.bit_count() <= limits.clique_n:
        big = _max_clique(adj, core)
        if len(big) >= a:
            cliques.append(big)
    else:
        big = _greedy_clique(adj, core, bound)
        if len(big) >= a:
            cliques.append(big)
    trials.append(Trial("clique", 0, False, {"max_clique": len(cliques[0]) if cliques else 0}, _ms(t0)))
    if cliques and len(cliques[0]) >= bound:
        w = ramsey_mono_clique(work, a, a, sorted(cliques[0])[:bound], strict=True)
        trials[-1].accepted = True
        return _mono_outcome(MONO_CLIQUE, col, mask_of(w.vertices), w.colour, d, "clique", params, trials, notes)
    if mode == "practical" and core.bit_count() <= limits.clique_n:
        for i, cl in enumerate(maximal_cliques(induced_subgraph(g, core))):
            if i >= 64:
                break
            if len(cl) >= a:
                cliques.append(list(cl))
        for cl in cliques:
            w = ramsey_mono_clique(work, a, a, cl, strict=False)
            if w is not None:
                trials[-1].accepted = True
                notes.append("clique below the binomial bound")
                return _mono_outcome(MONO_CLIQUE, col, mask_of(w.vertices), w.colour, d, "clique", params, trials, notes)

    # (2) dense induced bipartite subgraph
    t0 = time.perf_counter()
    kl = klst_search(g, None, consts.threshold if mode == "practical" else max(consts.threshold, 1), seed, limits)
    trials.append(Trial("klst", 0, kl.kind == "bipartite", {"size": len(kl.vertices)}, _ms(t0)))
    if kl.note:
        notes.append(f"klst: {kl.note}")
    if kl.kind == "bipartite":
        got = _bipartite_route(g, col, d, mode, seed, kl, ko_retries, biased_retries, trials, notes)
        if got is not None:
            c, m = got
            return _mono_outcome(MONO_DENSE, col, m, c, d, "pipeline", params, trials, notes)

    if mode == "faithful":
        notes.append("faithful thresholds not met at this scale; non-existence is not claimed")
        return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)

    # (3) practical fallbacks
    if d <= 2:
        t0 = time.perf_counter()
        got, complete = _direct_small_d(adj, mask, col, d)
        trials.append(Trial("direct", 0, got is not None, {"complete": complete}, _ms(t0)))
        if got is not None:
            return _mono_outcome(MONO_DENSE, col, got[0], got[1], d, "direct", params, trials, notes)
        if complete:
            notes.append("direct search completed without a witness")
            return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)
    got = _colour_peel(adj, mask, col, d, seed, fallback_trials, trials)
    if got is not None:
        return _mono_outcome(MONO_DENSE, col, got[0], got[1], d, "colour_peel", params, trials, notes)
    notes.append("all stages failed; non-existence is not claimed")
    return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)


def _bipartite_route(g, col, d, mode, seed, kl: KLSTResult, ko_retries, biased_retries, trials, notes):
    """Regularise, run the fingerprint experiment and peel. Returns (colour, mask) or None."""
    adj, _ = adjacency_and_mask(g)
    gp = induced_subgraph(g, mask_of(kl.vertices))
    pa, pb = kl.parts
    bip_view = _PartsView(gp, pa, pb)
    try:
        piece, kparams, rep = ko_extract(bip_view, d, seed, ko_retries, practical=(mode == "practical"))
        trials.extend(rep.trials)
        if rep.substitutions:
            notes.append(f"ko_extract substitution: {rep.substitutions}")
        h, ha, hb = piece.view, piece.a, piece.b
    except RetriesExhausted as exc:
        trials.extend(exc.trials)
        if mode == "faithful":
            return None
        notes.append("ko_extract exhausted; fingerprint step run on the bipartite subgraph itself")
        h, ha, hb = gp, pa, pb
        if ha.bit_count() < hb.bit_count():
            ha, hb = hb, ha
    except PreconditionError as exc:
        notes.append(f"ko_extract skipped: {exc}")
        if mode == "faithful":
            return None
        h, ha, hb = gp, pa, pb
        if ha.bit_count() < hb.bit_count():
            ha, hb = hb, ha
    t = 2 * d if mode == "faithful" else d
    keep = mask_of(a for a in iter_bits(ha) if (adj[a] & h.mask).bit_count() >= 2 * t)
    if keep != ha:
        if mode == "faithful":
            return None
        notes.append(f"dropped {(ha & ~keep).bit_count()} A-vertices below degree 2t")
    hm = keep | hb
    if not keep:
        return None
    cap = 64 * d if mode == "faithful" else max((adj[a] & hm).bit_count() for a in iter_bits(keep))
    try:
        c, wit, rep = biased_mono_bipartite(induced_subgraph(g, hm), col, t, cap, seed, biased_retries, (keep, hb))
        trials.extend(rep.trials)
    except RetriesExhausted as exc:
        trials.extend(exc.trials)
        return None
    except PreconditionError as exc:
        notes.append(f"fingerprint step skipped: {exc}")
        return None
    try:
        out = peel(wit.view, d)
    except PreconditionError:
        notes.append("fingerprint witness peeled to nothing")
        return None
    return c, out.mask


class _PartsView(InducedView):
    """View that carries an explicit bipartition (base may have none stored)."""

    __slots__ = ("_parts",)

    def __init__(self, view: InducedView, a: int, b: int):
        super().__init__(view.base, view.mask)
        self._parts = (a, b)

    @property
    def bipartition(self):
        return self._parts[0] & self.mask, self._parts[1] & self.mask


def mono_extract_k(
    g: GraphLike,
    col: EdgeColouring,
    d: int,
    mode: str = "practical",
    seed: int = 0,
    **kw,
) -> ExtractionOutcome:
    """k colours: merge the last two colour classes and recurse."""
    _check_mode(mode, d)
    k = col.k
    if k < 1:
        raise PreconditionError("k must be positive")
    adj, mask = adjacency_and_mask(g)
    if k == 1:
        params = {"d": d, "mode": mode, "seed": seed, "k": 1}
        core = core_mask(adj, mask, d)
        if not core:
            return ExtractionOutcome(EXHAUSTED, (), None, None, params, [], False, None, ["peel emptied the graph"])
        return _mono_outcome(MONO_DENSE, col, core, 1, d, "peel", params, [], [])
    if k == 2:
        return mono_extract(g, col, d, mode, seed, **kw)
    if mode == "faithful":
        params = {"d": d, "mode": mode, "seed": seed, "k": k, "target": fk_expr(k, d)}
        return ExtractionOutcome(EXHAUSTED, (), None, None, params, [], False, None,
                                 [f"faithful target f({k},{d}) = {fk_expr(k, d)} is not computable"])
    merged = col.merged(k - 1, k)
    inner = mono_extract_k(g, merged, d, mode, seed, **kw)
    params = {"d": d, "mode": mode, "seed": seed, "k": k}
    notes = [f"merged colours {k - 1} and {k}"]
    if inner.found:
        wm = mask_of(inner.witness)
        if inner.colour < k - 1:
            return _mono_outcome(inner.kind, col, wm, inner.colour, d, inner.stage, params, inner.trials, notes)
        # split the merged class back into two colours on the witness
        split = EdgeColouring(col.base, 2, [1 if (c == k - 1 or not ((wm >> u) & (wm >> v) & 1)) else 2
                                            for (u, v), c in zip(col.base.edges, col.colours)])
        sub = mono_extract(induced_subgraph(col.base, wm), split, d, mode, seed, **kw)
        if sub.found:
            return _mono_outcome(sub.kind, col, mask_of(sub.witness), k - 1 if sub.colour == 1 else k,
                                 d, sub.stage, params, inner.trials + sub.trials, notes + sub.notes)
        notes.append("split of the merged witness failed")
    # k-colour fallbacks on the whole graph
    trials = list(inner.trials)
    if d <= 2:
        got, complete = _direct_small_d(adj, mask, col, d)
        if got is not None:
            return _mono_outcome(MONO_DENSE, col, got[0], got[1], d, "direct", params, trials, notes)
        if complete:
            notes.append("direct search completed without a witness")
            return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)
    got = _colour_peel(adj, mask, col, d, seed, kw.get("fallback_trials", 16), trials)
    if got is not None:
        return _mono_outcome(MONO_DENSE, col, got[0], got[1], d, "colour_peel", params, trials, notes)
    return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)


# -- oriented extraction -----------------------------------------------

def oriented_extract(
    dg: Orientation,
    r: int,
    d: int,
    mode: str = "practical",
    seed: int = 0,
    *,
    threshold: int | None = None,
    limits: Limits | None = None,
    **kw,
) -> ExtractionOutcome:
    """``TT_r`` or an induced antidirected subdigraph with minimum degree ``>= d``."""
    _check_mode(mode, d)
    check_seed(seed)
    if not isinstance(r, int) or r < 1:
        raise PreconditionError("r must be a positive integer")
    if not dg.is_oriented():
        raise PreconditionError("oriented_extract needs an orientation (no digons)")
    limits = limits or default_limits()
    g = underlying_graph(dg)
    target = 1 << (r - 1)
    if mode == "faithful":
        thr = g_of_d(d)
        params = {"r": r, "d": d, "mode": mode, "seed": seed, "f": f_oriented_expr(r, d),
                  "threshold_floor": str(thr)}
    else:
        thr = d if threshold is None else threshold
        params = {"r": r, "d": d, "mode": mode, "seed": seed, "threshold": thr,
                  "substitutions": {"bipartite_threshold": f"f(2,d) -> {thr}"}}
    trials: list[Trial] = []
    notes: list[str] = []
    t0 = time.perf_counter()
    kl = klst_search(g, target, thr, seed, limits)
    trials.append(Trial("klst", 0, kl.kind != "exhausted", {"size": len(kl.vertices)}, _ms(t0)))
    if kl.kind == "clique":
        order = tt_extract(dg, r, kl.vertices)
        if not verify_transitive(dg, order):
            raise VerificationError("tt_extract output is not transitive")
        return ExtractionOutcome(TRANSITIVE, tuple(sorted(order)), None, tuple(order), params, trials, True,
                                 "tournament", notes)
    if kl.kind == "bipartite":
        sub, labels = dg.subdigraph(kl.vertices)
        idx = {v: i for i, v in enumerate(labels)}
        pa = [idx[v] for v in iter_bits(kl.parts[0])]
        pb = [idx[v] for v in iter_bits(kl.parts[1])]
        scol = orientation_to_colouring(Orientation(sub.n, sub.arcs), (pa, pb))
        inner = mono_extract(scol.base, scol, d, mode, seed, limits=limits, **kw)
        trials.extend(inner.trials)
        notes.extend(inner.notes)
        if inner.found:
            w = tuple(sorted(labels[i] for i in inner.witness))
            if not verify_antidirected_witness(dg, w, d):
                raise VerificationError("antidirected witness failed verification")
            return ExtractionOutcome(ANTIDIRECTED, w, None, None, params, trials, True, "bipartite", notes,
                                     {"source_side_colour": inner.colour})
    if mode == "practical" and d == 1 and dg.arcs:
        u, v = dg.arcs[0]
        notes.append("d = 1: a single arc is antidirected")
        return ExtractionOutcome(ANTIDIRECTED, (min(u, v), max(u, v)), None, None, params, trials, True, "arc", notes)
    notes.append("no witness found; non-existence is not claimed")
    return ExtractionOutcome(EXHAUSTED, (), None, None, params, trials, False, None, notes)


def digraph_split(dg: Digraph, d: int, mode: str = "practical", seed: int = 0, **kw) -> ExtractionOutcome:
    """Symmetric or oriented induced subdigraph with minimum degree ``>= d``."""
    _check_mode(mode, d)
    col = digon_colouring(dg)
    out = mono_extract(col.base, col, d, mode, seed, **kw)
    if out.found:
        w = mask_of(out.witness)
        kind = "symmetric" if out.colour == 1 else "oriented"
        for u in iter_bits(w):
            for v in iter_bits(dg.adj(u) & w):
                if dg.is_digon(u, v) != (kind == "symmetric"):
                    raise VerificationError("digraph_split witness mixes digons and simple arcs")
        out.extra["digraph_kind"] = kind
    return out
