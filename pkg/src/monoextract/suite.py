"""Acceptance suite: twelve numbered checks plus the ``K_{2,2} = AC_4`` identity.

``verify_paper_suite`` never raises on a failed check; failures are
results. Fixtures (currently only ``cube_signing``) can be overridden for
fault injection.
"""
from __future__ import annotations

import itertools
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

import networkx as nx

from . import io as gio
from .classes import antidirected_cycle, canonical_form, is_antidirected, is_even_hole_free, orientation_without, verify_odd_signing
from .config import Limits
from .errors import MonoExtractError, RetriesExhausted
from .extraction import (
    ANTIDIRECTED,
    EXHAUSTED,
    ThmConstants,
    f_oriented_expr,
    fk_expr,
    g_of_d,
    ko_extract,
    mono_extract,
    oriented_extract,
    peel,
    verify_outcome,
)
from .generators import complete_bipartite, cube, gnp, random_colouring, random_orientation, tournament
from .graph import EdgeColouring, Graph, Orientation, induced_subgraph
from .harness import Experiment, canned_experiments, report_digest, run_experiment
from .measures import avg_degree, clique_number, min_degree
from .oracles import mono_dense_oracle
from .ramsey import (
    bipartite_ramsey_oracle,
    colouring_from_certificate,
    complete_bipartite_colouring,
    find_kss_in_colouring,
    ramsey_mono_clique,
    ramsey_oracle,
    ramsey_upper,
    tt_extract,
    verify_mono_clique,
    verify_transitive,
)
from .rng import derive_seed, stage_rng

FIXTURES = Path(__file__).with_name("fixtures")
CORPUS_SECONDS_ENV = "MONOEXTRACT_CORPUS_SECONDS"
DEFAULT_CORPUS_SECONDS = 300


@dataclass
class CheckResult:
    id: str
    name: str
    tags: tuple[str, ...]
    passed: bool
    detail: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id:>2} {self.name}: {self.detail.get('summary', '')}"

    def to_json(self, timing: bool = True) -> dict:
        out = {"id": self.id, "name": self.name, "tags": list(self.tags), "passed": self.passed, "detail": self.detail}
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class SuiteResult:
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self, timing: bool = True) -> dict:
        return {"passed": self.passed, "checks": [r.to_json(timing) for r in self.results]}


@dataclass
class Check:
    id: str
    name: str
    tags: tuple[str, ...]
    fn: Callable[[dict], tuple[bool, dict]]


# -- 1..4: exhaustive Ramsey-type checks --------------------------------

def check_ramsey_flip(fx: dict) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    a5 = ramsey_oracle(3, 3, 5)
    cert_ok = False
    if not a5.answer and a5.certificate is not None:
        col = colouring_from_certificate(5, a5.certificate)
        cert_ok = not any(verify_mono_clique(col, c, s) for c in (1, 2) for s in itertools.combinations(range(5), 3))
    a6 = ramsey_oracle(3, 3, 6)
    secs = time.perf_counter() - t0
    ok = (not a5.answer and cert_ok and a6.answer and a6.exhaustive and a6.colourings_checked == 1 << 15
          and ramsey_upper(3, 3) == 6 and secs < 60)
    return ok, {"summary": f"R(3,3;5)={a5.answer} (certificate ok={cert_ok}), R(3,3;6)={a6.answer} over "
                           f"{a6.colourings_checked} colourings, bound={ramsey_upper(3, 3)}, {secs:.2f}s < 60s",
                "seconds": secs}


def check_constructive_ramsey(fx: dict) -> tuple[bool, dict]:
    g = Graph(6, [(u, v) for v in range(6) for u in range(v)])
    failures = 0
    for code in range(1 << 15):
        col = EdgeColouring(g, 2, [1 + ((code >> i) & 1) for i in range(15)])
        try:
            w = ramsey_mono_clique(col, 3, 3)
        except MonoExtractError:
            w = None
        if w is None or len(w.vertices) != 3 or not verify_mono_clique(col, w.colour, w.vertices):
            failures += 1
    return failures == 0, {"summary": f"{1 << 15} colourings of K6, {failures} failures", "failures": failures}


def check_tournaments(fx: dict) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    pairs = list(itertools.combinations(range(4), 2))
    exhaustive_fail = 0
    for code in range(1 << 6):
        arcs = [(u, v) if (code >> i) & 1 else (v, u) for i, (u, v) in enumerate(pairs)]
        t = Orientation(4, arcs)
        seq = tt_extract(t, 3)
        if len(seq) != 3 or not verify_transitive(t, seq):
            exhaustive_fail += 1
    random_fail = 0
    for i in range(10_000):
        t = tournament(8, derive_seed(9, i))
        seq = tt_extract(t, 4)
        if len(seq) != 4 or not verify_transitive(t, seq):
            random_fail += 1
    secs = time.perf_counter() - t0
    ok = exhaustive_fail == 0 and random_fail == 0 and secs < 30
    return ok, {"summary": f"64/64 exhaustive n=4 (fail {exhaustive_fail}), 10^4 random n=8 TT4 (fail {random_fail}), "
                           f"{secs:.2f}s < 30s", "seconds": secs}


def check_bipartite_ramsey(fx: dict) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    a5 = bipartite_ramsey_oracle(2, 2, 5)
    a4 = bipartite_ramsey_oracle(2, 2, 4)
    cert_ok = (not a4.answer and a4.certificate is not None
               and find_kss_in_colouring(complete_bipartite_colouring(a4.certificate), 2) is None)
    o = orientation_without(complete_bipartite(5, 5), [antidirected_cycle(4)], Limits(orientation_edges=25))
    secs = time.perf_counter() - t0
    ok = a5.answer and a5.exhaustive and cert_ok and o is None and secs < 600
    return ok, {"summary": f"(2,2,5)={a5.answer}, (2,2,4)={a4.answer} certificate ok={cert_ok}, "
                           f"AC4-free orientation of K55: {'none' if o is None else 'found'}, {secs:.2f}s < 600s",
                "seconds": secs}


# -- 5, 6: randomized regularisation and peeling -----------------------

def check_ko(fx: dict) -> tuple[bool, dict]:
    g = complete_bipartite(64, 64)
    successes = violations = 0
    for i in range(100):
        try:
            piece, params, rep = ko_extract(g, 2, derive_seed(5, i), max_retries=64)
        except RetriesExhausted:
            continue
        successes += 1
        gamma = params.Gamma
        adj = g.adjacency
        window = all(8 <= (adj[a] & piece.b).bit_count() <= 128 for a in range(g.n) if (piece.a >> a) & 1)
        ratio = Fraction(piece.a.bit_count()) >= gamma / 256 * piece.b.bit_count()
        if not (window and ratio and gamma == 64 and not params.substituted):
            violations += 1
    ok = successes >= 99 and violations == 0
    return ok, {"summary": f"{successes}/100 succeeded within 64 retries (need >= 99), {violations} postcondition violations",
                "successes": successes, "violations": violations}


def check_peel(fx: dict) -> tuple[bool, dict]:
    rng = stage_rng(6, "peel-suite")
    failures = done = 0
    while done < 10_000:
        n = int(rng.integers(2, 51))
        p = Fraction(int(rng.integers(1, 20)), 20)
        g = gnp(n, p, int(rng.integers(0, 1 << 63)))
        if g.m == 0:
            continue
        done += 1
        ad = avg_degree(g)
        try:
            h = peel(g, ad / 2)
            good = len(h.vertices) > 0 and min_degree(h) >= ad / 2
        except MonoExtractError:
            good = False
        failures += not good
    return failures == 0, {"summary": f"10^4 random G(n<=50,p), {failures} failures", "failures": failures}


# -- 7, 8: extractor soundness and desk completeness ------------------

def _corpus() -> Iterable[Graph]:
    """Graphs with at least one edge on at most 8 vertices, up to isomorphism, by vertex count.

    Up to 7 vertices come from the graph atlas; the 8-vertex classes are
    only built once the iteration reaches them.
    """
    atlas = list(nx.graph_atlas_g())
    for h in atlas:
        if h.number_of_edges() > 0:
            yield Graph(h.number_of_nodes(), [tuple(sorted(e)) for e in h.edges()])
    for h in _extend_classes([h for h in atlas if h.number_of_nodes() == 7]):
        if h.number_of_edges() > 0:
            yield Graph(h.number_of_nodes(), [tuple(sorted(e)) for e in h.edges()])


def _extend_classes(prev: list) -> list:
    """Graphs on one more vertex, deduplicated by WL hash then isomorphism."""
    buckets: dict[str, list] = {}
    for h in prev:
        n = h.number_of_nodes()
        for sub in range(1 << n):
            x = h.copy()
            x.add_node(n)
            x.add_edges_from((n, v) for v in range(n) if (sub >> v) & 1)
            key = nx.weisfeiler_lehman_graph_hash(x)
            bucket = buckets.setdefault(key, [])
            if not any(nx.is_isomorphic(x, y) for y in bucket):
                bucket.append(x)
    return [x for b in buckets.values() for x in b]


def _compare(g: Graph, col: EdgeColouring, d: int, seed: int, counts: dict) -> None:
    out = mono_extract(g, col, d, "practical", seed, max_retries=1000)
    counts["runs"] += 1
    if out.kind != EXHAUSTED and not verify_outcome(out, g, col, d):
        counts["unverified"] += 1
    w = mono_dense_oracle(g, col, d)
    if (w is not None) != (out.kind != EXHAUSTED):
        counts["disagree"] += 1
        if len(counts["examples"]) < 3:
            counts["examples"].append({"graph": gio.serialize(col), "d": d, "oracle": w is not None, "kind": out.kind})


def _corpus_seconds(fx: dict) -> float | None:
    raw = fx.get("corpus_seconds", os.environ.get(CORPUS_SECONDS_ENV, DEFAULT_CORPUS_SECONDS))
    val = float(raw)
    return None if val <= 0 else val


def check_mono_corpus(fx: dict) -> tuple[bool, dict]:
    """Random instances first, then the exhaustive corpus until done or out of time.

    The exhaustive part needs about 1e9 extractor runs; an unfinished
    corpus is reported as a failure together with how far it got.
    """
    seconds = _corpus_seconds(fx)
    deadline = None if seconds is None else time.monotonic() + seconds
    counts = {"runs": 0, "unverified": 0, "disagree": 0, "examples": []}
    rng = stage_rng(7, "mono-corpus")
    for i in range(1000):
        n = int(rng.integers(2, 13))
        p = Fraction(int(rng.integers(2, 10)), 10)
        s = int(rng.integers(0, 1 << 63))
        g = gnp(n, p, s)
        if g.m == 0:
            g = Graph(n, [(0, 1)])
        col = random_colouring(g, 2, s)
        _compare(g, col, 1 + i % 2, s, counts)
    graphs_by_n: dict[int, int] = {}
    complete = True
    for g in _corpus():
        if g.m > 18:
            continue
        if deadline is not None and time.monotonic() > deadline:
            complete = False
            break
        for code in range(1 << g.m):
            col = EdgeColouring(g, 2, [1 + ((code >> i) & 1) for i in range(g.m)])
            for d in (1, 2):
                _compare(g, col, d, code, counts)
        graphs_by_n[g.n] = graphs_by_n.get(g.n, 0) + 1
    reached = max(graphs_by_n, default=0)
    if complete:
        scope = "all graphs n<=8 with m<=18"
    else:
        scope = (f"INCOMPLETE after {seconds:g}s: n<={reached - 1} done, {graphs_by_n.get(reached, 0)} graphs "
                 f"on {reached} vertices (set {CORPUS_SECONDS_ENV}=0 for no limit)")
    sound = counts["unverified"] == 0 and counts["disagree"] == 0
    return complete and sound, {
        "summary": f"{scope} x all colourings + 10^3 random n<=12, {counts['runs']} runs, "
                   f"{counts['unverified']} unverified, {counts['disagree']} oracle disagreements",
        "complete": complete, "sound": sound, "graphs_by_n": graphs_by_n, **counts}


def check_oriented(fx: dict) -> tuple[bool, dict]:
    rng = stage_rng(8, "oriented-suite")
    bad = exhausted_d1 = not_antidirected = runs = 0
    for i in range(1000):
        n = int(rng.integers(4, 15))
        p = Fraction(int(rng.integers(6, 10)), 10)
        s = int(rng.integers(0, 1 << 63))
        g = gnp(n, p, s)
        if g.m == 0:
            g = Graph(n, [(0, 1)])
        dg = random_orientation(g, s)
        d = 1 + i % 2
        r = 2 + i % 3
        out = oriented_extract(dg, r, d, "practical", s)
        runs += 1
        if out.kind == EXHAUSTED:
            exhausted_d1 += d == 1
            continue
        if not verify_outcome(out, dg, None, d, r):
            bad += 1
        if out.kind == ANTIDIRECTED and not is_antidirected(induced_subgraph(dg, out.witness)):
            not_antidirected += 1
    ok = bad == 0 and exhausted_d1 == 0 and not_antidirected == 0
    return ok, {"summary": f"{runs} runs, {bad} unverified, {exhausted_d1} Exhausted at d=1, "
                           f"{not_antidirected} non-antidirected witnesses"}


# -- 9..11 -------------------------------------------------------------

def check_cube_signing(fx: dict) -> tuple[bool, dict]:
    g = cube(3)
    text = fx.get("cube_signing") or (FIXTURES / "cube_signing.txt").read_text()
    t0 = time.perf_counter()
    try:
        ok = verify_odd_signing(g, gio.parse_signing(text, g))
    except MonoExtractError as exc:
        return False, {"summary": f"fixture rejected: {exc}"}
    secs = time.perf_counter() - t0
    return ok and secs < 1, {"summary": f"cube labelling odd={ok}, {secs * 1000:.1f}ms < 1s", "seconds": secs}


def check_even_hole_free(fx: dict) -> tuple[bool, dict]:
    rng = stage_rng(10, "ehf-suite")
    passing = violations = 0
    for _ in range(10_000):
        p = Fraction(int(rng.integers(1, 20)), 20)
        g = gnp(10, p, int(rng.integers(0, 1 << 63)))
        if is_even_hole_free(g):
            passing += 1
            if min_degree(g) > 2 * clique_number(g) - 2:
                violations += 1
    return violations == 0, {"summary": f"10^4 G(10,p): {passing} even-hole-free, {violations} with delta > 2*omega-2",
                             "even_hole_free": passing, "violations": violations}


def _expected_f2(d: int) -> str:
    return "f_KLST(R(%d,%d), %d)" % (d + 1, d + 1, d * 2 ** (64 * d + 8))


def check_constants(fx: dict) -> tuple[bool, dict]:
    ok = g_of_d(1) == 2 ** 72 and g_of_d(2) == 2 ** 137
    for d in range(1, 9):
        c = ThmConstants.build(d, "faithful")
        ok &= c.g_of_d == d * 2 ** (64 * d + 8) and c.threshold == c.g_of_d
        ok &= c.ramsey_target == math.factorial(2 * d) // math.factorial(d) ** 2
        ok &= c.f2 == _expected_f2(d)
    chain = {}
    for d in (1, 2):
        inner = _expected_f2(d)
        ok &= fk_expr(3, d) == "f_KLST(R(%s+1,%s+1), g(%s))" % (inner, inner, inner)
        for r in (2, 3, 4):
            got = f_oriented_expr(r, d)
            ok &= got == "f_KLST(%d, %s)" % (2 ** (r - 1), inner)
            chain[f"f({r},{d})"] = got
    return bool(ok), {"summary": "g(1)=2^72, g(2)=2^137, constants d<=8 and symbolic chain match", "chain": chain}


# -- 12, identity ------------------------------------------------------

def check_determinism(fx: dict) -> tuple[bool, dict]:
    digests = {}
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for name, path in canned_experiments().items():
            exp = Experiment.load(path)
            a = run_experiment(exp, Path(tmp) / f"{name}_a")
            b = run_experiment(exp, Path(tmp) / f"{name}_b", threads=2)
            da, db = report_digest(a.jsonl), report_digest(b.jsonl)
            digests[name] = da[:16]
            ok &= da == db
    return ok and len(digests) == 3, {"summary": f"{len(digests)} canned experiments re-run, digests equal={ok}",
                                      "digests": digests}


def check_ac4_identity(fx: dict) -> tuple[bool, dict]:
    k22 = Orientation(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    ok = canonical_form(k22) == canonical_form(antidirected_cycle(4))
    return ok, {"summary": f"K22 oriented A->B isomorphic to AC4: {ok}"}


CHECKS = [
    Check("1", "ramsey flip", ("ramsey", "oracle"), check_ramsey_flip),
    Check("2", "constructive ramsey", ("ramsey", "extract"), check_constructive_ramsey),
    Check("3", "transitive subtournaments", ("tournament", "extract"), check_tournaments),
    Check("4", "bipartite ramsey", ("ramsey", "oracle", "orientation"), check_bipartite_ramsey),
    Check("5", "regularisation postconditions", ("extract", "randomized"), check_ko),
    Check("6", "peeling", ("measure",), check_peel),
    Check("7", "mono soundness and completeness", ("extract", "oracle"), check_mono_corpus),
    Check("8", "oriented soundness", ("extract", "orientation"), check_oriented),
    Check("9", "cube odd signing", ("classes", "signing"), check_cube_signing),
    Check("10", "even-hole-free degree property", ("classes",), check_even_hole_free),
    Check("11", "faithful constants", ("constants",), check_constants),
    Check("12", "determinism", ("harness",), check_determinism),
    Check("ac4", "K22 equals AC4", ("classes", "orientation"), check_ac4_identity),
]


def select(filter: str | None) -> list[Check]:
    if not filter:
        return list(CHECKS)
    keys = {k.strip() for k in filter.split(",") if k.strip()}
    return [c for c in CHECKS if c.id in keys or keys & set(c.tags)]


def verify_paper_suite(filter: str | None = None, fixtures: dict | None = None, on_result=None) -> SuiteResult:
    """Run the selected checks; ``on_result`` is called after each one."""
    fx = dict(fixtures or {})
    results = []
    for c in select(filter):
        t0 = time.perf_counter()
        try:
            ok, detail = c.fn(fx)
        except Exception as exc:  # a crash is a failed check, not a suite error
            ok, detail = False, {"summary": f"raised {type(exc).__name__}: {exc}"}
        res = CheckResult(c.id, c.name, c.tags, bool(ok), detail, (time.perf_counter() - t0) * 1000)
        results.append(res)
        if on_result is not None:
            on_result(res)
    return SuiteResult(results)
