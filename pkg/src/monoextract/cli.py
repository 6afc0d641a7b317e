"""``monoextract`` command line."""
from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import click

from . import io as gio
from .classes import (
    find_odd_signing,
    is_even_hole_free,
    orientation_search,
    verify_odd_signing,
)
from .config import Limits, default_limits
from .errors import MonoExtractError
from .extraction import (
    MODES,
    EXHAUSTED,
    digraph_split,
    mono_extract,
    mono_extract_k,
    oriented_extract,
    verify_outcome,
)
from .generators import GenSpec, generate
from .graph import Digraph, EdgeColouring, Graph, Orientation, digon_colouring
from .harness import Experiment, HarnessError, canned_experiments, run_experiment, threshold_scan
from .measures import (
    avg_degree,
    biclique_number,
    chromatic_number,
    clique_number,
    degeneracy,
    min_degree,
)
from .densest import max_avg_degree
from .oracles import OracleStats, mono_dense_oracle
from .ramsey import bipartite_ramsey_oracle, ramsey_oracle


class Ctx:
    def __init__(self, seed: int, threads: int, fmt: str, budget: int | None):
        self.seed = seed
        self.threads = threads
        self.format = fmt
        self.limits: Limits = default_limits().with_budget(budget)
        self.budget = budget


def _flatten(obj: dict) -> dict:
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in obj.items()}


def emit(ctx: Ctx, obj, out: str | None = None) -> None:
    """Write ``obj`` as JSON or CSV to ``out`` or stdout."""
    if ctx.format == "csv":
        rows = obj if isinstance(obj, list) else [obj]
        buf = _io.StringIO()
        rows = [_flatten(r) for r in rows]
        fields = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _read(path: str):
    try:
        return gio.read(path)
    except OSError as exc:
        raise click.FileError(path, str(exc)) from None


def _read_graph(path: str) -> Graph:
    obj = _read(path)
    if isinstance(obj, EdgeColouring):
        return obj.base
    if not isinstance(obj, Graph):
        raise click.UsageError(f"{path} holds a digraph, a graph was expected")
    return obj


def _seed(ctx: Ctx, seed: int | None) -> int:
    return ctx.seed if seed is None else seed


class _Group(click.Group):
    """Library errors become a one-line message and exit code 3."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except MonoExtractError as exc:
            err = click.ClickException(f"{type(exc).__name__}: {exc}")
            err.exit_code = 3
            raise err from None


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed (64-bit).")
@click.option("--threads", type=int, default=1, show_default=True, help="Worker processes for experiments.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--budget", type=int, default=None, help="Enumeration budget (overrides MONOEXTRACT_BUDGET).")
@click.pass_context
def main(click_ctx, seed, threads, fmt, budget):
    """Monochromatic and antidirected dense induced subgraph extraction."""
    click_ctx.obj = Ctx(seed, threads, fmt, budget)


@main.command()
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def measure(ctx: Ctx, path):
    """Degree, degeneracy, clique, biclique and chromatic measures of a graph."""
    g = _read_graph(path)
    out = {
        "n": g.n,
        "m": g.m,
        "min_degree": min_degree(g),
        "avg_degree": str(avg_degree(g)),
        "max_avg_degree": str(max_avg_degree(g)),
        "degeneracy": degeneracy(g).value,
    }
    for key, fn in (("clique_number", clique_number), ("biclique_number", biclique_number),
                    ("chromatic_number", chromatic_number)):
        try:
            out[key] = fn(g, ctx.limits)
        except MonoExtractError as exc:
            out[key] = None
            out.setdefault("skipped", {})[key] = str(exc)
    emit(ctx, out)


# -- extract -----------------------------------------------------------

_extract_opts = [
    click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False)),
    click.option("--d", type=int, required=True),
    click.option("--mode", type=click.Choice(MODES), default="practical", show_default=True),
    click.option("--seed", type=int, default=None),
    click.option("--max-retries", type=int, default=None),
    click.option("--out", default=None, help="json, csv, or an output file (default: stdout in --format)."),
]


def _with(opts):
    def deco(fn):
        for o in reversed(opts):
            fn = o(fn)
        return fn
    return deco


@main.group()
def extract():
    """Run an extractor and print a verified outcome."""


def _finish(ctx: Ctx, outcome, ok: bool, out):
    if out in ("json", "csv"):
        ctx.format, out = out, None
    emit(ctx, outcome.to_json(), out)
    if outcome.kind != EXHAUSTED and not ok:
        raise SystemExit(2)


@extract.command("mono")
@_with(_extract_opts)
@click.pass_obj
def extract_mono(ctx: Ctx, path, d, mode, seed, max_retries, out):
    """Monochromatic induced subgraph with minimum degree >= d."""
    col = _read(path)
    if not isinstance(col, EdgeColouring):
        raise click.UsageError("extract mono needs a coloured graph file")
    fn = mono_extract if col.k <= 2 else mono_extract_k
    kw = {"max_retries": max_retries} if max_retries is not None else {}
    outcome = fn(col.base, col, d, mode, _seed(ctx, seed), limits=ctx.limits, **kw)
    _finish(ctx, outcome, verify_outcome(outcome, col.base, col, d), out)


@extract.command("oriented")
@_with(_extract_opts)
@click.option("--r", type=int, required=True)
@click.pass_obj
def extract_oriented(ctx: Ctx, path, d, mode, seed, max_retries, out, r):
    """Transitive tournament TT_r or an antidirected induced subgraph with minimum degree >= d."""
    dg = _read(path)
    if not isinstance(dg, Digraph) or not dg.is_oriented():
        raise click.UsageError("extract oriented needs an oriented digraph file")
    dg = dg if isinstance(dg, Orientation) else Orientation(dg.n, dg.arcs)
    outcome = oriented_extract(dg, r, d, mode, _seed(ctx, seed), limits=ctx.limits)
    _finish(ctx, outcome, verify_outcome(outcome, dg, None, d, r), out)


@extract.command("digraph")
@_with(_extract_opts)
@click.pass_obj
def extract_digraph(ctx: Ctx, path, d, mode, seed, max_retries, out):
    """Digon / simple-arc split of a digraph."""
    dg = _read(path)
    if not isinstance(dg, Digraph):
        raise click.UsageError("extract digraph needs a digraph file")
    outcome = digraph_split(dg, d, mode, _seed(ctx, seed), limits=ctx.limits)
    _finish(ctx, outcome, verify_outcome(outcome, dg, digon_colouring(dg), d), out)


# -- oracle ------------------------------------------------------------

@main.group()
def oracle():
    """Exhaustive ground-truth searches."""


@oracle.command("ramsey")
@click.option("--a", type=int, required=True)
@click.option("--b", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.pass_obj
def oracle_ramsey(ctx: Ctx, a, b, n):
    """Does every 2-colouring of K_n contain a colour-1 K_a or a colour-2 K_b?"""
    emit(ctx, ramsey_oracle(a, b, n, ctx.limits).to_json())


@oracle.command("bipartite-ramsey")
@click.option("--s", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.pass_obj
def oracle_bipartite(ctx: Ctx, s, k, t):
    """Does every k-colouring of K_{t,t} contain a monochromatic K_{s,s}?"""
    emit(ctx, bipartite_ramsey_oracle(s, k, t, ctx.limits).to_json())


@oracle.command("even-hole-free")
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def oracle_ehf(ctx: Ctx, path):
    """Is the graph free of induced cycles of even length >= 4?"""
    g = _read_graph(path)
    emit(ctx, {"query": {"input": path}, "answer": is_even_hole_free(g, ctx.limits), "exhaustive": True})


@oracle.command("orientation-without")
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--forbidden", multiple=True, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default=None, help="Write the orientation found here.")
@click.pass_obj
def oracle_orient(ctx: Ctx, path, forbidden, out):
    """An orientation with no induced copy of any forbidden digraph."""
    g = _read_graph(path)
    fam = []
    for f in forbidden:
        dg = _read(f)
        if not isinstance(dg, Digraph):
            raise click.UsageError(f"{f} is not a digraph file")
        fam.append(dg)
    res = orientation_search(g, fam, ctx.limits)
    if out and res.orientation is not None:
        gio.write(res.orientation, out)
    emit(ctx, {
        "query": {"input": path, "forbidden": list(forbidden)},
        "answer": res.orientation is not None,
        "orientation": [list(a) for a in res.orientation.arcs] if res.orientation is not None else None,
        "nodes": res.nodes,
        "converse_fixed": res.converse_fixed,
        "exhaustive": True,
    })


@oracle.command("mono-dense")
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--colours", "colours", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Coloured graph file for the same graph (default: --input itself).")
@click.option("--d", type=int, required=True)
@click.pass_obj
def oracle_mono(ctx: Ctx, path, colours, d):
    """Maximum monochromatic induced subgraph with minimum degree >= d."""
    col = _read(colours or path)
    if not isinstance(col, EdgeColouring):
        raise click.UsageError("mono-dense needs a coloured graph")
    if colours and _read_graph(path) != col.base:
        raise click.UsageError("--colours does not colour the --input graph")
    stats = OracleStats()
    w = mono_dense_oracle(col.base, col, d, ctx.limits, stats)
    emit(ctx, {"query": {"input": path, "d": d}, "answer": w is not None,
               "witness_vertices": list(w.vertices) if w else None, "colour": w.colour if w else None,
               "nodes": stats.nodes, "exhaustive": stats.exhaustive, "elapsed_ms": round(stats.elapsed_ms, 3)})


# -- verify ------------------------------------------------------------

@main.group()
def verify():
    """Verifiers and the acceptance suite."""


@verify.command("odd-signing")
@click.option("--graph", "gpath", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--signing", "spath", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Signing file; without it a signing is searched for.")
@click.pass_obj
def verify_signing(ctx: Ctx, gpath, spath):
    """Check (or find) a 0/1 edge labelling with every induced cycle odd."""
    g = _read_graph(gpath)
    if spath:
        s = gio.parse_signing(Path(spath).read_text(), g)
        ok = verify_odd_signing(g, s, ctx.limits)
        emit(ctx, {"graph": gpath, "signing": spath, "answer": ok})
        if not ok:
            raise SystemExit(1)
    else:
        s = find_odd_signing(g, ctx.limits)
        emit(ctx, {"graph": gpath, "answer": s is not None,
                   "signing": [[u, v, b] for (u, v), b in zip(g.edges, s.labels)] if s else None})


@verify.command("paper-suite")
@click.option("--filter", "filt", default=None, help="Comma-separated check ids or tags, e.g. 'ramsey'.")
@click.option("--fixture", multiple=True, help="Override a fixture: name=path.")
@click.option("--corpus-seconds", type=float, default=None,
              help="Time limit for the exhaustive corpus of check 7; 0 means none.")
@click.pass_obj
def verify_suite(ctx: Ctx, filt, fixture, corpus_seconds):
    """Run the acceptance checks; exit 1 if any fails."""
    from .suite import verify_paper_suite

    fx = {}
    for item in fixture:
        name, _, p = item.partition("=")
        fx[name] = Path(p).read_text()
    if corpus_seconds is not None:
        fx["corpus_seconds"] = corpus_seconds
    res = verify_paper_suite(filt, fx, on_result=lambda r: click.echo(r.line(), err=True))
    emit(ctx, res.to_json() if ctx.format == "json" else
         [{"id": r.id, "name": r.name, "passed": r.passed, "summary": r.detail.get("summary", "")} for r in res.results])
    if not res.passed:
        raise SystemExit(1)


# -- generate / experiment ---------------------------------------------

def _parse_kv(items) -> dict:
    out = {}
    for item in items:
        k, sep, v = item.partition("=")
        if not sep:
            raise click.UsageError(f"parameter {item!r} is not key=value")
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


@main.command("generate")
@click.argument("family")
@click.argument("params", nargs=-1)
@click.option("--seed", type=int, default=None)
@click.option("--out", default=None, help="Instance file (default stdout).")
@click.pass_obj
def generate_cmd(ctx: Ctx, family, params, seed, out):
    """Seeded instance generator: FAMILY key=value ..."""
    spec = GenSpec(family, _parse_kv(params), _seed(ctx, seed))
    obj, info = generate(spec, ctx.limits)
    text = gio.serialize(obj)
    if out:
        Path(out).write_text(text)
        emit(ctx, {"spec": spec.to_json(), "out": out, **info})
    else:
        click.echo(text, nl=False)


@main.group()
def experiment():
    """Seeded experiments and threshold scans."""


@experiment.command("run")
@click.argument("spec", required=True)
@click.option("--out", default=None, help="Report prefix (default: the experiment's outputs field).")
@click.option("--seed-base", type=int, default=None, help="Override the experiment's seed_base.")
@click.pass_obj
def experiment_run(ctx: Ctx, spec, out, seed_base):
    """Run an experiment file (or a canned experiment name)."""
    canned = canned_experiments()
    path = canned[spec] if spec in canned and not Path(spec).exists() else spec
    exp = Experiment.load(path)
    if seed_base is not None:
        exp.seed_base = seed_base
    try:
        summary = run_experiment(exp, out, threads=ctx.threads, budget=ctx.budget)
    except HarnessError as exc:
        click.echo(f"verification failure: {exc}", err=True)
        raise SystemExit(1)
    emit(ctx, {"experiment": exp.name, "rows": len(summary.rows), "failures": summary.failures,
               "jsonl": str(summary.jsonl), "csv": str(summary.csv)})
    raise SystemExit(summary.exit_code)


@experiment.command("list")
@click.pass_obj
def experiment_list(ctx: Ctx):
    """Canned experiments shipped with the package."""
    emit(ctx, [{"name": k, "path": str(v)} for k, v in canned_experiments().items()])


@experiment.command("scan")
@click.argument("family")
@click.argument("params", nargs=-1)
@click.option("--d", type=int, required=True)
@click.option("--delta-min", type=int, default=0)
@click.option("--delta-max", type=int, default=64)
@click.option("--count", type=int, default=20, show_default=True)
@click.option("--samples", type=int, default=256, show_default=True)
@click.pass_obj
def experiment_scan(ctx: Ctx, family, params, d, delta_min, delta_max, count, samples):
    """Empirical table of witness-free colourings by minimum degree."""
    spec = GenSpec(family, _parse_kv(params), ctx.seed)
    table = threshold_scan(spec, d, (delta_min, delta_max), count=count, samples=samples, seed=ctx.seed,
                           limits=ctx.limits)
    if ctx.format == "csv":
        emit(ctx, [{"delta": k, **v} for k, v in table.by_delta().items()])
    else:
        emit(ctx, table.to_json())


if __name__ == "__main__":
    main()
