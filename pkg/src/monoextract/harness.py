"""Seeded experiment runner, report writer and threshold scanner.

An experiment is a JSON object::

    {"name": ..., "schema": 1, "generator": [GenSpec...] | {"corpus": dir} | null,
     "procedure": {"op": ..., "args": {...}, "sweep": {"param": [values]}},
     "trials": int, "seed_base": int, "outputs": "path/prefix"}

Trial ``i`` gets seed ``derive_seed(seed_base, i)`` so it can be replayed
alone. Rows go to ``<outputs>.jsonl``; a per-point summary goes to
``<outputs>.csv``.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from . import io as gio
from .bits import iter_bits
from .classes import is_even_hole_free
from .config import Limits, default_limits
from .errors import MonoExtractError, PreconditionError, RetriesExhausted
from .extraction import (
    EXHAUSTED,
    ko_extract,
    mono_extract,
    mono_extract_k,
    oriented_extract,
    digraph_split,
    verify_outcome,
)
from .generators import GenSpec, burling_profile, gen
from .graph import Digraph, EdgeColouring, Graph, Orientation
from .measures import min_degree
from .oracles import mono_dense_oracle
from .ramsey import (
    bipartite_ramsey_oracle,
    colouring_from_certificate,
    complete_bipartite_colouring,
    find_kss_in_colouring,
    ramsey_oracle,
    tt_extract,
    verify_mono_clique,
)
from .rng import derive_seed, stage_rng

SCHEMA_VERSION = 1
TIMING_KEYS = frozenset({"elapsed_ms"})


class HarnessError(MonoExtractError):
    """A success row failed verification: a bug, so the run is aborted."""


@dataclass
class Experiment:
    name: str
    procedure: dict
    generator: Any = None
    trials: int = 1
    seed_base: int = 0
    outputs: str = "report"
    schema: int = SCHEMA_VERSION

    @classmethod
    def from_json(cls, obj: dict) -> "Experiment":
        if not isinstance(obj, dict):
            raise PreconditionError("experiment must be a JSON object")
        for key in ("name", "procedure"):
            if key not in obj:
                raise PreconditionError(f"experiment is missing {key!r}")
        if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise PreconditionError(f"unsupported experiment schema {obj.get('schema')}")
        proc = obj["procedure"]
        if not isinstance(proc, dict) or proc.get("op") not in OPS:
            raise PreconditionError(f"unknown procedure op {proc.get('op') if isinstance(proc, dict) else proc!r}")
        trials = int(obj.get("trials", 1))
        if trials < 0:
            raise PreconditionError("trials must be non-negative")
        return cls(obj["name"], proc, obj.get("generator"), trials, int(obj.get("seed_base", 0)),
                   obj.get("outputs", obj["name"]))

    @classmethod
    def load(cls, path) -> "Experiment":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"name": self.name, "schema": self.schema, "generator": self.generator, "procedure": self.procedure,
                "trials": self.trials, "seed_base": self.seed_base, "outputs": self.outputs}


@dataclass
class RunSummary:
    rows: list[dict]
    jsonl: Path | None
    csv: Path | None
    failures: int = 0

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0


# -- ops ---------------------------------------------------------------

def _digest(obj) -> str:
    text = gio.serialize(obj) if isinstance(obj, (Graph, Digraph, EdgeColouring)) else json.dumps(obj, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _op_ramsey(inst, args, seed, limits):
    ans = ramsey_oracle(int(args["a"]), int(args["b"]), int(args["n"]), limits)
    if ans.answer:
        verified = ans.exhaustive
    else:
        col = colouring_from_certificate(int(args["n"]), ans.certificate)
        verified = not _has_mono_clique(col, int(args["a"]), int(args["b"]))
    return {"answer": ans.answer, "verified": verified, "success": True,
            "result": ans.to_json(timing=False), "elapsed_ms": ans.elapsed_ms}


def _has_mono_clique(col: EdgeColouring, a: int, b: int) -> bool:
    n = col.base.n
    for c, size in ((1, a), (2, b)):
        for s in itertools.combinations(range(n), size):
            if verify_mono_clique(col, c, s):
                return True
    return False


def _op_bipartite_ramsey(inst, args, seed, limits):
    s, k, t = int(args["s"]), int(args["k"]), int(args["t"])
    ans = bipartite_ramsey_oracle(s, k, t, limits)
    if ans.answer:
        verified = ans.exhaustive
    else:
        verified = find_kss_in_colouring(complete_bipartite_colouring(ans.certificate), s) is None
    return {"answer": ans.answer, "verified": verified, "success": True,
            "result": ans.to_json(timing=False), "elapsed_ms": ans.elapsed_ms}


def _op_tt_extract(inst, args, seed, limits):
    seq = tt_extract(inst, int(args["r"]))
    return {"answer": True, "verified": True, "success": True, "result": {"order": list(seq)}}


def _op_ko(inst, args, seed, limits):
    d = int(args["d"])
    try:
        piece, params, rep = ko_extract(inst, d, seed, int(args.get("max_retries", 64)), bool(args.get("practical", False)))
    except RetriesExhausted as exc:
        return {"answer": False, "verified": True, "success": False, "retries": len(exc.trials),
                "result": {"trials": [t.to_json(False) for t in exc.trials]}}
    adj = inst.adjacency
    a, b = piece.a, piece.b
    window = all(params.lo <= (adj[x] & b).bit_count() <= params.hi for x in iter_bits(a))
    ratio = a.bit_count() >= params.ratio * b.bit_count()
    return {"answer": True, "verified": window and ratio, "success": True, "retries": rep.retries,
            "substitutions": rep.substitutions,
            "result": {"A*": a.bit_count(), "B*": b.bit_count(), "params": params.to_json()}}


def _outcome_row(out, obj, col, d, r=None):
    ok = verify_outcome(out, obj, col, d, r)
    found = out.kind != EXHAUSTED
    return {"answer": out.kind, "verified": ok if found else False, "success": found,
            "retries": len(out.trials), "substitutions": out.params.get("constants", {}).get("substitutions", {}),
            "result": out.to_json(timing=False)}


def _op_mono(inst, args, seed, limits):
    d = int(args["d"])
    mode = args.get("mode", "practical")
    kw = {k: int(args[k]) for k in ("max_retries",) if k in args}
    if inst.k <= 2:
        out = mono_extract(inst.base, inst, d, mode, seed, limits=limits, **kw)
    else:
        out = mono_extract_k(inst.base, inst, d, mode, seed, limits=limits, **kw)
    return _outcome_row(out, inst.base, inst, d)


def _op_oriented(inst, args, seed, limits):
    d, r = int(args["d"]), int(args["r"])
    out = oriented_extract(inst, r, d, args.get("mode", "practical"), seed, limits=limits)
    return _outcome_row(out, inst, None, d, r)


def _op_digraph(inst, args, seed, limits):
    from .graph import digon_colouring
    d = int(args["d"])
    out = digraph_split(inst, d, args.get("mode", "practical"), seed, limits=limits)
    return _outcome_row(out, inst, digon_colouring(inst), d)


def _op_mono_dense_oracle(inst, args, seed, limits):
    w = mono_dense_oracle(inst.base, inst, int(args["d"]), limits)
    return {"answer": w is not None, "verified": True, "success": True,
            "result": {"witness": list(w.vertices) if w else None, "colour": w.colour if w else None}}


def _op_even_hole_free(inst, args, seed, limits):
    return {"answer": is_even_hole_free(inst, limits), "verified": True, "success": True, "result": {}}


def _op_burling_profile(inst, args, seed, limits):
    prof = burling_profile(int(args["level"]), limits)
    return {"answer": prof["triangle_free"], "verified": True, "success": True, "result": prof}


OPS = {
    "ramsey_oracle": _op_ramsey,
    "bipartite_ramsey_oracle": _op_bipartite_ramsey,
    "tt_extract": _op_tt_extract,
    "ko_extract": _op_ko,
    "mono_extract": _op_mono,
    "oriented_extract": _op_oriented,
    "digraph_split": _op_digraph,
    "mono_dense_oracle": _op_mono_dense_oracle,
    "even_hole_free": _op_even_hole_free,
    "burling_profile": _op_burling_profile,
}


# -- running -----------------------------------------------------------

def _points(proc: dict) -> list[dict]:
    sweep = proc.get("sweep") or {}
    keys = sorted(sweep)
    return [dict(zip(keys, vals)) for vals in itertools.product(*(sweep[k] for k in keys))]


def _instances(generator, trial: int, seed_base: int) -> list[tuple[str, Any]]:
    """``(label, instance)`` pairs for one trial."""
    if generator is None:
        return [("none", None)]
    if isinstance(generator, dict) and "corpus" in generator:
        files = sorted(Path(generator["corpus"]).glob("*"))
        return [(f.name, gio.read(f)) for f in files if f.is_file()]
    specs = generator if isinstance(generator, list) else [generator]
    out = []
    for j, raw in enumerate(specs):
        obj = dict(raw)
        if "seed" not in obj:
            obj["seed"] = derive_seed(seed_base, (trial << 16) | j | 1 << 40)
        spec = GenSpec.from_json(obj)
        out.append((spec.family, gen(spec)))
    return out


def _task_list(exp: Experiment) -> list[tuple[int, int, dict]]:
    tasks = []
    idx = 0
    for point in _points(exp.procedure):
        for t in range(exp.trials):
            tasks.append((idx, t, point))
            idx += 1
    return tasks


def _run_task(exp_json: dict, task: tuple[int, int, dict], budget: int | None) -> list[dict]:
    exp = Experiment.from_json(exp_json)
    idx, trial, point = task
    limits = default_limits().with_budget(budget)
    op = OPS[exp.procedure["op"]]
    args = {**exp.procedure.get("args", {}), **point}
    rows = []
    for label, inst in _instances(exp.generator, trial, exp.seed_base):
        seed = derive_seed(exp.seed_base, idx)
        t0 = time.perf_counter()
        try:
            res = op(inst, args, seed, limits)
            error = None
        except MonoExtractError as exc:
            res = {"answer": None, "verified": False, "success": False, "result": {}}
            error = f"{type(exc).__name__}: {exc}"
        elapsed = res.pop("elapsed_ms", None)
        rows.append({
            "schema": SCHEMA_VERSION,
            "experiment": exp.name,
            "trial": idx,
            "point": point,
            "instance": label,
            "seed": seed,
            "input_digest": _digest(inst) if inst is not None else _digest(args),
            "op": exp.procedure["op"],
            "answer": res["answer"],
            "success": res["success"],
            "verified": res["verified"],
            "retries": res.get("retries", 0),
            "substitutions": res.get("substitutions", {}),
            "error": error,
            "result": res["result"],
            "elapsed_ms": round(elapsed if elapsed is not None else (time.perf_counter() - t0) * 1000, 3),
        })
    return rows


def run_experiment(exp: Experiment, outputs: str | Path | None = None, threads: int = 1,
                   budget: int | None = None, write: bool = True) -> RunSummary:
    """Run every (sweep point, trial) pair; write JSONL rows and a CSV summary.

    A success row that fails verification raises ``HarnessError`` after the
    rows gathered so far are written.
    """
    tasks = _task_list(exp)
    exp_json = exp.to_json()
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_task, [exp_json] * len(tasks), tasks, [budget] * len(tasks)))
    else:
        chunks = [_run_task(exp_json, t, budget) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    bad = [r for r in rows if r["success"] and not r["verified"]]
    failures = len(bad) + sum(1 for r in rows if r["error"])
    base = Path(outputs if outputs is not None else exp.outputs)
    jsonl = csvp = None
    if write:
        base.parent.mkdir(parents=True, exist_ok=True)
        jsonl = base.with_name(base.name + ".jsonl")
        csvp = base.with_name(base.name + ".csv")
        jsonl.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
        csvp.write_text(summary_csv(rows))
    summary = RunSummary(rows, jsonl, csvp, failures)
    if bad:
        raise HarnessError(f"{len(bad)} success row(s) failed verification, first: trial {bad[0]['trial']}")
    return summary


def summary_csv(rows: list[dict]) -> str:
    groups: dict[str, list[dict]] = {}
    for r in rows:
        groups.setdefault(json.dumps(r["point"], sort_keys=True), []).append(r)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema", "op", "point", "rows", "successes", "verified", "errors", "answers"])
    for key, rs in groups.items():
        answers = sorted({json.dumps(r["answer"]) for r in rs})
        w.writerow([SCHEMA_VERSION, rs[0]["op"], key, len(rs), sum(r["success"] for r in rs),
                    sum(bool(r["verified"]) for r in rs), sum(bool(r["error"]) for r in rs), ";".join(answers)])
    return buf.getvalue()


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def rows_digest(rows: Iterable[dict]) -> str:
    """SHA-256 of the rows with timing fields removed."""
    h = hashlib.sha256()
    for r in rows:
        h.update(json.dumps(strip_timing(r), sort_keys=True).encode())
        h.update(b"\n")
    return h.hexdigest()


def report_digest(path) -> str:
    return rows_digest(json.loads(line) for line in Path(path).read_text().splitlines() if line.strip())


def canned_experiments() -> dict[str, Path]:
    folder = Path(__file__).with_name("experiments")
    return {p.stem: p for p in sorted(folder.glob("*.json"))}


# -- threshold scan ----------------------------------------------------

@dataclass
class ScanRow:
    instance: str
    n: int
    m: int
    delta: int
    colourings_checked: int
    exhaustive: bool
    witness_free: bool
    certificate: list | None = None


@dataclass
class ScanTable:
    d: int
    rows: list[ScanRow] = field(default_factory=list)

    def by_delta(self) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for r in self.rows:
            e = out.setdefault(r.delta, {"instances": 0, "witness_free": 0, "exhaustive": True})
            e["instances"] += 1
            e["witness_free"] += r.witness_free
            e["exhaustive"] = e["exhaustive"] and r.exhaustive
        return dict(sorted(out.items()))

    @property
    def min_delta_witness_free(self) -> int | None:
        ds = [r.delta for r in self.rows if r.witness_free]
        return min(ds) if ds else None

    @property
    def lower_bound(self) -> int | None:
        """``1 + max delta`` among instances with a witness-free colouring."""
        ds = [r.delta for r in self.rows if r.witness_free]
        return max(ds) + 1 if ds else None

    @property
    def exhaustive(self) -> bool:
        return all(r.exhaustive for r in self.rows)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "label": "exhaustive" if self.exhaustive else "non-exhaustive (randomised colourings)",
            "by_delta": {str(k): v for k, v in self.by_delta().items()},
            "min_delta_witness_free": self.min_delta_witness_free,
            "lower_bound_f2": self.lower_bound,
            "rows": [r.__dict__ for r in self.rows],
        }


def threshold_scan(
    instances: Iterable[Graph] | GenSpec,
    d: int,
    delta_range: tuple[int, int],
    count: int = 20,
    exhaustive_m: int = 14,
    samples: int = 256,
    seed: int = 0,
    limits: Limits | None = None,
) -> ScanTable:
    """Search for 2-colourings with no monochromatic induced subgraph of min degree ``>= d``.

    ``instances`` is a list of graphs or a GenSpec template (``count``
    seeded instances). Colourings are exhaustive (first edge fixed, by
    colour symmetry) when ``m <= exhaustive_m``, otherwise ``samples``
    random ones.
    """
    limits = limits or default_limits()
    lo, hi = delta_range
    if isinstance(instances, GenSpec):
        graphs = [(f"{instances.family}#{i}", gen(GenSpec(instances.family, instances.params, derive_seed(seed, i))))
                  for i in range(count)]
    else:
        graphs = [(f"graph#{i}", g) for i, g in enumerate(instances)]
    table = ScanTable(d)
    for label, g in graphs:
        if g.m == 0:
            continue
        delta = min_degree(g)
        if not lo <= delta <= hi:
            continue
        if g.n > limits.oracle_n:
            raise PreconditionError(f"instance with {g.n} vertices exceeds the oracle limit {limits.oracle_n}")
        m = g.m
        exhaustive = m <= exhaustive_m
        if exhaustive:
            if (1 << (m - 1)) > limits.enumeration_budget:
                raise PreconditionError("colouring enumeration exceeds the budget")
            codes: Iterable[int] = range(1 << (m - 1))
        else:
            rng = stage_rng(seed, f"scan:{label}")
            codes = [int.from_bytes(rng.bytes((m + 7) // 8), "little") & ((1 << m) - 1) for _ in range(samples)]
        checked = 0
        free_cert = None
        for code in codes:
            checked += 1
            col = EdgeColouring(g, 2, [1 + ((code >> i) & 1) for i in range(m)])
            if mono_dense_oracle(g, col, d, limits) is None:
                free_cert = [[u, v, c] for (u, v), c in zip(g.edges, col.colours)]
                break
        table.rows.append(ScanRow(label, g.n, m, delta, checked, exhaustive, free_cert is not None, free_cert))
    return table
