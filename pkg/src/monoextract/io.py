"""Plain-text format for graphs, colourings, digraphs and signings.

::

    g <n> <m> [k]      header; k present iff the edges carry colours
    u v [c]            one edge per line, 0-based, u < v
    d <n> <m>          digraph header
    u v                one arc u -> v per line

Anything after ``#`` is a comment. Serialisation writes edges in
lexicographic order so ``parse(serialize(x)) == x`` byte for byte.
"""
from __future__ import annotations

from pathlib import Path
from typing import Union

from .errors import FormatError, PreconditionError
from .graph import Digraph, EdgeColouring, Graph, Orientation

Parsed = Union[Graph, EdgeColouring, Digraph]


def _tokens(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


def _ints(row: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in row]
    except ValueError:
        raise FormatError(f"record {lineno}: expected integers, got {' '.join(row)!r}") from None


def parse(text: str) -> Parsed:
    rows = _tokens(text)
    if not rows:
        raise FormatError("empty input")
    head, body = rows[0], rows[1:]
    kind = head[0]
    nums = _ints(head[1:], 0)
    try:
        if kind == "g":
            if len(nums) not in (2, 3):
                raise FormatError("graph header is 'g <n> <m> [k]'")
            n, m = nums[0], nums[1]
            if len(body) != m:
                raise FormatError(f"header says {m} edges, found {len(body)}")
            width = 3 if len(nums) == 3 else 2
            recs = []
            for i, row in enumerate(body, 1):
                vals = _ints(row, i)
                if len(vals) != width:
                    raise FormatError(f"record {i}: expected {width} fields")
                if vals[0] >= vals[1]:
                    raise FormatError(f"record {i}: endpoints must satisfy u < v")
                recs.append(vals)
            g = Graph(n, [(r[0], r[1]) for r in recs])
            if width == 2:
                return g
            return EdgeColouring(g, nums[2], {(r[0], r[1]): r[2] for r in recs})
        if kind == "d":
            if len(nums) != 2:
                raise FormatError("digraph header is 'd <n> <m>'")
            n, m = nums
            if len(body) != m:
                raise FormatError(f"header says {m} arcs, found {len(body)}")
            arcs = []
            for i, row in enumerate(body, 1):
                vals = _ints(row, i)
                if len(vals) != 2:
                    raise FormatError(f"record {i}: expected 2 fields")
                arcs.append((vals[0], vals[1]))
            d = Digraph(n, arcs)
            return Orientation(n, arcs) if d.is_oriented() else d
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unknown header {kind!r}")


def serialize(obj: Parsed) -> str:
    if isinstance(obj, EdgeColouring):
        g = obj.base
        lines = [f"g {g.n} {g.m} {obj.k}"]
        lines += [f"{u} {v} {c}" for (u, v), c in zip(g.edges, obj.colours)]
    elif isinstance(obj, Graph):
        lines = [f"g {obj.n} {obj.m}"] + [f"{u} {v}" for (u, v) in obj.edges]
    elif isinstance(obj, Digraph):
        lines = [f"d {obj.n} {len(obj.arcs)}"] + [f"{u} {v}" for (u, v) in obj.arcs]
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def parse_signing(text: str, g: Graph):
    """Signing file: one ``u v bit`` line per edge of ``g``."""
    from .classes import Signing

    labels = {}
    for i, row in enumerate(_tokens(text), 1):
        vals = _ints(row, i)
        if len(vals) != 3 or vals[2] not in (0, 1):
            raise FormatError(f"record {i}: expected 'u v bit'")
        u, v = sorted(vals[:2])
        labels[(u, v)] = vals[2]
    try:
        return Signing(g, labels)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None


def serialize_signing(s) -> str:
    return "".join(f"{u} {v} {b}\n" for (u, v), b in zip(s.base.edges, s.labels))


def read(path: Union[str, Path]) -> Parsed:
    return parse(Path(path).read_text())


def write(obj: Parsed, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(obj))
