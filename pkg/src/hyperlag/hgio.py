"""Reading and writing hypergraphs.

Text format (``.hg``): optional ``#`` comment lines, a header line
``r=<int> n=<int>``, then one edge per line as space-separated vertex ids.
Writers always emit canonical sorted form.  A JSON mirror with fields
``r``, ``n``, ``edges`` serves machine exchange.
"""

from __future__ import annotations

import json
from pathlib import Path

from .hypergraph import Hypergraph, new


class HgParseError(ValueError):
    """Parse failure with 1-based line/column diagnostics."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_hg(text: str) -> Hypergraph:
    lines = text.splitlines()
    header = None
    header_no = 0
    edges = []
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line
            header_no = no
            continue
        verts = []
        col = 1
        for tok in raw.split():
            col = raw.index(tok, col - 1) + 1
            try:
                verts.append(int(tok))
            except ValueError:
                raise HgParseError(f"expected a vertex id, got {tok!r}", no, col)
            col += len(tok)
        edges.append((no, verts))
    if header is None:
        raise HgParseError("missing header line 'r=<int> n=<int>'", max(1, len(lines)))
    parts = header.split()
    vals = {}
    col = 1
    for part in parts:
        if "=" not in part:
            raise HgParseError(f"malformed header field {part!r}", header_no, col)
        key, _, sval = part.partition("=")
        try:
            vals[key] = int(sval)
        except ValueError:
            raise HgParseError(f"header field {part!r} is not an integer", header_no, col)
        col += len(part) + 1
    if "r" not in vals or "n" not in vals:
        raise HgParseError("header must define both r= and n=", header_no)
    try:
        return new(vals["r"], vals["n"], [vs for _, vs in edges])
    except ValueError as exc:
        bad = str(exc)
        for no, vs in edges:
            if all(str(v) in bad for v in vs):
                raise HgParseError(bad, no) from exc
        raise HgParseError(bad, header_no) from exc


def emit_hg(g: Hypergraph, comment: str | None = None) -> str:
    out = []
    if comment:
        for line in comment.splitlines():
            out.append(f"# {line}")
    out.append(f"r={g.r} n={g.n}")
    for e in g.edges:
        out.append(" ".join(str(v) for v in e))
    return "\n".join(out) + "\n"


def to_json_obj(g: Hypergraph) -> dict:
    return {"r": g.r, "n": g.n, "edges": [list(e) for e in g.edges]}


def from_json_obj(obj) -> Hypergraph:
    try:
        return new(int(obj["r"]), int(obj["n"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"hypergraph JSON needs fields r, n, edges: {exc}") from exc


def load(path) -> Hypergraph:
    """Load from a .hg or .json file, dispatching on suffix."""
    p = Path(path)
    text = p.read_text()
    if p.suffix.lower() == ".json":
        return from_json_obj(json.loads(text))
    return parse_hg(text)


def save(g: Hypergraph, path, comment: str | None = None) -> None:
    p = Path(path)
    if p.suffix.lower() == ".json":
        p.write_text(json.dumps(to_json_obj(g), indent=1) + "\n")
    else:
        p.write_text(emit_hg(g, comment))
