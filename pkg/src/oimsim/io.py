"""Problem file formats: G-set graphs, native Ising JSON, best-known catalog.

The G-set layout is the de-facto rudy format: a header line "n m" followed
by m lines "u v w" with 1-based endpoints. Indices are converted to 0-based
at this boundary and nowhere else. The canonical writer emits edges sorted
by (u, v) with single spaces and LF endings, so parse -> write -> parse is
exact and a second write is byte-identical.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .problems import IsingProblem, WeightedGraph

__all__ = [
    "parse_gset", "write_gset", "load_gset",
    "read_ising_json", "write_ising_json", "load_ising_json",
    "BestKnownCatalog", "load_catalog", "default_catalog",
]


def _decode(text):
    if isinstance(text, bytes):
        try:
            return text.decode("ascii")
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not ASCII: {e}") from None
    return text


def parse_gset(text, name=None):
    """Parse G-set/rudy text (str or bytes) into a WeightedGraph."""
    lines = _decode(text).splitlines()
    numbered = [(k + 1, ln.split()) for k, ln in enumerate(lines) if ln.strip()]
    if not numbered:
        raise ParseError("empty input", line=1, path=name)

    def ints(tokens, lineno, count):
        if len(tokens) != count:
            raise ParseError(f"expected {count} integers, got {len(tokens)} tokens",
                             line=lineno, path=name)
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-integer token in {tokens!r}",
                             line=lineno, path=name) from None

    header_line, header = numbered[0]
    n, m = ints(header, header_line, 2)
    if n < 1:
        raise ParseError("vertex count must be positive", line=header_line, path=name)
    if m < 0:
        raise ParseError("edge count must be nonnegative", line=header_line, path=name)
    body = numbered[1:]
    if len(body) != m:
        raise ParseError(f"header declares {m} edges but file has {len(body)} edge lines",
                         line=header_line, path=name)

    edges = []
    seen = set()
    for lineno, tokens in body:
        u, v, w = ints(tokens, lineno, 3)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex index out of range 1..{n}", line=lineno, path=name)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno, path=name)
        if w == 0:
            raise ParseError("zero edge weight", line=lineno, path=name)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key[0]} {key[1]}", line=lineno, path=name)
        seen.add(key)
        edges.append((key[0] - 1, key[1] - 1, w))
    return WeightedGraph(n, edges, name=name)


def write_gset(graph):
    """Canonical G-set text for a graph (1-based, sorted, LF endings)."""
    eu, ev, ew = graph.edge_arrays
    out = [f"{graph.n_vertices} {graph.num_edges}\n"]
    out.extend(f"{u + 1} {v + 1} {w}\n" for u, v, w in zip(eu, ev, ew))
    return "".join(out)


def load_gset(path):
    with open(path, "rb") as fh:
        data = fh.read()
    name = str(path).rsplit("/", 1)[-1]
    return parse_gset(data, name=name)


# --- native Ising JSON ------------------------------------------------------

def read_ising_json(text):
    """Parse {"n", "edges", "h"?, "name"?} JSON into an IsingProblem."""
    try:
        obj = json.loads(_decode(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object (at $)")

    def fail(path, msg):
        raise ParseError(f"{msg} (at {path})")

    if "n" not in obj:
        fail("$.n", "missing required key")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        fail("$.n", "n must be a positive integer")
    edges_raw = obj.get("edges", [])
    if not isinstance(edges_raw, list):
        fail("$.edges", "edges must be a list")
    edges = []
    for k, entry in enumerate(edges_raw):
        if (not isinstance(entry, list)) or len(entry) != 3:
            fail(f"$.edges[{k}]", "edge must be [i, j, J]")
        i, j, J = entry
        if not isinstance(i, int) or not isinstance(j, int) or isinstance(J, (str, bool)):
            fail(f"$.edges[{k}]", "edge must be [int, int, number]")
        if not isinstance(J, (int, float)):
            fail(f"$.edges[{k}]", "coupling must be a number")
        if i == j:
            fail(f"$.edges[{k}]", f"self-coupling at index {i}")
        if not (0 <= i < n and 0 <= j < n):
            fail(f"$.edges[{k}]", f"index out of range [0, {n})")
        edges.append((i, j, J))
    h = obj.get("h")
    if h is not None:
        if not isinstance(h, list) or len(h) != n:
            fail("$.h", f"h must be a list of {n} numbers")
        if any(isinstance(x, (str, bool)) or not isinstance(x, (int, float)) for x in h):
            fail("$.h", "h entries must be numbers")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        fail("$.name", "name must be a string")
    unknown = set(obj) - {"n", "edges", "h", "name"}
    if unknown:
        fail(f"$.{sorted(unknown)[0]}", "unknown key")
    try:
        return IsingProblem(n, edges, fields=h, name=name)
    except Exception as e:
        raise ParseError(str(e)) from None


def _num(x):
    xf = float(x)
    return int(xf) if xf == int(xf) else xf


def write_ising_json(problem):
    """Canonical JSON text; h is omitted when all-zero, integers stay integers."""
    ei, ej, jv = problem.edge_arrays
    obj = {"n": int(problem.n),
           "edges": [[int(i), int(j), _num(v)] for i, j, v in zip(ei, ej, jv)]}
    if problem.has_fields:
        obj["h"] = [_num(v) for v in problem.h]
    if problem.name is not None:
        obj["name"] = problem.name
    return json.dumps(obj, separators=(", ", ": ")) + "\n"


def load_ising_json(path):
    with open(path, "rb") as fh:
        return read_ising_json(fh.read())


# --- best-known catalog ------------------------------------------------------

@dataclass(frozen=True)
class BestKnownCatalog:
    """Instance name -> (best known cut, source) reference table."""

    entries: dict

    def best_cut(self, name):
        return self.entries[name][0] if name in self.entries else None

    def __contains__(self, name):
        return name in self.entries

    def __len__(self):
        return len(self.entries)


def load_catalog(text):
    """Parse 'name,best_cut,source' CSV into a BestKnownCatalog."""
    reader = csv.reader(_stdio.StringIO(_decode(text)))
    rows = [r for r in reader if r]
    if not rows or [c.strip() for c in rows[0]] != ["name", "best_cut", "source"]:
        raise ParseError("catalog header must be 'name,best_cut,source'", line=1)
    entries = {}
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", line=k)
        name, cut_s, source = (c.strip() for c in row)
        try:
            cut = int(cut_s)
        except ValueError:
            raise ParseError(f"best_cut must be an integer, got {cut_s!r}", line=k) from None
        if cut <= 0:
            raise ParseError("best_cut must be positive", line=k)
        if name in entries:
            raise ParseError(f"duplicate instance name {name!r}", line=k)
        entries[name] = (cut, source)
    return BestKnownCatalog(entries)


def default_catalog():
    """The catalog shipped with the package (published benchmark values)."""
    from importlib import resources
    text = resources.files("oimsim").joinpath("data/gset_best_known.csv").read_text()
    return load_catalog(text)
