"""Edge-list and labelling JSON input/output."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import GraphError
from .graph import Graph


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` starts a comment."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise GraphError("empty edge list: expected a header 'n m'")

    def ints(lineno: int, body: str) -> tuple[int, int]:
        parts = body.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {body!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {body!r}") from None

    n, m = ints(*lines[0])
    if n < 0 or m < 0:
        raise GraphError(f"line {lines[0][0]}: negative count")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges but {len(body)} edge lines follow")
    edges = np.zeros((m, 2), dtype=np.int64)
    seen: dict[tuple[int, int], int] = {}
    for i, (lineno, text_line) in enumerate(body):
        u, v = ints(lineno, text_line)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: vertex out of range [0, {n})")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {key} (first on line {seen[key]})")
        seen[key] = lineno
        edges[i] = (u, v)
    return Graph(n, edges, check=False)


def read_graph(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph) -> str:
    body = "\n".join(f"{u} {v}" for u, v in g.edges.tolist())
    return f"{g.n} {g.m}\n{body}\n" if g.m else f"{g.n} 0\n"


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g))


def labelling_document(g: Graph, labels, sums, config: dict, verified: bool) -> dict:
    labels = np.asarray(labels, dtype=np.int64)
    return {
        "n": g.n,
        "m": g.m,
        "labels": [[u, v, lab] for (u, v), lab in zip(g.edges.tolist(), labels.tolist())],
        "sums": np.asarray(sums, dtype=np.int64).tolist(),
        "config": config,
        "verified": bool(verified),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"), sort_keys=False) + "\n"


def write_labelling(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc))


def read_labelling(path, g: Graph) -> np.ndarray:
    """Labels from a labelling JSON document, aligned with ``g``'s edge ids."""
    try:
        doc = json.loads(Path(path).read_text())
        rows = doc["labels"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise GraphError(f"cannot read labelling {path}: {exc}") from None
    if len(rows) != g.m:
        raise GraphError(f"labelling has {len(rows)} edges, graph has {g.m}")
    try:
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, 3)
    except ValueError:
        raise GraphError("labelling rows must be [u, v, label]") from None
    ids = g.edge_ids(arr[:, :2])
    if np.unique(ids).size != len(ids):
        raise GraphError("labelling lists an edge twice")
    out = np.zeros(g.m, dtype=np.int64)
    out[ids] = arr[:, 2]
    return out
