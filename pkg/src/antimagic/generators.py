"""Seeded random and structured graph generators."""

from __future__ import annotations

import re

import numpy as np

from .errors import GraphError
from .graph import Graph
from .rng import as_rng

_DENSE_LIMIT = 20000


def _pairs_from_index(n: int, idx: np.ndarray) -> np.ndarray:
    """Map linear indices of the strict upper triangle (row-major) to pairs."""
    idx = np.asarray(idx, dtype=np.int64)
    # row i starts at i*n - i*(i+1)/2
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * idx.astype(float))) / 2).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    # guard against floating error at row boundaries
    over = idx < start
    i[over] -= 1
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    under = idx >= nxt
    i[under] += 1
    start = i * n - i * (i + 1) // 2
    j = idx - start + i + 1
    return np.stack([i, j], axis=1)


def gnp(n: int, p: float, seed=0) -> Graph:
    """Erdos-Renyi G(n, p)."""
    if not 0 <= p <= 1:
        raise GraphError("p must lie in [0, 1]")
    rng = as_rng(seed)
    if n < 2 or p == 0:
        return Graph(n, check=False)
    if n <= _DENSE_LIMIT:
        parts = []
        block = max(1, 2_000_000 // n)
        for lo in range(0, n, block):
            hi = min(n, lo + block)
            mat = rng.random((hi - lo, n)) < p
            rows, cols = np.nonzero(mat)
            rows += lo
            keep = cols > rows
            parts.append(np.stack([rows[keep], cols[keep]], axis=1))
        return Graph(n, np.concatenate(parts), check=False)
    total = n * (n - 1) // 2
    m = rng.binomial(total, p)
    idx = np.sort(rng.choice(total, size=m, replace=False))
    return Graph(n, _pairs_from_index(n, idx), check=False)


def min_degree_graph(n: int, delta: int, seed=0) -> Graph:
    """G(n, delta/(n-1)) with deficient vertices topped up to degree ``delta``.

    Each vertex below ``delta`` (ascending) gets edges to uniformly random
    non-neighbours until it reaches ``delta``.
    """
    if delta >= n:
        raise GraphError("delta must be below n")
    rng = as_rng(seed)
    g = gnp(n, delta / (n - 1), rng)
    deg = g.degree.astype(np.int64).copy()
    adj = np.zeros((n, n), dtype=bool) if n <= _DENSE_LIMIT else None
    if adj is None:
        nbrs = [set(g.neighbours(v).tolist()) for v in range(n)]
    else:
        adj[g.edges[:, 0], g.edges[:, 1]] = True
        adj[g.edges[:, 1], g.edges[:, 0]] = True
    extra = []
    for v in np.flatnonzero(deg < delta).tolist():
        while deg[v] < delta:
            need = int(delta - deg[v])
            cand = rng.integers(0, n, size=2 * need + 8)
            for w in cand.tolist():
                if deg[v] >= delta:
                    break
                linked = adj[v, w] if adj is not None else w in nbrs[v]
                if w == v or linked:
                    continue
                if adj is not None:
                    adj[v, w] = adj[w, v] = True
                else:
                    nbrs[v].add(w)
                    nbrs[w].add(v)
                deg[v] += 1
                deg[w] += 1
                extra.append((min(v, w), max(v, w)))
    edges = np.concatenate([g.edges, np.asarray(extra, dtype=np.int64).reshape(-1, 2)])
    return Graph(n, edges, check=False)


def matching(k: int) -> Graph:
    return Graph(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])


def stars(*sizes: int) -> Graph:
    """Disjoint stars with the given numbers of leaves."""
    edges, base = [], 0
    for s in sizes:
        edges.extend((base, base + j) for j in range(1, s + 1))
        base += s + 1
    return Graph(base, edges)


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    iu = np.triu_indices(n, 1)
    return Graph(n, np.stack(iu, axis=1), check=False)


def dense_with_shell(n_core: int, p: float, paths: int, length: int, seed=0) -> Graph:
    """G(n_core, p) plus ``paths`` pendant paths of ``length`` new vertices.

    Each path hangs from a random core vertex, so the shell vertices have
    degree at most 2 and the dense part is the high-degree core.
    """
    rng = as_rng(seed)
    core = gnp(n_core, p, rng)
    anchors = rng.integers(0, n_core, size=paths)
    extra, nxt = [], n_core
    for a in anchors.tolist():
        prev = a
        for _ in range(length):
            extra.append((prev, nxt))
            prev = nxt
            nxt += 1
    edges = np.concatenate([core.edges, np.asarray(extra, dtype=np.int64).reshape(-1, 2)])
    return Graph(nxt, edges, check=False)


_SPEC = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$")

GENERATORS = {
    "gnp": gnp,
    "min_degree": min_degree_graph,
    "matching": matching,
    "stars": stars,
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "dense_shell": dense_with_shell,
}
_SEEDED = {"gnp", "min_degree", "dense_shell"}


def from_spec(spec: str, seed: int = 0) -> Graph:
    """Build a graph from a spec string such as ``"min_degree(4000, 1700)"``."""
    m = _SPEC.match(spec)
    if not m or m.group(1) not in GENERATORS:
        raise GraphError(f"unknown generator spec {spec!r}; known: {', '.join(sorted(GENERATORS))}")
    name, raw = m.group(1), m.group(2)
    args = []
    for tok in filter(None, (t.strip() for t in raw.split(","))):
        try:
            args.append(int(tok))
        except ValueError:
            try:
                args.append(float(tok))
            except ValueError:
                raise GraphError(f"bad generator argument {tok!r}") from None
    try:
        if name in _SEEDED:
            return GENERATORS[name](*args, seed=seed)
        return GENERATORS[name](*args)
    except TypeError as exc:
        raise GraphError(f"bad arguments for {name}: {exc}") from None
