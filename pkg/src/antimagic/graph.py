"""Graph containers and the structural queries used by the labelling routines.

Vertices are the integers ``0..n-1``. Every edge has a stable integer id (its
position in the edge array), so constructions can recolour or swap specific
edges without ambiguity. Graph objects are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc
from scipy.sparse.csgraph import minimum_spanning_tree

from .errors import GraphError


def as_vertex_mask(n: int, vertices) -> np.ndarray:
    """Boolean mask of length ``n`` for a vertex collection (mask or indices)."""
    if vertices is None:
        return np.zeros(n, dtype=bool)
    arr = np.asarray(vertices)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise GraphError(f"vertex mask has shape {arr.shape}, expected ({n},)")
        return arr.copy()
    arr = arr.astype(np.int64, copy=False).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError(f"vertex index out of range [0, {n})")
    mask = np.zeros(n, dtype=bool)
    mask[arr] = True
    return mask


def as_vertex_array(n: int, vertices) -> np.ndarray:
    """Sorted unique index array for a vertex collection (mask or indices)."""
    return np.flatnonzero(as_vertex_mask(n, vertices))


def _build_csr(n: int, edges: np.ndarray):
    """Adjacency in CSR form; each row lists incident edges by ascending id."""
    m = len(edges)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    ids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((ids, src))
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    idx_dtype = np.int32 if max(n, m) < 2**31 - 1 else np.int64
    return indptr, dst[order].astype(idx_dtype), ids[order].astype(idx_dtype)


class Graph:
    """Simple undirected graph with integer vertices and stable edge ids.

    Edge ``i`` is stored as ``edges[i] = (u, v)`` with ``u < v``. Isolated
    vertices are allowed.
    """

    def __init__(self, n: int, edges=(), *, check: bool = True):
        n = int(n)
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        arr = arr.reshape(-1, 2)
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        arr = np.stack([lo, hi], axis=1)
        if check and len(arr):
            if lo.min() < 0 or hi.max() >= n:
                raise GraphError(f"edge endpoint out of range [0, {n})")
            loops = np.flatnonzero(lo == hi)
            if loops.size:
                raise GraphError(f"self-loop at edge {int(loops[0])}")
            keys = lo * n + hi
            if np.unique(keys).size != len(keys):
                raise GraphError("duplicate edge")
        arr.setflags(write=False)
        self.n = n
        self.edges = arr

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    @cached_property
    def _csr(self):
        return _build_csr(self.n, self.edges)

    @cached_property
    def degree(self) -> np.ndarray:
        d = np.bincount(self.edges.ravel(), minlength=self.n)
        d.setflags(write=False)
        return d

    def min_degree(self) -> int:
        return int(self.degree.min()) if self.n else 0

    def neighbours(self, v: int) -> np.ndarray:
        indptr, nbr, _ = self._csr
        return nbr[indptr[v]:indptr[v + 1]]

    def incident(self, v: int) -> np.ndarray:
        """Ids of the edges at ``v``, ascending."""
        indptr, _, eid = self._csr
        return eid[indptr[v]:indptr[v + 1]]

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return int(b) if a == v else int(a)

    @cached_property
    def _edge_keys(self):
        keys = self.edges[:, 0] * self.n + self.edges[:, 1]
        order = np.argsort(keys, kind="stable")
        return keys[order], order

    def edge_ids(self, pairs) -> np.ndarray:
        """Edge ids for an array of vertex pairs; raises if a pair is not an edge."""
        p = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        keys = np.minimum(p[:, 0], p[:, 1]) * self.n + np.maximum(p[:, 0], p[:, 1])
        sorted_keys, order = self._edge_keys
        pos = np.searchsorted(sorted_keys, keys)
        pos_c = np.minimum(pos, len(sorted_keys) - 1) if len(sorted_keys) else pos
        if len(sorted_keys) == 0 or not np.all(sorted_keys[pos_c] == keys):
            raise GraphError("pair is not an edge of the graph")
        return order[pos_c]

    def edge_id(self, u: int, v: int) -> int:
        return int(self.edge_ids([(u, v)])[0])

    def edge_sums(self, values: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        """Per-vertex sum of ``values`` over incident edges (optionally masked)."""
        w = np.asarray(values, dtype=np.int64)
        if mask is not None:
            w = np.where(mask, w, 0)
        out = np.zeros(self.n, dtype=np.int64)
        np.add.at(out, self.edges[:, 0], w)
        np.add.at(out, self.edges[:, 1], w)
        return out

    def subgraph(self, edge_ids, vertices=None) -> "Subgraph":
        """Compact graph on ``vertices`` (default: endpoints of the edges).

        Local vertex ``i`` is global vertex ``vertices[i]`` and local edge ``j``
        is global edge ``edge_ids[j]``; the given edge order is preserved.
        """
        eids = np.asarray(edge_ids, dtype=np.int64).ravel()
        ends = self.edges[eids]
        if vertices is None:
            verts = np.unique(ends)
        else:
            verts = as_vertex_array(self.n, vertices)
        local = np.full(self.n, -1, dtype=np.int64)
        local[verts] = np.arange(len(verts))
        loc_edges = local[ends]
        if loc_edges.size and loc_edges.min() < 0:
            raise GraphError("subgraph edge has an endpoint outside the vertex set")
        return Subgraph(Graph(len(verts), loc_edges, check=False), verts, eids, local)


@dataclass(frozen=True)
class Subgraph:
    """A compact copy of part of a graph plus the maps back to the parent."""

    graph: Graph
    vertices: np.ndarray
    edges: np.ndarray
    local: np.ndarray = field(repr=False)

    def to_local(self, vertices) -> np.ndarray:
        """Local indices of global vertices; vertices outside the subgraph are dropped."""
        arr = np.asarray(vertices)
        if arr.dtype == bool:
            arr = np.flatnonzero(arr)
        loc = self.local[arr.astype(np.int64)]
        return loc[loc >= 0]


class MultiGraph:
    """Undirected multigraph; parallel edges are distinct objects by id."""

    def __init__(self, n: int, edges=()):
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if len(arr) and (arr.min() < 0 or arr.max() >= n):
            raise GraphError(f"edge endpoint out of range [0, {n})")
        arr.setflags(write=False)
        self.n = int(n)
        self.edges = arr

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degree(self) -> np.ndarray:
        # a loop contributes 2, as usual
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @cached_property
    def _csr(self):
        return _build_csr(self.n, self.edges)

    @classmethod
    def from_graph(cls, g: Graph, extra=()) -> "MultiGraph":
        extra = np.asarray(extra, dtype=np.int64).reshape(-1, 2)
        return cls(g.n, np.concatenate([g.edges, extra]) if len(extra) else g.edges)


@dataclass(frozen=True)
class Forest:
    """An acyclic edge subset of a parent graph."""

    graph: Graph
    edges: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "edges", np.asarray(self.edges, dtype=np.int64))

    @property
    def size(self) -> int:
        return len(self.edges)

    def is_acyclic(self) -> bool:
        return _first_cycle_edge(self.graph.n, self.graph.edges[self.edges]) is None

    def vertices(self) -> np.ndarray:
        return np.unique(self.graph.edges[self.edges])


@dataclass(frozen=True)
class Star:
    centre: int
    leaves: np.ndarray
    edges: np.ndarray

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class StarForest(Forest):
    """Vertex-disjoint stars, each with a designated centre."""

    stars: tuple = ()

    @property
    def centres(self) -> np.ndarray:
        return np.array([s.centre for s in self.stars], dtype=np.int64)

    def is_star_forest(self) -> bool:
        seen = set()
        for s in self.stars:
            if len(s.edges) < 1:
                return False
            for e, leaf in zip(s.edges, s.leaves):
                a, b = self.graph.edges[e]
                if {int(a), int(b)} != {int(s.centre), int(leaf)}:
                    return False
            vs = [int(s.centre), *map(int, s.leaves)]
            if seen.intersection(vs) or len(set(vs)) != len(vs):
                return False
            seen.update(vs)
        return True


def _first_cycle_edge(n: int, pairs: np.ndarray) -> int | None:
    """Index of the first pair closing a cycle under union-find, else None."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (a, b) in enumerate(np.asarray(pairs).tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            return i
        parent[ra] = rb
    return None


def induced_edges(g: Graph, vertices) -> np.ndarray:
    """Ids of edges with both endpoints in ``vertices``."""
    mask = as_vertex_mask(g.n, vertices)
    return np.flatnonzero(mask[g.edges[:, 0]] & mask[g.edges[:, 1]])


def cross_edges(g: Graph, a, b) -> np.ndarray:
    """Ids of edges ``xy`` with ``x`` in ``a`` and ``y`` in ``b``."""
    ma = as_vertex_mask(g.n, a)
    mb = as_vertex_mask(g.n, b)
    u, v = g.edges[:, 0], g.edges[:, 1]
    return np.flatnonzero((ma[u] & mb[v]) | (mb[u] & ma[v]))


def _sparse(g: Graph, weights=None) -> csr_matrix:
    w = np.ones(g.m) if weights is None else weights
    return csr_matrix((w, (g.edges[:, 0], g.edges[:, 1])), shape=(g.n, g.n))


def component_labels(g: Graph) -> tuple[int, np.ndarray]:
    """Component count and a label per vertex, labels ordered by smallest vertex."""
    if g.n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    k, labels = _cc(_sparse(g), directed=False)
    # relabel so component ids follow their smallest vertex
    first = np.full(k, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(k)
    return k, rank[labels]


def connected_components(g: Graph) -> list[np.ndarray]:
    """Vertex sets of the components, each sorted, ordered by smallest vertex."""
    k, labels = component_labels(g)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(k + 1))
    return [order[bounds[i]:bounds[i + 1]] for i in range(k)]


def spanning_forest(g: Graph, required_edges: Iterable[int] = ()) -> Forest:
    """A spanning forest (one tree per component) containing ``required_edges``."""
    req = np.unique(np.asarray(list(required_edges), dtype=np.int64))
    if req.size and (req.min() < 0 or req.max() >= g.m):
        raise GraphError("required edge id out of range")
    bad = _first_cycle_edge(g.n, g.edges[req])
    if bad is not None:
        raise GraphError(f"required edges contain a cycle (closed by edge {int(req[bad])})")
    if g.m == 0:
        return Forest(g, np.zeros(0, dtype=np.int64))
    w = np.full(g.m, 2.0)
    w[req] = 1.0
    tree = minimum_spanning_tree(_sparse(g, w)).tocoo()
    ids = g.edge_ids(np.stack([tree.row, tree.col], axis=1))
    ids = np.sort(ids)
    assert np.isin(req, ids).all()
    return Forest(g, ids)


@dataclass
class BFSForest:
    parent: np.ndarray
    parent_edge: np.ndarray
    depth: np.ndarray
    order: list
    roots: list

    def edges(self) -> np.ndarray:
        pe = self.parent_edge
        return np.sort(pe[pe >= 0])


def bfs_forest(g: Graph, sources=None, allowed=None) -> BFSForest:
    """Breadth-first forest restricted to ``allowed`` vertices.

    With ``sources`` the search starts from all of them at once and only the
    vertices reachable from them are visited. Without, it covers every allowed
    vertex, starting each new tree at the lowest-index unvisited vertex.
    """
    n = g.n
    ok = np.ones(n, dtype=bool) if allowed is None else as_vertex_mask(n, allowed)
    visited = np.zeros(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)
    pedge = np.full(n, -1, dtype=np.int64)
    depth = np.full(n, -1, dtype=np.int64)
    indptr, nbr, eid = g._csr
    order: list[int] = []
    roots: list[int] = []

    def run(head: int) -> None:
        while head < len(order):
            v = order[head]
            head += 1
            lo, hi = indptr[v], indptr[v + 1]
            ns = nbr[lo:hi]
            sel = ok[ns] & ~visited[ns]
            if not sel.any():
                continue
            new = ns[sel]
            visited[new] = True
            parent[new] = v
            pedge[new] = eid[lo:hi][sel]
            depth[new] = depth[v] + 1
            order.extend(new.tolist())

    if sources is not None:
        src = as_vertex_array(n, sources)
        visited[src] = True
        depth[src] = 0
        order.extend(src.tolist())
        roots.extend(src.tolist())
        run(0)
    else:
        for v in np.flatnonzero(ok).tolist():
            if visited[v]:
                continue
            visited[v] = True
            depth[v] = 0
            roots.append(v)
            start = len(order)
            order.append(v)
            run(start)
    return BFSForest(parent, pedge, depth, order, roots)


class _CircuitWalker:
    """Iterative Hierholzer state shared across several closed trails."""

    def __init__(self, mg):
        indptr, _, eids = mg._csr
        self.ptr = indptr[:-1].tolist()
        self.end = indptr[1:].tolist()
        self.adj = eids.tolist()
        self.ends_a = mg.edges[:, 0].tolist()
        self.ends_b = mg.edges[:, 1].tolist()
        self.used = bytearray(mg.m)

    def walk(self, start_vertex: int, start_edge: int | None = None) -> list[int]:
        """Closed trail from ``start_vertex`` using every unused edge it can reach."""
        ptr, end, adj, used = self.ptr, self.end, self.adj, self.used
        ends_a, ends_b = self.ends_a, self.ends_b
        circuit: list[int] = []
        if start_edge is not None:
            used[start_edge] = 1
            w = ends_b[start_edge] if ends_a[start_edge] == start_vertex else ends_a[start_edge]
            stack_v = [start_vertex, w]
            stack_e = [-1, start_edge]
        else:
            stack_v = [start_vertex]
            stack_e = [-1]
        while stack_v:
            v = stack_v[-1]
            p = ptr[v]
            e_end = end[v]
            while p < e_end and used[adj[p]]:
                p += 1
            ptr[v] = p
            if p < e_end:
                e = adj[p]
                used[e] = 1
                stack_v.append(ends_b[e] if ends_a[e] == v else ends_a[e])
                stack_e.append(e)
            else:
                stack_v.pop()
                e = stack_e.pop()
                if e >= 0:
                    circuit.append(e)
        circuit.reverse()
        return circuit


def _check_even(mg) -> None:
    deg = mg.degree
    odd = np.flatnonzero(deg % 2)
    if odd.size:
        raise GraphError(f"vertex {int(odd[0])} has odd degree {int(deg[odd[0]])}")


def eulerian_circuit(mg: MultiGraph | Graph, start_edge: int | None = None) -> list[int]:
    """Edge ids of an Eulerian circuit of ``mg``.

    The edge set must be connected and every degree even. With
    ``start_edge`` the circuit begins with that edge, traversed from its
    first endpoint.
    """
    if mg.m == 0:
        return []
    _check_even(mg)
    _, labels = _cc(csr_matrix((np.ones(mg.m), (mg.edges[:, 0], mg.edges[:, 1])),
                               shape=(mg.n, mg.n)), directed=False)
    if np.unique(labels[mg.edges.ravel()]).size > 1:
        raise GraphError("edge set is disconnected")
    if start_edge is not None:
        if not 0 <= start_edge < mg.m:
            raise GraphError("start edge out of range")
        start_vertex = int(mg.edges[start_edge, 0])
    else:
        start_vertex = int(mg.edges[0, 0])
    return _CircuitWalker(mg).walk(start_vertex, start_edge)


def eulerian_circuits(mg: MultiGraph | Graph, start_edges: Sequence[int]) -> list[list[int]]:
    """One Eulerian circuit per component, each beginning with the given edge.

    ``start_edges`` must contain exactly one edge from every component that
    has edges; all degrees must be even.
    """
    _check_even(mg)
    walker = _CircuitWalker(mg)
    out = []
    for e in start_edges:
        if walker.used[e]:
            raise GraphError(f"start edge {e} shares a component with an earlier one")
        out.append(walker.walk(int(mg.edges[e, 0]), int(e)))
    if sum(len(c) for c in out) != mg.m:
        raise GraphError("start edges do not cover every component")
    return out


def circuit_vertices(mg: MultiGraph | Graph, circuit: Sequence[int], start: int | None = None) -> list[int]:
    """Vertex sequence visited by a circuit given as edge ids."""
    if not circuit:
        return []
    e0 = mg.edges[circuit[0]]
    v = int(e0[0]) if start is None else start
    walk = [v]
    for e in circuit:
        a, b = map(int, mg.edges[e])
        if v == a:
            v = b
        elif v == b:
            v = a
        else:
            raise GraphError("circuit edges are not consecutive")
        walk.append(v)
    return walk
