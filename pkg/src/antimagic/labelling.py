"""Partial edge labellings with cached vertex sums, and residue histograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GraphError
from .graph import Graph, as_vertex_array


class PartialLabelling:
    """Values on a subset of the edges of ``graph`` plus a vertex potential.

    ``sums[v]`` is ``base[v]`` plus the values of the assigned edges at ``v``
    and is kept up to date by every mutating method. The same container is
    used for colourings (values mod k) and for injective labellings.
    """

    def __init__(self, graph: Graph, base=None):
        self.graph = graph
        self.values = np.zeros(graph.m, dtype=np.int64)
        self.assigned = np.zeros(graph.m, dtype=bool)
        if base is None:
            self.base = np.zeros(graph.n, dtype=np.int64)
        else:
            self.base = np.array(base, dtype=np.int64).reshape(graph.n)
        self.sums = self.base.copy()

    def copy(self) -> "PartialLabelling":
        out = PartialLabelling.__new__(PartialLabelling)
        out.graph = self.graph
        out.values = self.values.copy()
        out.assigned = self.assigned.copy()
        out.base = self.base.copy()
        out.sums = self.sums.copy()
        return out

    def _add_to_sums(self, edges: np.ndarray, delta: np.ndarray) -> None:
        ends = self.graph.edges[edges]
        np.add.at(self.sums, ends[:, 0], delta)
        np.add.at(self.sums, ends[:, 1], delta)

    def assign(self, edges, values) -> None:
        """Give values to currently unassigned edges."""
        e = np.asarray(edges, dtype=np.int64).ravel()
        v = np.broadcast_to(np.asarray(values, dtype=np.int64), e.shape)
        if e.size == 0:
            return
        if self.assigned[e].any() or np.unique(e).size != e.size:
            raise GraphError("edge assigned twice")
        self.values[e] = v
        self.assigned[e] = True
        self._add_to_sums(e, v)

    def set(self, e: int, value: int) -> None:
        """Assign a single edge; cheaper than :meth:`assign` inside loops."""
        if self.assigned[e]:
            raise GraphError(f"edge {e} assigned twice")
        self.values[e] = value
        self.assigned[e] = True
        a, b = self.graph.edges[e]
        self.sums[a] += value
        self.sums[b] += value

    def reassign(self, edges, values) -> None:
        """Change the values of already assigned edges (used for label swaps)."""
        e = np.asarray(edges, dtype=np.int64).ravel()
        v = np.broadcast_to(np.asarray(values, dtype=np.int64), e.shape)
        if not self.assigned[e].all():
            raise GraphError("reassigning an unassigned edge")
        delta = v - self.values[e]
        self.values[e] = v
        self._add_to_sums(e, delta)

    def swap(self, e1, e2) -> None:
        """Exchange the values on two edge arrays pairwise."""
        e1 = np.asarray(e1, dtype=np.int64).ravel()
        e2 = np.asarray(e2, dtype=np.int64).ravel()
        both = np.concatenate([e1, e2])
        if np.unique(both).size != both.size:
            raise GraphError("swap pairs overlap")
        v1, v2 = self.values[e1].copy(), self.values[e2].copy()
        self.reassign(both, np.concatenate([v2, v1]))

    def clear(self, edges) -> None:
        e = np.asarray(edges, dtype=np.int64).ravel()
        e = e[self.assigned[e]]
        self._add_to_sums(e, -self.values[e])
        self.values[e] = 0
        self.assigned[e] = False

    @property
    def complete(self) -> bool:
        return bool(self.assigned.all())

    def labelled_edges(self) -> np.ndarray:
        return np.flatnonzero(self.assigned)

    def used_values(self) -> np.ndarray:
        return self.values[self.assigned]

    def is_injective(self) -> bool:
        used = self.used_values()
        return np.unique(used).size == used.size

    def recompute_sums(self) -> np.ndarray:
        """Vertex sums computed from scratch (for consistency checks)."""
        return self.base + self.graph.edge_sums(self.values, self.assigned)

    def consistent(self) -> bool:
        return bool(np.array_equal(self.recompute_sums(), self.sums))

    def sums_without(self, edges) -> np.ndarray:
        """Vertex sums ignoring the values on ``edges``."""
        e = np.asarray(edges, dtype=np.int64).ravel()
        e = e[self.assigned[e]]
        out = self.sums.copy()
        ends = self.graph.edges[e]
        np.subtract.at(out, ends[:, 0], self.values[e])
        np.subtract.at(out, ends[:, 1], self.values[e])
        return out


@dataclass(frozen=True)
class ResidueHistogram:
    """Counts of vertex sums in each residue class modulo ``k``."""

    k: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, i: int) -> int:
        return int(self.counts[i % self.k])

    def max_excluding(self, excluded=(0, 1)) -> int:
        mask = np.ones(self.k, dtype=bool)
        mask[[i % self.k for i in excluded]] = False
        return int(self.counts[mask].max()) if mask.any() else 0

    def to_list(self) -> list[int]:
        return [int(c) for c in self.counts]


def histogram_of(sums: np.ndarray, vertices, k: int) -> ResidueHistogram:
    if k < 1:
        raise ValueError("modulus must be positive")
    vs = as_vertex_array(len(sums), vertices)
    return ResidueHistogram(k, np.bincount(np.mod(sums[vs], k), minlength=k))


def residue_histogram(p: PartialLabelling, vertices, k: int) -> ResidueHistogram:
    """How many vertices of ``vertices`` have partial sum congruent to each i mod k."""
    return histogram_of(p.sums, vertices, k)


def smallest_per_class(labels: np.ndarray, modulus: int, per_class: int) -> np.ndarray:
    """Indices into ``labels`` of the ``per_class`` smallest labels in each class.

    ``labels`` must be sorted ascending. The result is ordered by class, then
    by value. Raises if some class has too few members.
    """
    labels = np.asarray(labels, dtype=np.int64)
    cls = np.mod(labels, modulus)
    order = np.lexsort((labels, cls))
    counts = np.bincount(cls, minlength=modulus)
    if per_class and counts.min() < per_class:
        raise ValueError(f"class {int(counts.argmin())} has only {int(counts.min())} labels")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rank = np.arange(len(labels)) - np.repeat(starts, counts)
    return order[rank < per_class]
