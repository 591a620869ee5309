"""Exact checks of antimagic labellings and an exhaustive oracle for tiny graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, GraphError, PreconditionError
from .graph import Graph
from .labelling import PartialLabelling, histogram_of


@dataclass
class VerificationReport:
    bijective: bool
    label_range_ok: bool
    duplicate_sums: list = field(default_factory=list)
    mod_violations: list = field(default_factory=list)
    histograms: dict | None = None

    @property
    def ok(self) -> bool:
        return self.bijective and self.label_range_ok and not self.duplicate_sums and not self.mod_violations

    def duplicate_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for grp in self.duplicate_sums for a, b in itertools.combinations(grp, 2)]

    def to_json(self) -> dict:
        out = {
            "ok": self.ok,
            "bijective": self.bijective,
            "label_range_ok": self.label_range_ok,
            "duplicate_sums": self.duplicate_sums,
            "mod_violations": [list(x) for x in self.mod_violations],
        }
        if self.histograms is not None:
            out["histograms"] = self.histograms
        return out


def _label_array(g: Graph, f) -> np.ndarray:
    if isinstance(f, PartialLabelling):
        if not f.complete:
            raise GraphError("labelling is partial")
        return f.values
    arr = np.asarray(f, dtype=np.int64).ravel()
    if arr.shape != (g.m,):
        raise GraphError(f"labelling has {arr.size} entries for {g.m} edges")
    return arr


def duplicate_groups(sums: np.ndarray) -> list[list[int]]:
    """Groups (size >= 2) of vertices sharing a sum, found by sorting."""
    order = np.argsort(sums, kind="stable")
    s = sums[order]
    groups = []
    i = 0
    while i < len(s):
        j = i + 1
        while j < len(s) and s[j] == s[i]:
            j += 1
        if j - i > 1:
            groups.append(sorted(int(v) for v in order[i:j]))
        i = j
    return groups


def verify_g_antimagic(g: Graph, f, potential=None, modulus: int | None = None,
                       *, histogram_moduli=()) -> VerificationReport:
    """Check ``f`` is a bijection onto [1, |E|] with pairwise distinct sums.

    Sums include ``potential``; with ``modulus`` every sum divisible by it
    is reported as a violation.
    """
    labels = _label_array(g, f)
    base = np.zeros(g.n, dtype=np.int64) if potential is None else np.asarray(potential, dtype=np.int64)
    range_ok = bool(labels.size == 0 or (labels.min() >= 1 and labels.max() <= g.m))
    bij = range_ok and np.unique(labels).size == labels.size
    sums = base + g.edge_sums(labels)
    report = VerificationReport(bool(bij), range_ok, duplicate_groups(sums))
    if modulus:
        report.mod_violations = [(int(v), int(modulus)) for v in np.flatnonzero(sums % modulus == 0)]
    if histogram_moduli:
        report.histograms = {int(k): histogram_of(sums, np.arange(g.n), k).to_list() for k in histogram_moduli}
    return report


def verify_antimagic(g: Graph, f, **kw) -> VerificationReport:
    return verify_g_antimagic(g, f, None, None, **kw)


def counting_obstruction(g: Graph) -> bool:
    """True when |E|(|E|+1) < |V|(|V|+1)/2, so sums cannot all differ."""
    if g.n and g.min_degree() == 0:
        raise PreconditionError("counting_obstruction", "no isolated vertex")
    return g.m * (g.m + 1) < g.n * (g.n + 1) / 2


def brute_force_antimagic(g: Graph, budget: int = 5_000_000, *, max_edges: int = 15,
                          prune: bool = True) -> np.ndarray | None:
    """An antimagic labelling found by exhaustive search, or None if none exists.

    Edges are labelled in order of decreasing degree sum; with ``prune`` a
    branch is cut as soon as two vertices whose edges are all labelled share
    a sum. Raises :class:`BudgetExceededError` if ``budget`` search nodes are
    used up before the space is exhausted.
    """
    m = g.m
    if m > max_edges:
        raise PreconditionError("brute_force_antimagic", f"|E| <= {max_edges}", f"|E|={m}")
    deg = g.degree
    order = sorted(range(m), key=lambda e: (-(deg[g.edges[e, 0]] + deg[g.edges[e, 1]]), e))
    ends = [tuple(int(x) for x in g.edges[e]) for e in order]
    remaining = deg.astype(int).tolist()
    sums = [0] * g.n
    labels = [0] * m
    used = [False] * (m + 1)
    finished: dict[int, int] = {}
    for v in range(g.n):
        if remaining[v] == 0:
            finished[0] = finished.get(0, 0) + 1
    nodes = 0

    def distinct_final() -> bool:
        return len(set(sums)) == g.n

    def dfs(i: int) -> bool:
        nonlocal nodes
        if i == m:
            return distinct_final()
        u, v = ends[i]
        for lab in range(1, m + 1):
            if used[lab]:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError(f"search budget of {budget} nodes exhausted")
            used[lab] = True
            labels[i] = lab
            sums[u] += lab
            sums[v] += lab
            remaining[u] -= 1
            remaining[v] -= 1
            ok = True
            if prune:
                done = [w for w in (u, v) if remaining[w] == 0]
                if len(done) == 2 and sums[u] == sums[v]:
                    ok = False
                for w in done:
                    if finished.get(sums[w], 0):
                        ok = False
                if ok:
                    for w in done:
                        finished[sums[w]] = finished.get(sums[w], 0) + 1
            if ok and dfs(i + 1):
                return True
            if prune and ok:
                for w in (u, v):
                    if remaining[w] == 0:
                        finished[sums[w]] -= 1
            sums[u] -= lab
            sums[v] -= lab
            remaining[u] += 1
            remaining[v] += 1
            used[lab] = False
        return False

    if g.n and len(finished) and finished.get(0, 0) > 1:
        return None  # two isolated vertices both have sum 0
    if not dfs(0):
        return None
    out = np.zeros(m, dtype=np.int64)
    out[order] = labels
    return out
