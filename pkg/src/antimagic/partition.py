"""Structural decompositions: cores, dominating sets, bipartitions, star forests."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .errors import ConditionError, PreconditionError, TrialsExhaustedError
from .graph import (
    Forest,
    Graph,
    Star,
    StarForest,
    as_vertex_mask,
    bfs_forest,
    component_labels,
)
from .modular import equitable_two_colouring
from .rng import as_rng

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# cores


@dataclass(frozen=True)
class CoreSplit:
    r: int
    core: np.ndarray
    shell: np.ndarray
    peel_order: np.ndarray = field(repr=False, default=None)


def r_core(g: Graph, r: int, *, lifo: bool = False) -> CoreSplit:
    """Largest vertex set in which every vertex keeps at least ``r`` neighbours.

    Vertices of degree below ``r`` are peeled one at a time (FIFO by default,
    LIFO with ``lifo=True``; the resulting core is the same either way).
    """
    if r < 1:
        raise PreconditionError("r_core", "r >= 1", f"r={r}")
    deg = g.degree.astype(np.int64).copy()
    removed = np.zeros(g.n, dtype=bool)
    queued = deg < r
    pending = deque(np.flatnonzero(queued).tolist())
    order: list[int] = []
    indptr, nbr, _ = g._csr
    pop = pending.pop if lifo else pending.popleft
    while pending:
        v = pop()
        removed[v] = True
        order.append(v)
        ns = nbr[indptr[v]:indptr[v + 1]]
        ns = ns[~removed[ns]]
        deg[ns] -= 1
        new = ns[(deg[ns] < r) & ~queued[ns]]
        queued[new] = True
        pending.extend(new.tolist())
    return CoreSplit(r, np.flatnonzero(~removed), np.flatnonzero(removed),
                     np.asarray(order, dtype=np.int64))


# ---------------------------------------------------------------------------
# total k-domination


def _domination_terms(k: int, delta: int, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    i = np.arange(k)[:, None]
    logc = gammaln(delta + 1) - gammaln(i + 1) - gammaln(delta - i + 1)
    with np.errstate(divide="ignore"):
        logt = logc + i * np.log(p) + (delta - i) * np.log1p(-p)
    return p + ((k - i) * np.exp(logt)).sum(axis=0)


def z_bound(k: int, delta: int) -> float:
    """Upper bound on the total k-domination ratio for minimum degree ``delta``.

    Minimises ``p + sum_{i<k} (k-i) C(delta,i) p^i (1-p)^(delta-i)`` over
    ``p`` on a 512-point log grid followed by a bounded local refinement;
    the result is clamped to 1.
    """
    if not 1 <= k <= delta:
        raise PreconditionError("z_bound", "delta >= k >= 1", f"k={k}, delta={delta}")
    grid = np.geomspace(1e-7, 1 - 1e-9, 512)
    vals = _domination_terms(k, delta, grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda x: float(_domination_terms(k, delta, np.array([x]))[0]),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return min(best, 1.0)


def _best_p(k: int, delta: int) -> float:
    grid = np.geomspace(1e-7, 1 - 1e-9, 512)
    vals = _domination_terms(k, delta, grid)
    return float(grid[int(np.argmin(vals))])


def _neighbour_counts(g: Graph, inset: np.ndarray) -> np.ndarray:
    u, v = g.edges[:, 0], g.edges[:, 1]
    w = inset.astype(np.int64)
    return np.bincount(u, weights=w[v], minlength=g.n).astype(np.int64) + \
        np.bincount(v, weights=w[u], minlength=g.n).astype(np.int64)


def is_total_k_dominating(g: Graph, D, k: int) -> bool:
    mask = as_vertex_mask(g.n, D)
    return bool((_neighbour_counts(g, mask) >= k).all())


def total_k_dominating_set(g: Graph, k: int, seed=0, trials: int = 32) -> np.ndarray:
    """A set D with every vertex having at least ``k`` neighbours in D.

    Each trial takes a random set with the probability that minimises the
    expected-size bound, then repairs deficient vertices in ascending order
    by adding their lowest-index neighbours outside D. The smallest D over
    ``trials`` attempts is returned.
    """
    op = "total_k_dominating_set"
    delta = g.min_degree()
    if g.n and delta < k:
        raise PreconditionError(op, f"minimum degree at least {k}", f"minimum degree {delta}")
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    rng = as_rng(seed)
    p = _best_p(k, delta) if k >= 1 else 0.0
    indptr, nbr, _ = g._csr
    best = None
    for _ in range(trials):
        inD = rng.random(g.n) < p
        counts = _neighbour_counts(g, inD)
        for v in np.flatnonzero(counts < k).tolist():
            need = k - counts[v]
            if need <= 0:
                continue
            ns = np.sort(nbr[indptr[v]:indptr[v + 1]])
            add = ns[~inD[ns]][:need]
            inD[add] = True
            for x in add.tolist():
                counts[nbr[indptr[x]:indptr[x + 1]]] += 1
        if best is None or inD.sum() < best.sum():
            best = inD
    D = np.flatnonzero(best)
    if not is_total_k_dominating(g, D, k):
        raise ConditionError(op, f"every vertex has {k} neighbours in D")
    return D


# ---------------------------------------------------------------------------
# random bipartitions with many edges on both sides


def partition_probabilities(a1: float, a2: float) -> tuple[float, float]:
    s1, s2 = math.sqrt(a1), math.sqrt(a2)
    return s1 / (s1 + s2), s2 / (s1 + s2)


def partition_margin(a: float, ai: float, p: float) -> float:
    """``a p^2 - sqrt(p^2 + 2a p^3 - 2a p^4) - ai``; nonnegative when the bound holds."""
    return a * p * p - math.sqrt(p * p + 2 * a * p ** 3 - 2 * a * p ** 4) - ai


def m_prime_holds(a: float, a1: float, a2: float) -> bool:
    p1, p2 = partition_probabilities(a1, a2)
    return partition_margin(a, a1, p1) >= 0 and partition_margin(a, a2, p2) >= 0


def m_prime(a1: float, a2: float, rtol: float = 1e-9) -> float:
    """Least ``a`` for which the random-bipartition edge bound holds for both sides.

    Each side's margin is convex in ``a`` and negative at 0, so its zero set
    is a half-line; the root is found by bisection to relative tolerance
    ``rtol`` and the larger of the two roots is returned (from above).
    """
    if a1 <= 0 or a2 <= 0:
        raise PreconditionError("m_prime", "a1, a2 > 0", f"a1={a1}, a2={a2}")
    roots = []
    for ai, p in zip((a1, a2), partition_probabilities(a1, a2)):
        lo, hi = 0.0, 1.0
        while partition_margin(hi, ai, p) < 0:
            lo, hi = hi, hi * 2
        while hi - lo > rtol * hi:
            mid = (lo + hi) / 2
            if partition_margin(mid, ai, p) >= 0:
                hi = mid
            else:
                lo = mid
        roots.append(hi)
    return max(roots)


def bipartition_edges(g: Graph, r1: int, r2: int, seed=0, max_trials: int = 64):
    """Split V into (U1, U2) with at least r1 edges inside U1 and r2 inside U2.

    Vertices go to U1 independently with probability sqrt(r1)/(sqrt(r1)+sqrt(r2)).
    On failure :class:`TrialsExhaustedError` carries the best attempt.
    """
    op = "bipartition_edges"
    if r1 < 0 or r2 < 0:
        raise PreconditionError(op, "r1, r2 >= 0")
    if max_trials < 1:
        raise PreconditionError(op, "max_trials >= 1", f"max_trials={max_trials}")
    rng = as_rng(seed)
    if r1 == 0 and r2 == 0:
        return np.arange(g.n), np.zeros(0, dtype=np.int64)
    p1 = math.sqrt(r1) / (math.sqrt(r1) + math.sqrt(r2))
    u, v = g.edges[:, 0], g.edges[:, 1]
    best, best_score = None, -math.inf
    for _ in range(max_trials):
        side = rng.random(g.n) < p1
        c1 = int((side[u] & side[v]).sum())
        c2 = int((~side[u] & ~side[v]).sum())
        if c1 >= r1 and c2 >= r2:
            return np.flatnonzero(side), np.flatnonzero(~side)
        score = min(c1 / r1 if r1 else math.inf, c2 / r2 if r2 else math.inf)
        if score > best_score:
            best_score, best = score, (np.flatnonzero(side), np.flatnonzero(~side), c1, c2)
    raise TrialsExhaustedError(op, max_trials, best,
                               f"best split had {best[2]} and {best[3]} inner edges, "
                               f"needed {r1} and {r2}")


# ---------------------------------------------------------------------------
# star forest


@dataclass
class StarForestPlan:
    forest: StarForest
    V0: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    dominating: np.ndarray
    z: float
    trace: list = field(default_factory=list, repr=False)

    @property
    def stars(self):
        return self.forest.stars

    @property
    def centres(self) -> np.ndarray:
        return self.forest.centres

    def to_json(self) -> dict:
        return {
            "V0": self.V0.tolist(), "V1": self.V1.tolist(), "V2": self.V2.tolist(),
            "centres": self.centres.tolist(),
            "star_edges": [s.edges.tolist() for s in self.stars],
            "dominating_set_size": int(len(self.dominating)), "z": self.z,
        }


def drop_heavy_edges(g: Graph, delta: int) -> np.ndarray:
    """Ids of edges kept after deleting, in index order, edges joining two
    vertices whose current degrees both exceed ``delta``.

    Degrees only go down, so a single pass leaves no such edge.
    """
    deg = g.degree.astype(np.int64).tolist()
    keep = np.ones(g.m, dtype=bool)
    heavy = np.asarray(g.degree) > delta
    cand = np.flatnonzero(heavy[g.edges[:, 0]] & heavy[g.edges[:, 1]])
    us = g.edges[cand, 0].tolist()
    vs = g.edges[cand, 1].tolist()
    for e, u, v in zip(cand.tolist(), us, vs):
        if deg[u] > delta and deg[v] > delta:
            deg[u] -= 1
            deg[v] -= 1
            keep[e] = False
    return np.flatnonzero(keep)


def star_bound(n: int, z: float, delta: int, r: int) -> float:
    return n * (0.5 - z - 2 / delta) - 1 - r / delta


def check_star_forest(g: Graph, plan: StarForestPlan, delta: int, r: int) -> None:
    op = "build_star_forest"
    if not plan.forest.is_star_forest():
        raise ConditionError(op, "stars are vertex-disjoint")
    if not np.isin(plan.V1, plan.centres).all():
        raise ConditionError(op, "V1 consists of star centres")
    m0 = as_vertex_mask(g.n, plan.V0)
    inner = int((m0[g.edges[:, 0]] & m0[g.edges[:, 1]]).sum())
    if inner < r:
        raise ConditionError(op, "condition 1: at least r edges inside V0", f"{inner} < {r}")
    bound = star_bound(g.n, plan.z, delta, r)
    if plan.forest.size < bound:
        raise ConditionError(op, "condition 2: star forest edge count",
                             f"{plan.forest.size} < {bound:.2f}")
    m1 = as_vertex_mask(g.n, plan.V1)
    u, v = g.edges[:, 0], g.edges[:, 1]
    to_v0 = np.bincount(u, weights=m0[v], minlength=g.n) + np.bincount(v, weights=m0[u], minlength=g.n)
    m01 = m0 | m1
    to_v01 = np.bincount(u, weights=m01[v], minlength=g.n) + np.bincount(v, weights=m01[u], minlength=g.n)
    if plan.V1.size and to_v0[plan.V1].min() < 5:
        raise ConditionError(op, "condition 3: every V1 vertex has 5 edges to V0")
    if to_v01.min() < 5:
        raise ConditionError(op, "condition 3: every vertex has 5 edges to V0 and V1")


def build_star_forest(g: Graph, delta: int, r: int, seed=0) -> StarForestPlan:
    """Greedy star forest leaving at least ``r`` edges among the unused vertices.

    Works on the subgraph with no edge between two vertices of degree above
    ``delta``. Stars are centred on a high-degree vertex when one still has
    a low-degree neighbour (lowest edge index first), otherwise on the lower
    end of the lowest remaining low-low edge; leaves are taken in ascending
    order while enough edges remain.
    """
    op = "build_star_forest"
    n = g.n
    if delta < 5:
        raise PreconditionError(op, "delta >= 5", f"delta={delta}")
    if n and g.min_degree() < delta:
        raise PreconditionError(op, f"minimum degree at least {delta}", f"found {g.min_degree()}")
    if r > n * delta / 2:
        raise PreconditionError(op, "r <= n*delta/2", f"r={r}, n*delta/2={n * delta / 2}")

    keep = drop_heavy_edges(g, delta)
    gp = Graph(n, g.edges[keep], check=False)
    small = gp.degree == delta
    D = total_k_dominating_set(gp, 5, seed)
    z = len(D) / n if n else 0.0
    alive = np.ones(n, dtype=bool)
    alive[D[small[D]]] = False

    indptr, nbr, _ = gp._csr
    intdeg = _neighbour_counts(gp, alive)
    intdeg[~alive] = 0
    both_alive = alive[gp.edges[:, 0]] & alive[gp.edges[:, 1]]
    e_t = int(both_alive.sum())
    su, sv = small[gp.edges[:, 0]], small[gp.edges[:, 1]]
    mixed = np.flatnonzero(su != sv)
    low = np.flatnonzero(su & sv)
    ptr_mixed = ptr_low = 0
    eu, ev = gp.edges[:, 0], gp.edges[:, 1]

    def remove(x: int) -> None:
        nonlocal e_t
        e_t -= int(intdeg[x])
        alive[x] = False
        ns = nbr[indptr[x]:indptr[x + 1]]
        intdeg[ns] -= 1

    stars: list[Star] = []
    trace = []
    while e_t >= r + n + delta:
        while ptr_mixed < len(mixed) and not (alive[eu[mixed[ptr_mixed]]] and alive[ev[mixed[ptr_mixed]]]):
            ptr_mixed += 1
        if ptr_mixed < len(mixed):
            e = mixed[ptr_mixed]
            c = int(ev[e]) if small[eu[e]] else int(eu[e])
        else:
            while ptr_low < len(low) and not (alive[eu[low[ptr_low]]] and alive[ev[low[ptr_low]]]):
                ptr_low += 1
            if ptr_low == len(low):
                raise ConditionError(op, "an edge remains while enough edges are left")
            c = int(eu[low[ptr_low]])
        ns = nbr[indptr[c]:indptr[c + 1]]
        cand = np.sort(ns[alive[ns]]).tolist()
        remove(c)
        leaves = []
        for x in cand:
            if e_t - intdeg[x] < r:
                break
            remove(x)
            leaves.append(x)
        if not leaves:
            raise ConditionError(op, "every star has at least one leaf", f"centre {c}")
        if e_t < r:
            raise ConditionError(op, "at least r edges remain after each star")
        leaves_arr = np.asarray(leaves, dtype=np.int64)
        eids = g.edge_ids(np.stack([np.full(len(leaves), c), leaves_arr], axis=1))
        stars.append(Star(c, leaves_arr, eids))
        trace.append((c, len(leaves), e_t))

    star_edges = np.concatenate([s.edges for s in stars]) if stars else np.zeros(0, dtype=np.int64)
    forest = StarForest(g, star_edges, tuple(stars))
    in_fs = np.zeros(n, dtype=bool)
    for s in stars:
        in_fs[s.centre] = True
        in_fs[s.leaves] = True
    centres = np.array([s.centre for s in stars], dtype=np.int64)
    V1 = np.sort(centres[~small[centres]]) if len(centres) else centres
    m1 = as_vertex_mask(n, V1)
    plan = StarForestPlan(forest, np.flatnonzero(~in_fs), V1, np.flatnonzero(in_fs & ~m1),
                          D, z, trace)
    check_star_forest(g, plan, delta, r)
    log.debug("star forest: %d stars, %d edges, |V1|=%d, z=%.4f",
              len(stars), forest.size, len(V1), z)
    return plan


# ---------------------------------------------------------------------------
# full partition


@dataclass
class PartitionPlan:
    stars: StarForestPlan
    F: Forest
    U1: np.ndarray
    U2: np.ndarray
    U3: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray
    E4: np.ndarray
    E5: np.ndarray

    @property
    def V0(self):
        return self.stars.V0

    @property
    def V1(self):
        return self.stars.V1

    @property
    def V2(self):
        return self.stars.V2

    def edge_classes(self) -> list[np.ndarray]:
        return [self.E1, self.E2, self.E3, self.E4, self.E5]

    def to_json(self) -> dict:
        out = self.stars.to_json()
        out.update({
            "F": self.F.edges.tolist(), "U1": self.U1.tolist(), "U2": self.U2.tolist(),
            "U3": self.U3.tolist(),
        })
        for i, e in enumerate(self.edge_classes(), start=1):
            out[f"E{i}"] = e.tolist()
        return out


def _count_to(g: Graph, target: np.ndarray, edge_mask: np.ndarray) -> np.ndarray:
    u, v = g.edges[:, 0], g.edges[:, 1]
    w1 = (target[v] & edge_mask).astype(np.int64)
    w2 = (target[u] & edge_mask).astype(np.int64)
    return np.bincount(u, weights=w1, minlength=g.n).astype(np.int64) + \
        np.bincount(v, weights=w2, minlength=g.n).astype(np.int64)


def check_partition(g: Graph, plan: PartitionPlan, delta: int, r: int, r1: int, r2: int) -> None:
    """Assert every structural guarantee of a partition plan."""
    op = "build_partition"
    n = g.n
    sp = plan.stars
    m0, m1, m2 = (as_vertex_mask(n, x) for x in (sp.V0, sp.V1, sp.V2))
    in_f = np.zeros(g.m, dtype=bool)
    in_f[plan.F.edges] = True
    in_fs = np.zeros(g.m, dtype=bool)
    in_fs[sp.forest.edges] = True
    u, v = g.edges[:, 0], g.edges[:, 1]

    if (in_fs & ~in_f).any() or not plan.F.is_acyclic():
        raise ConditionError(op, "condition 1: F is a forest containing the stars")
    covered = np.zeros(n, dtype=bool)
    covered[g.edges[plan.F.edges].ravel()] = True
    if not covered.all():
        raise ConditionError(op, "condition 1: F spans every vertex")
    check_star_forest(g, sp, delta, r)  # conditions 2 and 3
    fg = Graph(n, g.edges[plan.F.edges], check=False)
    ncomp, comp = component_labels(fg)
    size = np.bincount(comp, minlength=ncomp)
    outside = np.bincount(comp, weights=~(m1 | m2), minlength=ncomp) > 0
    if (outside & (size < 3)).any():
        raise ConditionError(op, "condition 4: F components meeting V0 have 3 vertices")
    at_v2_f = np.bincount(g.edges[plan.F.edges].ravel(), minlength=n)
    at_v2_fs = np.bincount(g.edges[sp.forest.edges].ravel(), minlength=n)
    if (at_v2_f[m2] != at_v2_fs[m2]).any():
        raise ConditionError(op, "condition 5: V2 vertices only meet star edges of F")
    nonf = ~in_f
    c6 = _count_to(g, m0 | m1, nonf)
    if (c6[~m1] < 2).any():
        raise ConditionError(op, "condition 6: two non-F edges to V0 and V1 outside V1")
    c7 = _count_to(g, m0, nonf)
    if (c7[m1] < 2).any():
        raise ConditionError(op, "condition 7: two non-F edges from V1 to V0")
    mu1, mu2 = as_vertex_mask(n, plan.U1), as_vertex_mask(n, plan.U2)
    if (mu1 & mu2).any() or not np.array_equal(mu1 | mu2, m0):
        raise ConditionError(op, "condition 8: U1 and U2 partition V0")
    e_u1 = int((mu1[u] & mu1[v] & nonf).sum())
    e_u2 = int((mu2[u] & mu2[v] & nonf).sum())
    if e_u1 < r1 or e_u2 < r2:
        raise ConditionError(op, "condition 8: edges inside U1 and U2 outside F",
                             f"{e_u1} vs {r1}, {e_u2} vs {r2}")
    allc = np.concatenate(plan.edge_classes())
    if len(allc) != g.m or not np.array_equal(np.sort(allc), np.arange(g.m)):
        raise ConditionError(op, "E1..E5 partition the edge set")


def build_partition(g: Graph, delta: int, r: int, r1: int, r2: int, seed=0,
                    max_trials: int = 64) -> PartitionPlan:
    """Star forest, spanning forest F, V0 bipartition and the five edge classes."""
    op = "build_partition"
    n = g.n
    if delta < 5:
        raise PreconditionError(op, "delta >= 5", f"delta={delta}")
    if r > delta * n / 2:
        raise PreconditionError(op, "r <= delta*n/2", f"r={r}")
    sp = build_star_forest(g, delta, r, seed)
    m0, m1, m2 = (as_vertex_mask(n, x) for x in (sp.V0, sp.V1, sp.V2))
    u, v = g.edges[:, 0], g.edges[:, 1]

    g1_edges = np.flatnonzero((m0[u] & (m0[v] | m1[v])) | (m1[u] & m0[v]))
    sub = g.subgraph(g1_edges, vertices=m0 | m1)
    colours = equitable_two_colouring(sub.graph, 2)
    two = np.flatnonzero(colours == 2)
    g2 = Graph(sub.graph.n, sub.graph.edges[two], check=False)
    bfs = bfs_forest(g2)
    f_prime = g1_edges[two[bfs.edges()]]
    f_edges = np.sort(np.concatenate([f_prime, sp.forest.edges]))
    F = Forest(g, f_edges)
    in_f = np.zeros(g.m, dtype=bool)
    in_f[f_edges] = True

    inner0 = m0[u] & m0[v]
    outside_f = _count_to(g, m0, inner0 & ~in_f)
    U3 = np.flatnonzero(m0 & (outside_f == 0))

    left = np.flatnonzero(inner0 & ~in_f)
    v0_sub = g.subgraph(left, vertices=m0)
    a, b = bipartition_edges(v0_sub.graph, r1, r2, seed=seed, max_trials=max_trials)
    U1, U2 = np.sort(v0_sub.vertices[a]), np.sort(v0_sub.vertices[b])

    touches2 = m2[u] | m2[v]
    touches1 = m1[u] | m1[v]
    E1 = np.flatnonzero(touches2 & ~in_f)
    E2 = np.flatnonzero(touches1 & ~touches2 & ~in_f)
    E3 = np.flatnonzero(inner0 & ~in_f)
    in_fs = np.zeros(g.m, dtype=bool)
    in_fs[sp.forest.edges] = True
    E4 = np.flatnonzero(in_f & ~in_fs)
    E5 = np.flatnonzero(in_fs)
    plan = PartitionPlan(sp, F, U1, U2, U3, E1, E2, E3, E4, E5)
    check_partition(g, plan, delta, r, r1, r2)
    return plan
