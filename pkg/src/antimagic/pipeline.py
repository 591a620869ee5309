"""Labelling pipeline: constants, label pools, the five edge-class stages,
the minimum-degree labelling and the full average-degree reduction.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import (
    AntimagicError,
    ConditionError,
    LabelExhaustedError,
    PipelineError,
    PreconditionError,
)
from .graph import Graph, as_vertex_mask
from .labelling import PartialLabelling, histogram_of
from .modular import colour_AB, isolated_edges, label_boundary, label_two_moduli
from .partition import (
    PartitionPlan,
    _domination_terms,
    build_partition,
    m_prime,
    r_core,
    z_bound,
)
from .rng import derive_seed

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# configuration and constants


@dataclass(frozen=True)
class PipelineConfig:
    k1: int = 13
    k2: int = 11
    seed: int = 0
    bipartition_trials: int = 64
    skip_delta_check: bool = False
    core_degree: int | None = None  # only honoured with skip_delta_check

    @property
    def K(self) -> int:
        return self.k1 * self.k2

    def validate(self) -> None:
        k1, k2 = self.k1, self.k2
        if k1 % 2 == 0 or k2 % 2 == 0 or k1 < 9 or k2 < 9:
            raise PreconditionError("PipelineConfig", "k1 and k2 odd and at least 9", f"({k1}, {k2})")
        if gcd(k1, k2) != 1:
            raise PreconditionError("PipelineConfig", "k1 and k2 coprime", f"({k1}, {k2})")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Constants:
    k1: int
    k2: int
    c: int
    delta: int
    d0: int
    rhs: float

    def to_json(self) -> dict:
        return asdict(self)


def slack(k1: int, k2: int) -> float:
    return 0.5 - 2 / min(k1 - 4, k2 - 3)


def delta_rhs(k1: int, k2: int) -> float:
    """Right-hand side of the minimum-degree requirement.

    Both ``m'(k1k2+1, k2+1)`` and ``m'(k1k2+1, k1+1)`` enter the maximum.
    """
    K = k1 * k2
    return max(2 * K + k2, m_prime(K + 1, k2 + 1) + 1, m_prime(K + 1, k1 + 1) + 1) + 6 * k1 + 2 * k2 + 2


def delta_lhs(delta: int, k1: int, k2: int) -> float:
    return delta * (0.5 - z_bound(5, delta) - 2 / min(k1 - 4, k2 - 3))


def delta_condition_holds(delta: int, k1: int, k2: int) -> bool:
    return delta >= 5 and delta_lhs(delta, k1, k2) >= delta_rhs(k1, k2)


@lru_cache(maxsize=None)
def constants(k1: int = 13, k2: int = 11) -> Constants:
    """``c``, the least admissible minimum degree ``delta``, and ``d0``.

    ``delta`` is found by increasing search. A vectorised grid pass rules
    out every degree whose grid value falls short by more than one, then
    the exact :func:`z_bound` decides the remaining candidates in order.
    """
    if k1 % 2 == 0 or k2 % 2 == 0 or gcd(k1, k2) != 1:
        raise PreconditionError("constants", "k1, k2 coprime and odd", f"({k1}, {k2})")
    s = slack(k1, k2)
    if s <= 0:
        raise PreconditionError("constants", "min(k1-4, k2-3) > 4", f"({k1}, {k2})")
    K = k1 * k2
    rhs = delta_rhs(k1, k2)
    grid = np.geomspace(1e-7, 1 - 1e-9, 512)
    start, chunk = 5, 512
    delta = None
    while delta is None:
        ds = np.arange(start, start + chunk)
        # grid minimum per delta; an upper bound on z_bound, so a lower bound on the lhs
        zs = np.array([_domination_terms(5, int(d), grid).min() for d in ds])
        lhs = ds * (s - np.minimum(zs, 1.0))
        for d in ds[lhs >= rhs - 1].tolist():
            if delta_condition_holds(d, k1, k2):
                delta = d
                break
        start += chunk
        if start > 10**7:
            raise PreconditionError("constants", "a finite admissible delta exists")
    c = 2 * K + k2
    return Constants(k1, k2, c, delta, 2 * max(c, delta - 1 + 3 * K), rhs)


def crt_residue(k1: int, k2: int, a1: int, a2: int) -> int:
    """The unique x in [0, k1*k2) with x = a1 mod k1 and x = a2 mod k2."""
    K = k1 * k2
    return (a1 * k2 * pow(k2, -1, k1) + a2 * k1 * pow(k1, -1, k2)) % K


def partition_parameters(n: int, cfg: PipelineConfig) -> tuple[int, int, int]:
    """(r, r1, r2) for the partition step."""
    k1, k2, K = cfg.k1, cfg.k2, cfg.K
    r1 = (K + 1) * n
    r2 = (k1 + 1) * n
    r = math.ceil(max(2 * (K + k1) * n, (2 * K + k2) * n, m_prime(K + 1, k1 + 1) * n + n))
    return r, r1, r2


# ---------------------------------------------------------------------------
# label pools


@dataclass
class LabelPools:
    L: np.ndarray
    L1: np.ndarray
    L2: np.ndarray
    L3: np.ndarray
    L4: np.ndarray
    LT: np.ndarray
    m_elem: int

    def sizes(self) -> dict:
        return {k: int(len(getattr(self, k))) for k in ("L", "L1", "L2", "L3", "L4", "LT")}


def plan_label_pools(n: int, plan: PartitionPlan, L, cfg: PipelineConfig) -> LabelPools:
    op = "plan_label_pools"
    K, k1, k2 = cfg.K, cfg.k1, cfg.k2
    L = np.unique(np.asarray(L, dtype=np.int64))
    c = 2 * K + k2
    if len(L) < c * n or L[0] != 1 or L[c * n - 1] != c * n:
        raise PreconditionError(op, "L contains [1, (2*k1*k2+k2)n]")
    f_size = plan.F.size
    if len(plan.V1) > len(plan.V2):
        raise PreconditionError(op, "|V1| <= |V2|")
    L4 = K * np.arange(1, f_size + 1, dtype=np.int64)
    L1 = np.setdiff1d(np.arange(1, K * n + 1, dtype=np.int64), L4, assume_unique=True)
    top = int(L1.max())
    size2 = K * (2 * len(plan.V1) + len(plan.U3))
    L2 = np.arange(top + 1, top + 1 + size2, dtype=np.int64)
    top2 = top + size2
    size3 = (len(plan.V0) - len(plan.U3) - 1) * (K + k2)
    L3 = np.arange(top2 + 1, top2 + 1 + max(size3, 0), dtype=np.int64)
    top3 = top2 + max(size3, 0)
    if top3 >= c * n:
        raise ConditionError(op, "controlled pools stay below (2*k1*k2+k2)n", f"max {top3}")
    taken = np.zeros(len(L), dtype=bool)
    taken[:top3] = True  # L starts with [1, cn] so the first top3 entries are 1..top3
    LT = L[~taken]
    return LabelPools(L, L1, L2, L3, L4, LT, crt_residue(k1, k2, 0, 1))


# ---------------------------------------------------------------------------
# pipeline state and stages


@dataclass
class PipelineState:
    graph: Graph
    cfg: PipelineConfig
    plan: PartitionPlan
    pools: LabelPools
    f: PartialLabelling
    diagnostics: dict = field(default_factory=dict)
    lt_front: int = 0  # labels LT[:lt_front] were spent in stage E1

    @property
    def K(self) -> int:
        return self.cfg.K

    def masks(self):
        n = self.graph.n
        return tuple(as_vertex_mask(n, x) for x in (self.plan.V0, self.plan.V1, self.plan.V2))

    def centre_mask(self) -> np.ndarray:
        m = np.zeros(self.graph.n, dtype=bool)
        m[self.plan.stars.centres] = True
        return m

    def v2_targets(self) -> np.ndarray:
        """Residue mod k1*k2*n required at each V2 vertex."""
        v2 = self.plan.V2
        return np.where(self.centre_mask()[v2], 1, self.pools.m_elem)


def _check_v2(state: PipelineState, op: str) -> None:
    Kn = state.K * state.graph.n
    v2 = state.plan.V2
    if v2.size and not np.array_equal(np.mod(state.f.sums[v2], Kn), state.v2_targets() % Kn):
        raise ConditionError(op, "V2 sums keep their residues mod k1*k2*n")


def _check_v1(state: PipelineState, op: str) -> None:
    v1 = state.plan.V1
    if v1.size and (np.mod(state.f.sums[v1], state.K) != 1).any():
        raise ConditionError(op, "V1 sums congruent to 1 mod k1*k2")


def _check_u3(state: PipelineState, op: str) -> None:
    u3, k1 = state.plan.U3, state.cfg.k1
    hist = histogram_of(state.f.sums, u3, k1)
    if hist[0] or hist[1] or (u3.size and hist.max_excluding() > len(u3) / (k1 - 4) + 2 * k1 - 3):
        raise ConditionError(op, "U3 residue histogram mod k1")


def _u_primes(state: PipelineState):
    u3 = as_vertex_mask(state.graph.n, state.plan.U3)
    u1 = as_vertex_mask(state.graph.n, state.plan.U1) & ~u3
    u2 = as_vertex_mask(state.graph.n, state.plan.U2) & ~u3
    return np.flatnonzero(u1), np.flatnonzero(u2)


def _check_u_primes(state: PipelineState, op: str) -> None:
    cfg = state.cfg
    for verts, k in zip(_u_primes(state), (cfg.k1, cfg.k2)):
        hist = histogram_of(state.f.sums, verts, k)
        if hist[0] or hist[1] or (verts.size and hist.max_excluding() > len(verts) / (k - 3) + k + 2):
            raise ConditionError(op, f"U' residue histogram mod {k}")


def stage_E1(state: PipelineState) -> PipelineState:
    """Fix every V2 sum modulo k1*k2*n using two L1 labels per vertex."""
    op = "stage_E1"
    g, plan, pools, f = state.graph, state.plan, state.pools, state.f
    n, K = g.n, state.K
    Kn = K * n
    m0, m1, m2 = state.masks()
    m01 = m0 | m1
    E1 = plan.E1
    ends = g.edges[E1]
    owner = np.where(m2[ends[:, 0]] & m01[ends[:, 1]], ends[:, 0],
                     np.where(m2[ends[:, 1]] & m01[ends[:, 0]], ends[:, 1], -1))
    cand = np.flatnonzero(owner >= 0)
    order = cand[np.argsort(owner[cand], kind="stable")]
    own = owner[order]
    first = np.r_[True, own[1:] != own[:-1]] if len(own) else np.zeros(0, dtype=bool)
    starts = np.flatnonzero(first)
    counts = np.diff(np.r_[starts, len(own)])
    grp_start = np.repeat(starts, counts)
    rank = np.arange(len(own)) - grp_start
    chosen = order[rank < 2]
    chosen_owner = owner[chosen]
    per_vertex = np.bincount(chosen_owner, minlength=n)
    if (per_vertex[m2] < 2).any():
        raise PreconditionError(op, "two non-forest edges from every V2 vertex to V0 and V1")
    in_prime = np.zeros(len(E1), dtype=bool)
    in_prime[chosen] = True
    rest = E1[~in_prime]
    if len(rest) > len(pools.LT):
        raise LabelExhaustedError(op, None, "not enough free labels")
    f.assign(rest, pools.LT[:len(rest)])
    state.lt_front = len(rest)

    pair_of = {}
    for e_local, v in zip(chosen.tolist(), chosen_owner.tolist()):
        pair_of.setdefault(v, []).append(int(E1[e_local]))
    avail = pools.L1.tolist()
    avail_set = set(avail)
    centre = state.centre_mask()
    target = {True: 1, False: pools.m_elem}
    sums = f.sums
    edges_out, labels_out = [], []
    min_left = len(avail)
    for v in plan.V2.tolist():
        want = (target[bool(centre[v])] - int(sums[v])) % Kn
        found = None
        for l1 in avail:
            r2 = (want - l1) % Kn
            l2 = r2 if r2 else Kn
            if l2 != l1 and l2 in avail_set:
                found = (l1, l2)
                break
        if found is None:
            raise LabelExhaustedError(op, pair_of[v][0], f"no L1 pair for vertex {v}")
        l1, l2 = found
        avail.remove(l1)
        avail.remove(l2)
        avail_set.discard(l1)
        avail_set.discard(l2)
        e1, e2 = sorted(pair_of[v])
        edges_out.extend((e1, e2))
        labels_out.extend((l1, l2))
        min_left = min(min_left, len(avail))
        if len(avail) <= Kn / 2:
            raise ConditionError(op, "more than k1*k2*n/2 labels of L1 remain")
    f.assign(edges_out, labels_out)
    state.diagnostics["E1_min_L1_left"] = min_left
    _check_v2(state, op)
    return state


def _used_mask(state: PipelineState) -> np.ndarray:
    used = np.zeros(int(state.pools.L.max()) + 1, dtype=bool)
    used[state.f.used_values()] = True
    return used


def stage_E2(state: PipelineState) -> PipelineState:
    """Fix V1 sums to 1 mod k1*k2 and spread U3 sums mod k1."""
    op = "stage_E2"
    g, plan, pools, f = state.graph, state.plan, state.pools, state.f
    cfg = state.cfg
    m0, m1, _ = state.masks()
    before = f.values[plan.E1].copy()
    sub = g.subgraph(plan.E2, vertices=m0 | m1)
    labels = np.concatenate([pools.L2, pools.LT[state.lt_front:]])
    p = colour_AB(sub.graph, f.sums[sub.vertices], sub.to_local(m1), sub.to_local(m0),
                  sub.to_local(plan.U3), 1, cfg.k1, cfg.k2, labels)
    f.assign(plan.E2, p.values)
    if not np.array_equal(f.values[plan.E1], before):
        raise ConditionError(op, "E1 labels unchanged")
    if not f.is_injective():
        raise ConditionError(op, "labelling injective")
    _check_v2(state, op)
    _check_v1(state, op)
    _check_u3(state, op)
    return state


def stage_E3(state: PipelineState) -> PipelineState:
    """Label E3 bijectively with every remaining non-L4 label."""
    op = "stage_E3"
    g, plan, pools, f = state.graph, state.plan, state.pools, state.f
    cfg = state.cfg
    used = _used_mask(state)
    is_l4 = np.zeros_like(used)
    is_l4[pools.L4] = True
    L = pools.L
    rest = L[~used[L] & ~is_l4[L]]
    if len(rest) != len(plan.E3):
        raise ConditionError(op, "remaining non-L4 labels match |E3|", f"{len(rest)} vs {len(plan.E3)}")
    u1, u2 = _u_primes(state)
    verts = np.union1d(u1, u2)
    sub = g.subgraph(plan.E3, vertices=verts)
    p = label_two_moduli(sub.graph, f.sums[sub.vertices], sub.to_local(u1), sub.to_local(u2),
                         cfg.k1, cfg.k2, rest)
    f.assign(plan.E3, p.values)
    labelled = np.concatenate([plan.E1, plan.E2, plan.E3])
    nonl4 = L[~is_l4[L]]
    if not np.array_equal(np.sort(f.values[labelled]), nonl4):
        raise ConditionError(op, "E1, E2, E3 labelled bijectively onto L minus L4")
    _check_v2(state, op)
    _check_v1(state, op)
    _check_u3(state, op)
    _check_u_primes(state, op)
    return state


def e5_margin(state: PipelineState) -> tuple[float, float]:
    """(|E5| + 1, conflict bound) for the forest greedy step."""
    cfg = state.cfg
    k1, k2 = cfg.k1, cfg.k2
    u1, u2 = _u_primes(state)
    rhs = 2 * (len(state.plan.U3) / (k1 - 4) + len(u1) / (k1 - 3) + len(u2) / (k2 - 3)) + 6 * k1 + 2 * k2
    return len(state.plan.E5) + 1, rhs


def stage_E4(state: PipelineState) -> PipelineState:
    """Greedy L4 labels on the non-star forest edges making V0 sums distinct."""
    op = "stage_E4"
    g, plan, pools, f = state.graph, state.plan, state.pools, state.f
    cfg = state.cfg
    delta = g.min_degree()
    if not cfg.skip_delta_check and not delta_condition_holds(delta, cfg.k1, cfg.k2):
        raise PreconditionError(op, "minimum degree satisfies the delta requirement", f"delta={delta}")
    lhs, rhs = e5_margin(state)
    state.diagnostics["E5_margin"] = {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs}
    m0, _, _ = state.masks()
    sums = f.sums.tolist()
    counts: dict[int, int] = {}
    for v in plan.V0.tolist():
        counts[sums[v]] = counts.get(sums[v], 0) + 1
    avail = pools.L4.tolist()
    out_e, out_l = [], []
    for e, (u, v) in zip(plan.E4.tolist(), g.edges[plan.E4].tolist()):
        ends0 = [w for w in (u, v) if m0[w]]
        pick = None
        for i, lab in enumerate(avail):
            ok = True
            for w in ends0:
                want = sums[w] + lab
                if counts.get(want, 0) - sum(1 for x in ends0 if sums[x] == want) > 0:
                    ok = False
                    break
            if ok:
                pick = i
                break
        if pick is None:
            raise LabelExhaustedError(op, e, "every remaining L4 label clashes")
        lab = avail.pop(pick)
        for w in ends0:
            counts[sums[w]] -= 1
            counts[sums[w] + lab] = counts.get(sums[w] + lab, 0) + 1
        sums[u] += lab
        sums[v] += lab
        out_e.append(e)
        out_l.append(lab)
    f.assign(out_e, out_l)
    s0 = f.sums[plan.V0]
    if np.unique(s0).size != s0.size:
        raise ConditionError(op, "V0 sums pairwise distinct")
    res = np.mod(s0, state.K)
    if np.isin(res, [0, 1, pools.m_elem]).any():
        raise ConditionError(op, "V0 sums avoid 0, 1 and m mod k1*k2")
    _check_v2(state, op)
    _check_v1(state, op)
    return state


def label_stars(stars, labels, g) -> dict[int, int]:
    """Assign ``labels`` bijectively to the star edges so centre sums differ.

    Repeatedly gives the star whose centre would be smallest when receiving
    the smallest remaining labels exactly those labels. ``g`` is indexed by
    centre vertex; ``stars`` are :class:`Star` objects.
    """
    labels = np.sort(np.asarray(labels, dtype=np.int64))
    sizes = np.array([len(s.edges) for s in stars], dtype=np.int64)
    if sizes.sum() != len(labels):
        raise PreconditionError("label_stars", "|L| equals the number of star edges",
                                f"{len(labels)} vs {int(sizes.sum())}")
    g = np.asarray(g, dtype=np.int64)
    base = np.array([g[s.centre] for s in stars], dtype=np.int64)
    prefix = np.concatenate([[0], np.cumsum(labels)])
    alive = np.ones(len(stars), dtype=bool)
    out: dict[int, int] = {}
    pos = 0
    for _ in range(len(stars)):
        cand = np.flatnonzero(alive)
        ni = base[cand] + prefix[pos + sizes[cand]] - prefix[pos]
        i = int(cand[np.argmin(ni)])
        for e, lab in zip(stars[i].edges.tolist(), labels[pos:pos + sizes[i]].tolist()):
            out[int(e)] = int(lab)
        pos += int(sizes[i])
        alive[i] = False
    return out


def stage_E5(state: PipelineState) -> PipelineState:
    """Label the star edges with the last L4 labels; the result is complete."""
    op = "stage_E5"
    plan, pools, f = state.plan, state.pools, state.f
    used = _used_mask(state)
    rest = pools.L4[~used[pools.L4]]
    mapping = label_stars(plan.stars.stars, rest, f.sums)
    edges = np.fromiter(mapping.keys(), dtype=np.int64, count=len(mapping))
    f.assign(edges, np.fromiter(mapping.values(), dtype=np.int64, count=len(mapping)))
    if not f.complete:
        raise ConditionError(op, "every edge labelled")
    if not np.array_equal(np.sort(f.values), pools.L):
        raise ConditionError(op, "labelling is a bijection onto L")
    s = f.sums
    if np.unique(s).size != s.size:
        raise ConditionError(op, "all vertex sums distinct")
    if (np.mod(s, state.K) == 0).any():
        raise ConditionError(op, "no vertex sum divisible by k1*k2")
    return state


STAGES = (("E1", stage_E1), ("E2", stage_E2), ("E3", stage_E3), ("E4", stage_E4), ("E5", stage_E5))


# ---------------------------------------------------------------------------
# orchestration


@dataclass
class PipelineResult:
    graph: Graph
    labels: np.ndarray
    sums: np.ndarray
    base: np.ndarray
    cfg: PipelineConfig
    diagnostics: dict = field(default_factory=dict)
    plan: PartitionPlan | None = None


def label_min_degree(g: Graph, L=None, potential=None, cfg: PipelineConfig | None = None, *,
                     return_state: bool = False):
    """Bijective labelling onto ``L`` with distinct sums, none divisible by k1*k2.

    ``L`` defaults to ``[1, |E|]`` and ``potential`` (the vertex function
    added to every sum) to zero.
    """
    cfg = cfg or PipelineConfig()
    cfg.validate()
    n = g.n
    L = np.arange(1, g.m + 1, dtype=np.int64) if L is None else np.unique(np.asarray(L, dtype=np.int64))
    if len(L) != g.m:
        raise PreconditionError("label_min_degree", "|L| = |E|", f"{len(L)} vs {g.m}")
    const = constants(cfg.k1, cfg.k2)
    delta = g.min_degree()
    if not cfg.skip_delta_check and delta < const.delta:
        raise PreconditionError("label_min_degree", f"minimum degree at least {const.delta}",
                                f"found {delta}")
    c = const.c
    if len(L) < c * n or L[0] != 1 or L[c * n - 1] != c * n:
        raise PreconditionError("label_min_degree", f"L contains [1, {c}|V|]")
    base = np.zeros(n, dtype=np.int64) if potential is None else np.asarray(potential, dtype=np.int64)
    r, r1, r2 = partition_parameters(n, cfg)
    diagnostics: dict = {"n": n, "m": g.m, "delta": delta, "r": r, "r1": r1, "r2": r2, "timings": {}}
    t0 = time.perf_counter()
    try:
        plan = build_partition(g, delta, r, r1, r2, seed=derive_seed(cfg.seed, "partition"),
                               max_trials=cfg.bipartition_trials)
    except AntimagicError as exc:
        raise PipelineError("partition", exc) from exc
    diagnostics["timings"]["partition"] = time.perf_counter() - t0
    diagnostics["classes"] = {f"E{i}": int(len(e)) for i, e in enumerate(plan.edge_classes(), 1)}
    diagnostics["parts"] = {"V0": int(len(plan.V0)), "V1": int(len(plan.V1)),
                            "V2": int(len(plan.V2)), "U3": int(len(plan.U3))}
    try:
        pools = plan_label_pools(n, plan, L, cfg)
    except AntimagicError as exc:
        raise PipelineError("pools", exc) from exc
    state = PipelineState(g, cfg, plan, pools, PartialLabelling(g, base), diagnostics)
    for name, stage in STAGES:
        t0 = time.perf_counter()
        try:
            stage(state)
        except AntimagicError as exc:
            raise PipelineError(name, exc) from exc
        diagnostics["timings"][name] = time.perf_counter() - t0
        log.info("stage %s done in %.2fs", name, diagnostics["timings"][name])
    if return_state:
        return state
    return PipelineResult(g, state.f.values.copy(), state.f.sums.copy(), base, cfg, diagnostics, plan)


def obstruction(g: Graph) -> str | None:
    """Why ``g`` is trivially not antimagic, or None."""
    iso = isolated_edges(g)
    if iso.size:
        return f"isolated edge {tuple(int(x) for x in g.edges[iso[0]])}"
    if int((g.degree == 0).sum()) > 1:
        return "more than one isolated vertex"
    return None


def label_graph(g: Graph, cfg: PipelineConfig | None = None) -> PipelineResult:
    """Antimagic labelling of a graph of large average degree onto ``[1, |E|]``.

    The low-degree shell gets the top labels with sums divisible by k1*k2;
    the core is then labelled by :func:`label_min_degree` with the shell
    sums as potential.
    """
    cfg = cfg or PipelineConfig()
    cfg.validate()
    why = obstruction(g)
    if why:
        raise PreconditionError("label_graph", "no isolated edge and at most one isolated vertex", why)
    const = constants(cfg.k1, cfg.k2)
    K = cfg.K
    avg = 2 * g.m / g.n if g.n else 0.0
    if not cfg.skip_delta_check and avg < const.d0:
        raise PreconditionError("label_graph", f"average degree at least {const.d0}", f"found {avg:.1f}")
    delta = const.delta
    if cfg.skip_delta_check and cfg.core_degree is not None:
        delta = cfg.core_degree
    split = r_core(g, delta)
    v0, v1 = split.shell, split.core
    diagnostics: dict = {"core_degree": delta, "core": int(len(v1)), "shell": int(len(v0))}
    labels = np.zeros(g.m, dtype=np.int64)
    m_core = as_vertex_mask(g.n, v1)
    core_edges = np.flatnonzero(m_core[g.edges[:, 0]] & m_core[g.edges[:, 1]])
    shell_edges = np.setdiff1d(np.arange(g.m), core_edges)
    potential = np.zeros(g.n, dtype=np.int64)
    if v0.size:
        lo = g.m - (delta - 1 + 3 * K) * len(v0) + 1
        try:
            fb = label_boundary(g, delta, K, (lo, g.m))
        except AntimagicError as exc:
            raise PipelineError("boundary", exc) from exc
        labels[shell_edges] = fb.values[shell_edges]
        potential = fb.sums
    used = np.zeros(g.m + 1, dtype=bool)
    used[labels[shell_edges]] = True
    L = np.flatnonzero(~used[1:]) + 1
    c = const.c
    if len(L) < c * len(v1) or (c * len(v1) and L[c * len(v1) - 1] != c * len(v1)):
        raise PipelineError("boundary", f"remaining labels do not contain [1, {c}|V1|]")
    if v1.size:
        sub = g.subgraph(core_edges, vertices=v1)
        core_cfg = cfg
        res = label_min_degree(sub.graph, L, potential[v1], core_cfg)
        labels[core_edges] = res.labels
        diagnostics["core_pipeline"] = res.diagnostics
    f = PartialLabelling(g)
    f.assign(np.arange(g.m), labels)
    return PipelineResult(g, labels, f.sums.copy(), np.zeros(g.n, dtype=np.int64), cfg, diagnostics)
