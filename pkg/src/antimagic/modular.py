"""Edge colourings and labellings that control vertex sums modulo k.

Every routine here checks its hypotheses up front (raising
:class:`PreconditionError`) and re-checks the promised residue histogram
before returning (raising :class:`ConditionError`), so a returned object
always satisfies its contract.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from .errors import ConditionError, GraphError, LabelExhaustedError, PreconditionError
from .graph import (
    Graph,
    MultiGraph,
    as_vertex_array,
    as_vertex_mask,
    bfs_forest,
    component_labels,
    eulerian_circuits,
    spanning_forest,
)
from .labelling import PartialLabelling, histogram_of, residue_histogram, smallest_per_class  # noqa: F401


def _require_odd(op: str, k: int, least: int) -> None:
    if k % 2 == 0 or k < least:
        raise PreconditionError(op, f"k odd and at least {least}", f"k={k}")


def _check_histogram(op: str, sums, vertices, k: int, bound: float, excluded=(0, 1)) -> None:
    hist = histogram_of(np.asarray(sums), vertices, k)
    for i in excluded:
        if hist[i]:
            raise ConditionError(op, f"no vertex sum congruent to {i} mod {k}",
                                 f"found {hist[i]}")
    worst = hist.max_excluding(excluded)
    if worst > bound:
        raise ConditionError(op, f"each residue class mod {k} holds at most {bound:.3f} sums",
                             f"found {worst}")


def _as_potential(n: int, g) -> np.ndarray:
    if g is None:
        return np.zeros(n, dtype=np.int64)
    arr = np.asarray(g, dtype=np.int64)
    if arr.ndim == 0:
        return np.full(n, int(arr), dtype=np.int64)
    if arr.shape != (n,):
        raise GraphError(f"vertex potential has shape {arr.shape}, expected ({n},)")
    return arr


def _peel(order, parent, parent_edge, skip, target, sums, k, colours) -> None:
    """Colour tree edges leaf-first so every peeled vertex hits ``target`` mod k.

    ``order`` lists tree vertices root-first (BFS order); each vertex is
    handled after all of its descendants. Vertices in ``skip`` and roots are
    left alone; a target of -1 means "unconstrained" and gets colour 0.
    All list arguments are mutated in place.
    """
    for v in reversed(order):
        e = parent_edge[v]
        if e < 0 or v in skip:
            continue
        t = target[v]
        c = (t - sums[v]) % k if t >= 0 else 0
        colours[e] = c
        sums[v] += c
        sums[parent[v]] += c


# ---------------------------------------------------------------------------
# two-colouring with every colour present at every vertex


def equitable_two_colouring(g: Graph, k: int) -> np.ndarray:
    """Colour edges 1/2 so every vertex meets at least ``k`` edges of each colour.

    Odd-degree vertices of each component are paired in index order by
    dummy edges; an Eulerian circuit of each component (starting on a dummy
    edge when there is one) is then coloured alternately.
    """
    op = "equitable_two_colouring"
    if k < 1:
        raise PreconditionError(op, "k >= 1", f"k={k}")
    if g.n and g.min_degree() < 2 * k + 1:
        v = int(np.argmin(g.degree))
        raise PreconditionError(op, f"minimum degree at least {2 * k + 1}",
                                f"vertex {v} has degree {int(g.degree[v])}")
    if g.m == 0:
        return np.zeros(0, dtype=np.int64)
    _, comp = component_labels(g)
    odd = np.flatnonzero(g.degree % 2)
    odd = odd[np.lexsort((odd, comp[odd]))]
    dummy = odd.reshape(-1, 2)
    mg = MultiGraph(g.n, np.concatenate([g.edges, dummy]) if len(dummy) else g.edges)

    edge_comp = comp[mg.edges[:, 0]]
    ncomp = int(comp.max()) + 1
    first_dummy = np.full(ncomp, mg.m)
    if len(dummy):
        ids = np.arange(g.m, mg.m)
        np.minimum.at(first_dummy, edge_comp[ids], ids)
    first_real = np.full(ncomp, mg.m)
    np.minimum.at(first_real, edge_comp[:g.m], np.arange(g.m))
    start = np.where(first_dummy < mg.m, first_dummy, first_real)
    start = start[start < mg.m]

    colours = np.zeros(mg.m, dtype=np.int64)
    for circuit in eulerian_circuits(mg, start.tolist()):
        c = np.asarray(circuit, dtype=np.int64)
        colours[c] = 1 + (np.arange(len(c)) % 2)
    out = colours[:g.m]

    ones = np.bincount(g.edges[out == 1].ravel(), minlength=g.n)
    twos = g.degree - ones
    if min(ones.min(), twos.min()) < k or np.abs(ones - twos).max() > 2:
        raise ConditionError(op, f"at least {k} edges of each colour at every vertex")
    return out


# ---------------------------------------------------------------------------
# colourings modulo an odd k avoiding residues 0 and 1


def _matching_picks(k: int, a: int) -> list[int]:
    """Edges of the residue graph used for one difference class ``a``.

    The residue graph joins u and u+a in Z_k (a loop at every u when a=0).
    After deleting residues 0 and 1, cycles contribute each edge once and
    paths contribute every other edge twice. Each pick is returned as the
    residue u with the pick being {u, u+a}, so the two endpoint sums end up
    congruent to u+a and u.
    """
    if a == 0:
        return list(range(2, k))
    adj: dict[int, list[int]] = {v: [] for v in range(2, k)}
    for u in range(k):
        w = (u + a) % k
        if u > 1 and w > 1:
            adj[u].append(w)
            adj[w].append(u)

    def oriented(p: int, q: int) -> int:
        return p if (p + a) % k == q else q

    picks: list[int] = []
    seen: set[int] = set()
    for v0 in range(2, k):
        if v0 in seen:
            continue
        comp, stack = [], [v0]
        seen.add(v0)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if all(len(adj[x]) == 2 for x in comp):
            for u in sorted(comp):
                if (u + a) % k in adj[u]:
                    picks.append(u)
        else:
            ends = sorted(x for x in comp if len(adj[x]) <= 1)
            path, prev, cur = [ends[0]], -1, ends[0]
            while True:
                nxt = [y for y in adj[cur] if y != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                path.append(cur)
            for i in range(0, len(path) - 1, 2):
                u = oriented(path[i], path[i + 1])
                picks.extend([u, u])
    return picks


def colour_isolated_edges(g: Graph, potential, k: int) -> PartialLabelling:
    """Colour a matching mod k so no endpoint sum is 0 or 1 and classes stay small.

    Returns colours in ``0..k-1`` on every edge; each class 2..k-1 holds at
    most ``|V|/(k-3) + k + 1`` endpoint sums, where ``|V|`` counts matched
    vertices.
    """
    op = "colour_isolated_edges"
    _require_odd(op, k, 5)
    if g.m and g.degree.max() > 1:
        v = int(np.argmax(g.degree))
        raise PreconditionError(op, "graph is a matching", f"vertex {v} has degree {int(g.degree[v])}")
    pot = _as_potential(g.n, potential)
    x, y = g.edges[:, 0], g.edges[:, 1]
    d = np.mod(pot[x] - pot[y], k)
    flip = d > (k - 1) // 2
    v2 = np.where(flip, x, y)
    a = np.where(flip, np.mod(k - d, k), d)
    colours = np.zeros(g.m, dtype=np.int64)
    for a_val in np.unique(a).tolist():
        idx = np.flatnonzero(a == a_val)
        picks = np.asarray(_matching_picks(k, a_val), dtype=np.int64)
        if len(picks) < k - 3:
            raise ConditionError(op, f"at least {k - 3} residue pairs available", f"a={a_val}")
        us = picks[np.arange(len(idx)) % len(picks)]
        colours[idx] = np.mod(us - pot[v2[idx]], k)
    p = PartialLabelling(g, pot)
    p.assign(np.arange(g.m), colours)
    matched = np.flatnonzero(g.degree > 0)
    _check_histogram(op, p.sums, matched, k, len(matched) / (k - 3) + k + 1)
    return p


def colour_mod_k(g: Graph, potential, S, k: int) -> PartialLabelling:
    """Colour all edges mod k so sums on ``S`` avoid 0, 1 and no class is crowded.

    Each class 2..k-1 receives at most ``|S|/(k-3) + k + 2`` vertices of S.
    """
    op = "colour_mod_k"
    _require_odd(op, k, 5)
    n = g.n
    if n and g.degree.min() == 0:
        raise PreconditionError(op, "no isolated vertex", f"vertex {int(np.argmin(g.degree))}")
    pot = _as_potential(n, potential)
    s_mask = as_vertex_mask(n, S)
    colours = np.zeros(g.m, dtype=np.int64)
    if g.m == 0:
        p = PartialLabelling(g, pot)
        return p

    ncomp, comp = component_labels(g)
    free_count = np.bincount(comp, weights=~s_mask, minlength=ncomp)
    edge_comp = comp[g.edges[:, 0]]
    first_edge = np.full(ncomp, g.m)
    np.minimum.at(first_edge, edge_comp, np.arange(g.m))
    inside = free_count == 0
    protected = first_edge[inside]
    lowest_free = np.full(ncomp, n)
    free_vs = np.flatnonzero(~s_mask)
    np.minimum.at(lowest_free, comp[free_vs], free_vs)
    roots = np.where(inside, g.edges[first_edge.clip(max=g.m - 1), 0], lowest_free)

    tree = spanning_forest(g, protected)
    t_graph = Graph(n, g.edges[tree.edges], check=False)
    bfs = bfs_forest(t_graph, sources=roots)
    pe = bfs.parent_edge
    parent_edge = np.where(pe >= 0, tree.edges[np.maximum(pe, 0)], -1)

    in_protected = np.zeros(n, dtype=bool)
    in_protected[g.edges[protected].ravel()] = True
    vprime = np.flatnonzero(s_mask & ~in_protected)
    target = np.full(n, -1, dtype=np.int64)
    target[vprime] = 2 + np.arange(len(vprime)) % (k - 2)
    skip = set(g.edges[protected, 1].tolist())

    sums = np.mod(pot, k).tolist()
    col = colours.tolist()
    _peel(bfs.order, bfs.parent.tolist(), parent_edge.tolist(), skip, target.tolist(), sums, k, col)
    colours = np.asarray(col, dtype=np.int64)

    if protected.size:
        sub = g.subgraph(protected, vertices=np.arange(n))
        iso = colour_isolated_edges(sub.graph, np.asarray(sums, dtype=np.int64), k)
        colours[protected] = iso.values

    p = PartialLabelling(g, pot)
    p.assign(np.arange(g.m), colours)
    s_idx = np.flatnonzero(s_mask)
    if vprime.size:
        got = np.mod(p.sums[vprime], k)
        # every peeled vertex of S must land on its prescribed residue
        if not np.array_equal(got, target[vprime]):
            raise ConditionError(op, "peeled vertices reach their target residues")
    _check_histogram(op, p.sums, s_idx, k, len(s_idx) / (k - 3) + k + 2)
    return p


def _crt_table(k1: int, k2: int) -> np.ndarray:
    table = np.empty((k1, k2), dtype=np.int64)
    x = np.arange(k1 * k2)
    table[x % k1, x % k2] = x
    return table


def star_subforest(g: Graph) -> np.ndarray:
    """Edge ids of a spanning subgraph with no isolated vertices and < |V| edges.

    Starts from a spanning forest and drops, in index order, every edge
    whose endpoints both keep another edge. The result is a star forest.
    """
    tree = spanning_forest(g).edges
    deg = np.bincount(g.edges[tree].ravel(), minlength=g.n).tolist()
    keep = []
    for e, (u, v) in zip(tree.tolist(), g.edges[tree].tolist()):
        if deg[u] >= 2 and deg[v] >= 2:
            deg[u] -= 1
            deg[v] -= 1
        else:
            keep.append(e)
    return np.asarray(keep, dtype=np.int64)


def label_two_moduli(g: Graph, potential, V1, V2, k1: int, k2: int, L, *,
                     return_phases: bool = False):
    """Bijective labelling onto ``L`` controlling V1 sums mod k1 and V2 sums mod k2.

    On V1 no sum is 0 or 1 mod k1 and each other class holds at most
    ``|V1|/(k1-3) + k1 + 2`` vertices; symmetrically for V2 and k2.

    With ``return_phases`` a dict with the intermediate labellings is
    returned alongside: ``initial`` (before any swap), ``after_first``
    (V1 fixed) and the swap partners.
    """
    op = "label_two_moduli"
    _require_odd(op, k1, 5)
    _require_odd(op, k2, 5)
    if gcd(k1, k2) != 1:
        raise PreconditionError(op, "k1 and k2 coprime", f"gcd={gcd(k1, k2)}")
    n, K = g.n, k1 * k2
    m1, m2 = as_vertex_mask(n, V1), as_vertex_mask(n, V2)
    if (m1 & m2).any() or not (m1 | m2).all():
        raise PreconditionError(op, "V1 and V2 partition the vertex set")
    if n and g.degree.min() == 0:
        raise PreconditionError(op, "no isolated vertex", f"vertex {int(np.argmin(g.degree))}")
    e1 = np.flatnonzero(m1[g.edges[:, 0]] & m1[g.edges[:, 1]])
    e2 = np.flatnonzero(m2[g.edges[:, 0]] & m2[g.edges[:, 1]])
    if len(e1) < (K + 1) * n:
        raise PreconditionError(op, "|E(V1)| >= (k1*k2+1)|V|", f"{len(e1)} < {(K + 1) * n}")
    if len(e2) < (k1 + 1) * n:
        raise PreconditionError(op, "|E(V2)| >= (k1+1)|V|", f"{len(e2)} < {(k1 + 1) * n}")
    labels = np.sort(np.asarray(L, dtype=np.int64).ravel())
    if len(labels) != g.m or (len(labels) > 1 and (np.diff(labels) == 0).any()):
        raise PreconditionError(op, "L is a set of exactly |E| labels", f"|L|={len(labels)}, |E|={g.m}")
    per_K = np.bincount(np.mod(labels, K), minlength=K)
    if per_K.min() < n - 1:
        raise PreconditionError(op, "at least |V|-1 labels in each class mod k1*k2",
                                f"class {int(per_K.argmin())} has {int(per_K.min())}")
    per_k1 = np.bincount(np.mod(labels, k1), minlength=k1)
    if per_k1.min() < (k2 + 1) * (n - 1):
        raise PreconditionError(op, "at least (k2+1)(|V|-1) labels in each class mod k1",
                                f"class {int(per_k1.argmin())} has {int(per_k1.min())}")
    pot = _as_potential(n, potential)

    H = star_subforest(g)
    h = len(H)
    in_h = np.zeros(g.m, dtype=bool)
    in_h[H] = True
    A1 = e1[~in_h[e1]][:K * h]
    A2 = e2[~in_h[e2]][:k1 * h]

    # initial labelling: A1 gets h labels per class mod K, A2 h per class mod k1
    idx1 = smallest_per_class(labels, K, h)
    rest = np.delete(labels, idx1)
    idx2 = smallest_per_class(rest, k1, h)
    lab_a1 = labels[idx1]
    lab_a2 = rest[idx2]
    rest = np.delete(rest, idx2)
    others = np.ones(g.m, dtype=bool)
    others[A1] = False
    others[A2] = False
    f2 = PartialLabelling(g, pot)
    f2.assign(A1, lab_a1)
    f2.assign(A2, lab_a2)
    f2.assign(np.flatnonzero(others), rest)

    h_graph = Graph(n, g.edges[H], check=False)

    # phase 1: fix V1 modulo k1 by swapping H labels with A2 labels
    g2 = f2.sums_without(H)
    c1 = colour_mod_k(h_graph, g2, m1, k1).values
    queues: list[list[int]] = [[] for _ in range(k1)]
    for e, lab in zip(A2.tolist(), np.mod(f2.values[A2], k1).tolist()):
        queues[lab].append(e)
    heads = [0] * k1
    partners1 = []
    for c in c1.tolist():
        partners1.append(queues[c][heads[c]])
        heads[c] += 1
    f1 = f2.copy()
    f1.swap(H, partners1)

    # phase 2: fix V2 modulo k2 with A1 labels in the matching class mod k1*k2
    g1 = f1.sums_without(H)
    c2 = colour_mod_k(h_graph, g1, m2, k2).values
    crt = _crt_table(k1, k2)
    queues = [[] for _ in range(K)]
    for e, lab in zip(A1.tolist(), np.mod(f1.values[A1], K).tolist()):
        queues[lab].append(e)
    heads = [0] * K
    partners2 = []
    for cur, c in zip(np.mod(f1.values[H], k1).tolist(), c2.tolist()):
        cls = int(crt[cur, c])
        partners2.append(queues[cls][heads[cls]])
        heads[cls] += 1
    f = f1.copy()
    f.swap(H, partners2)

    if not np.array_equal(np.sort(f.values), labels):
        raise ConditionError(op, "labelling is a bijection onto L")
    v1 = np.flatnonzero(m1)
    v2 = np.flatnonzero(m2)
    _check_histogram(op, f.sums, v1, k1, len(v1) / (k1 - 3) + k1 + 2)
    _check_histogram(op, f.sums, v2, k2, len(v2) / (k2 - 3) + k2 + 2)
    if return_phases:
        phases = {"initial": f2, "after_first": f1, "H": H, "A1": A1, "A2": A2,
                  "partners_first": np.asarray(partners1, dtype=np.int64),
                  "partners_second": np.asarray(partners2, dtype=np.int64)}
        return f, phases
    return f


def colour_AB(g: Graph, potential, A, B, Bp, t, k1: int, k2: int, L) -> PartialLabelling:
    """Injective labelling into ``L`` fixing A sums mod k1*k2 and spreading Bp mod k1.

    Every ``a`` in A ends with sum congruent to ``t[a]`` modulo ``k1*k2``;
    sums on Bp avoid 0 and 1 mod k1 with at most ``|Bp|/(k1-4) + 2*k1 - 3``
    in any other class. ``t`` is a scalar or a per-vertex array.
    """
    op = "colour_AB"
    if k1 < 5:
        raise PreconditionError(op, "k1 >= 5", f"k1={k1}")
    if k2 < 1:
        raise PreconditionError(op, "k2 >= 1", f"k2={k2}")
    n, K = g.n, k1 * k2
    am, bm, bpm = as_vertex_mask(n, A), as_vertex_mask(n, B), as_vertex_mask(n, Bp)
    if (am & bm).any() or not (am | bm).all():
        raise PreconditionError(op, "A and B partition the vertex set")
    if (bpm & ~bm).any():
        raise PreconditionError(op, "B' is contained in B")
    pot = _as_potential(n, potential)
    target_t = _as_potential(n, t)
    A_idx, Bp_idx = np.flatnonzero(am), np.flatnonzero(bpm)

    # E': two B-edges per a in A, then one A-edge for each uncovered b in B'
    chosen: list[int] = []
    pairs: dict[int, tuple[int, int]] = {}
    for a in A_idx.tolist():
        inc = g.incident(a)
        sel = inc[bm[g.edges[inc].sum(axis=1) - a]][:2]
        if len(sel) < 2:
            raise PreconditionError(op, "every vertex of A has two edges to B", f"vertex {a}")
        pairs[a] = (int(sel[0]), int(sel[1]))
        chosen.extend(pairs[a])
    covered = np.zeros(n, dtype=bool)
    covered[g.edges[chosen].ravel()] = True
    for b in Bp_idx.tolist():
        inc = g.incident(b)
        sel = inc[am[g.edges[inc].sum(axis=1) - b]]
        if len(sel) == 0:
            raise PreconditionError(op, "every vertex of B' has an edge to A", f"vertex {b}")
        if not covered[b]:
            chosen.append(int(sel[0]))
    chosen_arr = np.asarray(sorted(chosen), dtype=np.int64)

    need = 2 * len(A_idx) + len(Bp_idx)
    labels = np.sort(np.asarray(L, dtype=np.int64).ravel())
    if len(labels) > 1 and (np.diff(labels) == 0).any():
        raise PreconditionError(op, "L has no repeated labels")
    if len(labels) < g.m + K * need:
        raise PreconditionError(op, "|L| >= |E| + k1*k2*(2|A|+|B'|)",
                                f"{len(labels)} < {g.m + K * need}")
    try:
        reserve_idx = smallest_per_class(labels, K, need)
    except ValueError as exc:
        raise PreconditionError(op, "2|A|+|B'| labels in each class mod k1*k2", str(exc)) from None
    reserve = labels[reserve_idx]
    free_labels = np.delete(labels, reserve_idx)

    p = PartialLabelling(g, pot)
    in_e1 = np.zeros(g.m, dtype=bool)
    in_e1[chosen_arr] = True
    rest_edges = np.flatnonzero(~in_e1)
    p.assign(rest_edges, free_labels[:len(rest_edges)])
    if chosen_arr.size == 0:
        return p

    # colour E' modulo K
    sub = Graph(n, g.edges[chosen_arr], check=False)
    local_of = {int(e): j for j, e in enumerate(chosen_arr.tolist())}
    ncomp, comp = component_labels(sub)
    has_edges = np.bincount(comp[sub.edges[:, 0]], minlength=ncomp) > 0
    outside = np.bincount(comp, weights=~(am | bpm), minlength=ncomp) > 0
    inner = has_edges & ~outside
    lowest_a = np.full(ncomp, n)
    np.minimum.at(lowest_a, comp[A_idx], A_idx)
    out_vs = np.flatnonzero(~(am | bpm))
    lowest_out = np.full(ncomp, n)
    np.minimum.at(lowest_out, comp[out_vs], out_vs)

    roots, required, p3 = [], [], []
    skip: set[int] = set()
    for c in np.flatnonzero(has_edges).tolist():
        if inner[c]:
            a = int(lowest_a[c])
            e_b1, e_b2 = pairs[a]
            b1, b2 = g.other_end(e_b1, a), g.other_end(e_b2, a)
            roots.append(a)
            required.extend([local_of[e_b1], local_of[e_b2]])
            skip.update((b1, b2))
            p3.append((a, b1, b2, e_b1, e_b2))
        else:
            roots.append(int(lowest_out[c]))
    tree = spanning_forest(sub, required)
    t_graph = Graph(n, sub.edges[tree.edges], check=False)
    bfs = bfs_forest(t_graph, sources=roots)
    pe = bfs.parent_edge
    parent_edge = np.where(pe >= 0, chosen_arr[tree.edges[np.maximum(pe, 0)]], -1)

    special = np.zeros(n, dtype=bool)
    for a, b1, b2, _, _ in p3:
        special[[a, b1, b2]] = True
    target = np.full(n, -1, dtype=np.int64)
    va = np.flatnonzero(am & ~special)
    target[va] = np.mod(target_t[va], K)
    vb = np.flatnonzero(bpm & ~special)
    target[vb] = 2 + np.arange(len(vb)) % (k1 - 2)

    sums = np.mod(p.sums, K).tolist()
    col = [0] * g.m
    _peel(bfs.order, bfs.parent.tolist(), parent_edge.tolist(), skip, target.tolist(), sums, K, col)

    # the remaining P3 pieces b1-a-b2
    member_count = [0] * k1
    for a, b1, b2, e_b1, e_b2 in p3:
        q = (int(target_t[a]) - sums[a]) % K
        j = (sums[b1] + sums[b2] + q) % K % k1
        member_count[j] += 1
        c = (member_count[j] - 1) % (k1 - 4)
        allowed = [x for x in range(k1) if x not in {0, 1, j, (j - 1) % k1}]
        d = allowed[c]
        x = (d - sums[b1]) % k1
        y = (q - x) % K
        col[e_b1], col[e_b2] = x, y
        sums[a] += x + y
        sums[b1] += x
        sums[b2] += y

    # labels for E' from the reserved classes, smallest first
    pools: list[list[int]] = [[] for _ in range(K)]
    for lab in reserve.tolist():
        pools[lab % K].append(lab)
    heads = [0] * K
    e_labels = []
    for e in chosen_arr.tolist():
        c = col[e] % K
        e_labels.append(pools[c][heads[c]])
        heads[c] += 1
    p.assign(chosen_arr, e_labels)

    if not p.is_injective():
        raise ConditionError(op, "labelling is injective")
    if A_idx.size and not np.array_equal(np.mod(p.sums[A_idx], K), np.mod(target_t[A_idx], K)):
        raise ConditionError(op, "every vertex of A has sum congruent to t mod k1*k2")
    _check_histogram(op, p.sums, Bp_idx, k1, len(Bp_idx) / (k1 - 4) + 2 * k1 - 3)
    return p


# ---------------------------------------------------------------------------
# sums divisible by k on the low-degree part


def _cycle_from(parent, depth, u: int, v: int) -> list[int]:
    """Vertices of the cycle closed by edge uv in a BFS tree, starting at u."""
    left, right = [u], [v]
    a, b = u, v
    while a != b:
        if depth[a] >= depth[b]:
            a = parent[a]
            left.append(a)
        else:
            b = parent[b]
            right.append(b)
    # left ends at the common ancestor; right ends there too
    return left + right[-2::-1]


def colour_boundary_divisible(g: Graph, V0, V1, k: int) -> PartialLabelling:
    """Colour E(V0, V) with 0..k-1 so every V0 sum is divisible by ``k``.

    Each colour is used at most ``|E(V0,V)|/k + |V0|`` times. Components
    meeting V1 are handled with a forest hanging from V1, other components
    with an odd cycle (non-bipartite) or a spanning tree (bipartite).
    """
    op = "colour_boundary_divisible"
    if k < 1 or k % 2 == 0:
        raise PreconditionError(op, "k odd", f"k={k}")
    n = g.n
    m0, m1 = as_vertex_mask(n, V0), as_vertex_mask(n, V1)
    if (m0 & m1).any() or not (m0 | m1).all():
        raise PreconditionError(op, "V0 and V1 partition the vertex set")
    bnd = np.flatnonzero(m0[g.edges[:, 0]] | m0[g.edges[:, 1]])
    p = PartialLabelling(g)
    if bnd.size == 0:
        return p
    hb = Graph(n, g.edges[bnd], check=False)

    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    order: list[int] = []
    cycles: list[tuple[list[int], list[int]]] = []

    first = bfs_forest(hb, sources=np.flatnonzero(m1), allowed=m0)
    parent[:] = first.parent
    parent_edge[:] = first.parent_edge
    order.extend(first.order)
    rest = m0.copy()
    rest[first.order] = False

    if rest.any():
        probe = bfs_forest(hb, allowed=rest)
        _, comp = component_labels(hb)
        eu, ev = hb.edges[:, 0], hb.edges[:, 1]
        same = rest[eu] & rest[ev] & (probe.depth[eu] == probe.depth[ev])
        odd_edge: dict[int, int] = {}
        for e in np.flatnonzero(same).tolist():
            odd_edge.setdefault(int(comp[eu[e]]), e)
        odd_roots: list[int] = []
        cyc_vertices = np.zeros(n, dtype=bool)
        for c, e in sorted(odd_edge.items()):
            u, v = int(eu[e]), int(ev[e])
            verts = _cycle_from(probe.parent, probe.depth, u, v)
            r = len(verts)
            edges = [hb.edge_id(verts[i], verts[(i + 1) % r]) for i in range(r)]
            cycles.append((verts, edges))
            cyc_vertices[verts] = True
            odd_roots.extend(verts)
        odd_comp = np.zeros(n, dtype=bool)
        if odd_edge:
            odd_comp = rest & np.isin(comp, list(odd_edge))
            hang = bfs_forest(hb, sources=odd_roots, allowed=odd_comp)
            sel = np.asarray(hang.order)
            parent[sel] = hang.parent[sel]
            parent_edge[sel] = hang.parent_edge[sel]
            order.extend(hang.order)
        bip = rest & ~odd_comp
        if bip.any():
            tree = bfs_forest(hb, allowed=bip)
            sel = np.asarray(tree.order)
            parent[sel] = tree.parent[sel]
            parent_edge[sel] = tree.parent_edge[sel]
            order.extend(tree.order)

    special = np.zeros(hb.m, dtype=bool)
    special[parent_edge[parent_edge >= 0]] = True
    for _, edges in cycles:
        special[edges] = True
    free = np.flatnonzero(~special)
    bound = hb.m / k + int(m0.sum())
    inv2 = pow(2, -1, k) if k > 1 else 0
    target = np.where(m0, 0, -1).tolist()
    par, pedge = parent.tolist(), parent_edge.tolist()

    for offset in range(k):
        col = [0] * hb.m
        base_cols = (offset + np.arange(len(free))) % k
        for e, c in zip(free.tolist(), base_cols.tolist()):
            col[e] = c
        sums = np.mod(hb.edge_sums(np.asarray(col, dtype=np.int64)), k).tolist()
        _peel(order, par, pedge, set(), target, sums, k, col)
        for verts, edges in cycles:
            r = len(verts)
            b = [(-sums[v]) % k for v in verts]
            alpha = 0
            for j in range(1, r):
                alpha = (b[j] - alpha) % k
            a0 = inv2 * (b[0] - alpha) % k
            vals = [a0]
            for j in range(1, r):
                vals.append((b[j] - vals[-1]) % k)
            for j, e in enumerate(edges):
                col[e] = vals[j]
                sums[verts[j]] += vals[j]
                sums[verts[(j + 1) % r]] += vals[j]
        usage = np.bincount(np.asarray(col), minlength=k)
        if usage.max() <= bound:
            break
    else:
        raise ConditionError(op, "each colour used at most |E(V0,V)|/k + |V0| times",
                             f"best usage {int(usage.max())} > {bound:.2f}")
    p.assign(bnd, col)
    v0 = np.flatnonzero(m0)
    if np.mod(p.sums[v0], k).any():
        raise ConditionError(op, f"every V0 sum divisible by {k}")
    return p


def _interval(L) -> tuple[int, int]:
    if isinstance(L, range):
        if L.step != 1:
            raise PreconditionError("label_boundary", "L is an interval")
        return L.start, L.stop - 1
    lo, hi = L
    return int(lo), int(hi)


def isolated_edges(g: Graph) -> np.ndarray:
    """Ids of edges whose two endpoints both have degree one."""
    d = g.degree
    return np.flatnonzero((d[g.edges[:, 0]] == 1) & (d[g.edges[:, 1]] == 1))


def label_boundary(g: Graph, delta: int, k: int, L) -> PartialLabelling:
    """Label the edges leaving the low-degree part from the interval ``L``.

    V1 is the ``delta``-core and V0 its complement. The result is injective
    into L, every V0 sum is divisible by ``k`` and the V0 sums are pairwise
    distinct. ``L`` is a ``range`` or an inclusive ``(lo, hi)`` pair.
    """
    from .partition import r_core

    op = "label_boundary"
    if k < 1 or k % 2 == 0:
        raise PreconditionError(op, "k odd", f"k={k}")
    iso = isolated_edges(g)
    if iso.size:
        raise PreconditionError(op, "no isolated edge", f"edge {int(iso[0])}")
    if int((g.degree == 0).sum()) > 1:
        raise PreconditionError(op, "at most one isolated vertex")
    lo, hi = _interval(L)
    split = r_core(g, delta)
    v0 = split.shell
    need = (delta - 1 + 3 * k) * len(v0)
    if hi - lo + 1 < need:
        raise PreconditionError(op, "|L| >= (delta-1+3k)|V0|", f"{hi - lo + 1} < {need}")

    fk = colour_boundary_divisible(g, v0, split.core, k)
    bnd = fk.labelled_edges()
    in_v0 = as_vertex_mask(g.n, v0)
    first = lo % k
    classes: list[list[int]] = [[] for _ in range(k)]
    for c in range(k):
        start = lo + ((c - first) % k)
        classes[c] = list(range(start, hi + 1, k))

    sums = [0] * g.n
    counts: dict[int, int] = {0: int(len(v0))} if len(v0) else {}
    out = PartialLabelling(g)
    ends = g.edges[bnd].tolist()
    colours = fk.values[bnd].tolist()
    labels = []
    for e, (u, v), c in zip(bnd.tolist(), ends, colours):
        ends0 = [w for w in (u, v) if in_v0[w]]
        pool = classes[c]
        for i, lab in enumerate(pool):
            ok = True
            for w in ends0:
                want = sums[w] + lab
                clash = counts.get(want, 0) - sum(1 for x in ends0 if sums[x] == want)
                if clash > 0:
                    ok = False
                    break
            if ok:
                pool.pop(i)
                break
        else:
            raise LabelExhaustedError(op, e, f"class {c} mod {k}")
        for w in ends0:
            counts[sums[w]] -= 1
            counts[sums[w] + lab] = counts.get(sums[w] + lab, 0) + 1
        sums[u] += lab
        sums[v] += lab
        labels.append(lab)
    out.assign(bnd, labels)

    s0 = out.sums[v0]
    if np.mod(s0, k).any():
        raise ConditionError(op, f"every V0 sum divisible by {k}")
    if np.unique(s0).size != s0.size:
        raise ConditionError(op, "V0 sums pairwise distinct")
    return out
