"""Seeded instance builders shared by the test modules."""

import numpy as np

from antimagic.graph import Graph


def random_graph_without_isolated(rng: np.random.Generator, n: int, p: float) -> Graph:
    """G(n, p) where every isolated vertex is joined to a random other vertex."""
    mat = np.triu(rng.random((n, n)) < p, 1)
    deg = mat.sum(0) + mat.sum(1)
    for v in np.flatnonzero(deg == 0).tolist():
        w = int(rng.integers(0, n - 1))
        w += w >= v
        mat[min(v, w), max(v, w)] = True
    return Graph(n, np.argwhere(mat), check=False)


def random_graph_without_isolated_edges(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Like :func:`random_graph_without_isolated` but also with no K2 component."""
    while True:
        g = random_graph_without_isolated(rng, n, p)
        d = g.degree
        iso = (d[g.edges[:, 0]] == 1) & (d[g.edges[:, 1]] == 1)
        if not iso.any():
            return g
        extra = []
        for u, v in g.edges[iso].tolist():
            w = int(rng.integers(0, n))
            while w in (u, v):
                w = int(rng.integers(0, n))
            extra.append((min(u, w), max(u, w)))
        edges = np.unique(np.concatenate([g.edges, np.asarray(extra)]), axis=0)
        g = Graph(n, edges, check=False)
        d = g.degree
        if not ((d[g.edges[:, 0]] == 1) & (d[g.edges[:, 1]] == 1)).any():
            return g


def sums_from_scratch(g: Graph, values, labelled, potential=None) -> np.ndarray:
    """Vertex sums recomputed edge by edge, without the cached sums."""
    s = np.zeros(g.n, dtype=np.int64) if potential is None else np.array(potential, dtype=np.int64)
    on = np.asarray(labelled, dtype=bool)
    vals = np.asarray(values, dtype=np.int64)[on]
    np.add.at(s, g.edges[on, 0], vals)
    np.add.at(s, g.edges[on, 1], vals)
    return s


def residue_counts(sums, vertices, k: int) -> np.ndarray:
    return np.bincount(np.mod(np.asarray(sums)[np.asarray(vertices, dtype=np.int64)], k), minlength=k)


def assert_spread(sums, vertices, k: int, bound: float) -> None:
    counts = residue_counts(sums, vertices, k)
    assert counts[0] == 0 and counts[1] == 0, counts.tolist()
    assert counts[2:].max(initial=0) <= bound, (counts.tolist(), bound)


# ---------------------------------------------------------------------------
# equitable two-colouring

def equitable_instance(seed: int):
    rng = np.random.default_rng(seed)
    from antimagic.generators import min_degree_graph

    k = int(rng.integers(1, 4))
    n = int(rng.integers(2 * k + 3, 40))
    delta = int(rng.integers(2 * k + 1, n))
    g = min_degree_graph(n, delta, seed=seed)
    if rng.random() < 0.3:  # a second component
        h = min_degree_graph(n, delta, seed=seed + 1)
        g = Graph(2 * n, np.concatenate([g.edges, h.edges + n]), check=False)
    return g, k


def check_equitable(g: Graph, k: int, colours) -> None:
    colours = np.asarray(colours)
    assert set(np.unique(colours).tolist()) <= {1, 2}
    c1 = np.bincount(g.edges[colours == 1].ravel(), minlength=g.n)
    c2 = np.bincount(g.edges[colours == 2].ravel(), minlength=g.n)
    assert c1.min() >= k and c2.min() >= k
    assert np.abs(c1 - c2).max() <= 2


# ---------------------------------------------------------------------------
# colouring a matching / a graph without isolated vertices modulo k

def matching_instance(seed: int):
    rng = np.random.default_rng(seed)
    pairs = int(rng.integers(1, 80))
    spare = int(rng.integers(0, 5))
    n = 2 * pairs + spare
    perm = rng.permutation(n)
    g = Graph(n, perm[: 2 * pairs].reshape(-1, 2), check=False)
    k = int(rng.choice([5, 7, 9, 11, 13]))
    pot = rng.integers(0, 10_000, n)
    return g, pot, k


def check_matching_colouring(g: Graph, pot, k: int, p) -> None:
    assert p.complete and p.consistent()
    assert p.values.min() >= 0 and p.values.max() < k
    s = sums_from_scratch(g, p.values, p.assigned, pot)
    matched = np.flatnonzero(g.degree > 0)
    assert_spread(s, matched, k, len(matched) / (k - 3) + k + 1)


def mod_k_instance(seed: int):
    rng = np.random.default_rng(seed)
    k = int(rng.choice([5, 7, 9, 11, 15]))
    if rng.random() < 0.5:
        n = int(rng.integers(2, 70))
        g = random_graph_without_isolated(rng, n, float(rng.uniform(0.01, 0.3)))
    else:
        # disjoint edges with paths hanging off some of them
        pairs = int(rng.integers(1, 30))
        edges, nxt = [], 2 * pairs
        for i in range(pairs):
            edges.append((2 * i, 2 * i + 1))
            for _ in range(int(rng.integers(0, 3))):
                edges.append((int(rng.integers(0, nxt)), nxt))
                nxt += 1
        g = Graph(nxt, edges)
    S = np.flatnonzero(rng.random(g.n) < rng.uniform(0.2, 1.0))
    pot = rng.integers(0, 10_000, g.n)
    return g, pot, S, k


def check_mod_k(g: Graph, pot, S, k: int, p) -> None:
    assert p.complete and p.consistent()
    assert p.values.min() >= 0 and p.values.max() < k
    s = sums_from_scratch(g, p.values, p.assigned, pot)
    assert_spread(s, S, k, len(S) / (k - 3) + k + 2)


# ---------------------------------------------------------------------------
# bijective labelling controlled modulo two coprime moduli

def two_moduli_instance(seed: int):
    rng = np.random.default_rng(seed)
    k1, k2 = ((5, 7), (7, 5))[int(rng.integers(0, 2))]
    K = k1 * k2
    n = int(rng.integers(175, 190))
    keep = rng.random(n * (n - 1) // 2) >= 0.01
    iu = np.stack(np.triu_indices(n, 1), axis=1)
    g = Graph(n, iu[keep], check=False)
    perm = rng.permutation(n)
    # smallest V2 with enough inner edges, plus a little slack
    n2 = next(s for s in range(2, n) if 0.985 * s * (s - 1) / 2 >= (k1 + 1) * n) + int(rng.integers(0, 4))
    V2, V1 = np.sort(perm[:n2]), np.sort(perm[n2:])
    m1 = np.zeros(n, dtype=bool)
    m1[V1] = True
    in1 = m1[g.edges[:, 0]] & m1[g.edges[:, 1]]
    in2 = ~m1[g.edges[:, 0]] & ~m1[g.edges[:, 1]]
    if in1.sum() < (K + 1) * n or in2.sum() < (k1 + 1) * n:
        g = Graph(n, iu, check=False)
    pot = rng.integers(0, 5000, n)
    L = np.sort(rng.choice(np.arange(1, g.m + g.m // 10 + 1), size=g.m, replace=False))
    return g, pot, V1, V2, k1, k2, L


def check_two_moduli(g, pot, V1, V2, k1, k2, L, f, phases) -> None:
    assert f.complete and f.consistent()
    assert np.array_equal(np.sort(f.values), np.sort(L))
    s = sums_from_scratch(g, f.values, f.assigned, pot)
    assert_spread(s, V1, k1, len(V1) / (k1 - 3) + k1 + 2)
    assert_spread(s, V2, k2, len(V2) / (k2 - 3) + k2 + 2)
    # after the first swap phase: still a bijection and V1 already settled
    f1 = phases["after_first"]
    assert np.array_equal(np.sort(f1.values), np.sort(L))
    s1 = sums_from_scratch(g, f1.values, f1.assigned, pot)
    assert_spread(s1, V1, k1, len(V1) / (k1 - 3) + k1 + 2)
    # the second phase changes no label modulo k1
    assert np.array_equal(np.mod(f1.values, k1), np.mod(f.values, k1))
    # the star subforest has at most |V|-1 edges and no isolated vertex
    H = phases["H"]
    assert len(H) <= g.n - 1
    assert (np.bincount(g.edges[H].ravel(), minlength=g.n) > 0).all()


# ---------------------------------------------------------------------------
# A-sums fixed modulo k1*k2, B' spread modulo k1

def ab_instance(seed: int):
    rng = np.random.default_rng(seed)
    k1 = int(rng.choice([5, 7, 9, 11]))
    k2 = int(rng.choice([1, 3, 5, 7]))
    K = k1 * k2
    na, nb = int(rng.integers(3, 16)), int(rng.integers(20, 60))
    n = na + nb
    perm = rng.permutation(n)
    A, B = np.sort(perm[:na]), np.sort(perm[na:])
    Bp = np.sort(rng.choice(B, size=int(rng.integers(0, nb + 1)), replace=False))
    edges = set()
    for a in A.tolist():
        for b in rng.choice(B, size=int(rng.integers(2, 6)), replace=False).tolist():
            edges.add((min(a, b), max(a, b)))
    covered = {v for e in edges for v in e}
    for b in Bp.tolist():
        if b not in covered:
            a = int(rng.choice(A))
            edges.add((min(a, b), max(a, b)))
    p = float(rng.uniform(0.0, 0.15))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    g = Graph(n, sorted(edges))
    t = rng.integers(0, K, n)
    pot = rng.integers(0, 10_000, n)
    lo = int(rng.integers(1, 500))
    L = np.arange(lo, lo + g.m + K * (2 * na + len(Bp)))
    return g, pot, A, B, Bp, t, k1, k2, L


def check_ab(g, pot, A, B, Bp, t, k1, k2, L, f) -> None:
    K = k1 * k2
    assert f.complete and f.consistent()
    assert f.is_injective() and np.isin(f.values, L).all()
    s = sums_from_scratch(g, f.values, f.assigned, pot)
    assert np.array_equal(np.mod(s[A], K), np.mod(np.asarray(t)[A], K))
    if len(Bp):
        assert_spread(s, Bp, k1, len(Bp) / (k1 - 4) + 2 * k1 - 3)


# ---------------------------------------------------------------------------
# divisible sums on the low-degree side

def boundary_instance(seed: int):
    rng = np.random.default_rng(seed)
    k = int(rng.choice([1, 3, 5, 7, 9, 15]))
    n = int(rng.integers(2, 60))
    g = Graph(n, np.argwhere(np.triu(rng.random((n, n)) < rng.uniform(0.02, 0.25), 1)), check=False)
    if rng.random() < 0.3:
        V0 = np.arange(n)
    else:
        V0 = np.flatnonzero(rng.random(n) < rng.uniform(0.1, 0.9))
    V1 = np.setdiff1d(np.arange(n), V0)
    return g, V0, V1, k


def check_boundary(g, V0, V1, k, f) -> None:
    m0 = np.zeros(g.n, dtype=bool)
    m0[V0] = True
    touching = m0[g.edges[:, 0]] | m0[g.edges[:, 1]]
    assert np.array_equal(f.assigned, touching)
    vals = f.values[touching]
    assert vals.size == 0 or (vals.min() >= 0 and vals.max() < k)
    s = sums_from_scratch(g, f.values, f.assigned)
    assert not np.mod(s[V0], k).any()
    usage = np.bincount(vals, minlength=k)
    assert usage.max(initial=0) <= touching.sum() / k + len(V0)


def label_boundary_instance(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(20, 80))
    g = random_graph_without_isolated_edges(rng, n, float(rng.uniform(0.04, 0.15)))
    delta = int(rng.integers(2, 6))
    k = int(rng.choice([3, 5, 7, 15]))
    from antimagic.partition import r_core

    v0 = r_core(g, delta).shell
    lo = int(rng.integers(1, 1000))
    L = (lo, lo + (delta - 1 + 3 * k) * len(v0) - 1 + int(rng.integers(0, 20)))
    return g, delta, k, L


def check_label_boundary(g, delta, k, L, f) -> None:
    from antimagic.partition import r_core

    v0 = r_core(g, delta).shell
    m0 = np.zeros(g.n, dtype=bool)
    m0[v0] = True
    touching = m0[g.edges[:, 0]] | m0[g.edges[:, 1]]
    assert np.array_equal(f.assigned, touching)
    used = f.values[touching]
    assert np.unique(used).size == used.size
    assert used.size == 0 or (used.min() >= L[0] and used.max() <= L[1])
    s = sums_from_scratch(g, f.values, f.assigned)[v0]
    assert not np.mod(s, k).any()
    assert np.unique(s).size == s.size


# ---------------------------------------------------------------------------
# star forest and full partition

def partition_instance(seed: int):
    from antimagic.generators import min_degree_graph

    rng = np.random.default_rng(seed)
    n = int(rng.integers(30, 90))
    g = min_degree_graph(n, int(rng.integers(12, 28)), seed=seed)
    r = int(rng.integers(n // 2, 2 * n))
    r1, r2 = int(rng.integers(1, n // 2)), int(rng.integers(1, n // 3))
    return g, g.min_degree(), r, r1, r2


def _adjacent_counts(g: Graph, targets: set, edge_ok) -> dict:
    out = {v: 0 for v in range(g.n)}
    for e, (u, v) in enumerate(g.edges.tolist()):
        if not edge_ok(e):
            continue
        if v in targets:
            out[u] += 1
        if u in targets:
            out[v] += 1
    return out


def check_star_plan(g: Graph, plan, delta: int, r: int) -> None:
    """Star-forest guarantees, recomputed with plain sets."""
    edges = g.edges.tolist()
    seen = set()
    star_edges = set()
    for s in plan.stars:
        vs = {int(s.centre), *map(int, s.leaves)}
        assert len(vs) == len(s.leaves) + 1 and not (vs & seen)
        seen |= vs
        for e, leaf in zip(s.edges.tolist(), s.leaves.tolist()):
            assert set(edges[e]) == {int(s.centre), int(leaf)}
            star_edges.add(e)
    V0, V1 = set(plan.V0.tolist()), set(plan.V1.tolist())
    assert V0 == set(range(g.n)) - seen
    assert V1 <= {int(s.centre) for s in plan.stars}
    assert set(plan.V2.tolist()) == seen - V1
    inner = sum(1 for u, v in edges if u in V0 and v in V0)
    assert inner >= r
    z = len(plan.dominating) / g.n
    assert len(star_edges) >= g.n * (0.5 - z - 2 / delta) - 1 - r / delta
    to0 = _adjacent_counts(g, V0, lambda e: True)
    to01 = _adjacent_counts(g, V0 | V1, lambda e: True)
    assert all(to0[v] >= 5 for v in V1)
    assert all(c >= 5 for c in to01.values())


def check_partition_plan(g: Graph, plan, delta: int, r: int, r1: int, r2: int) -> None:
    """Partition guarantees, recomputed with plain sets."""
    check_star_plan(g, plan.stars, delta, r)
    edges = g.edges.tolist()
    F = set(plan.F.edges.tolist())
    FS = set(plan.stars.forest.edges.tolist())
    V0, V1, V2 = (set(x.tolist()) for x in (plan.V0, plan.V1, plan.V2))
    # 1: F is a spanning forest containing the stars
    assert FS <= F
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in sorted(F):
        a, b = find(edges[e][0]), find(edges[e][1])
        assert a != b, "F has a cycle"
        parent[a] = b
    assert {v for e in F for v in edges[e]} == set(range(g.n))
    # 4: F-components meeting V0 have at least three vertices
    comps: dict = {}
    for v in range(g.n):
        comps.setdefault(find(v), []).append(v)
    for vs in comps.values():
        if any(v in V0 for v in vs):
            assert len(vs) >= 3
    # 5: the only F-edges at V2 are star edges
    for e in F - FS:
        assert not (set(edges[e]) & V2)
    # 6 and 7: two non-F edges into V0 ∪ V1 (outside V1) and into V0 (from V1)
    c6 = _adjacent_counts(g, V0 | V1, lambda e: e not in F)
    c7 = _adjacent_counts(g, V0, lambda e: e not in F)
    assert all(c6[v] >= 2 for v in range(g.n) if v not in V1)
    assert all(c7[v] >= 2 for v in V1)
    # 8: U1, U2 split V0 with enough non-F inner edges
    U1, U2 = set(plan.U1.tolist()), set(plan.U2.tolist())
    assert U1 | U2 == V0 and not (U1 & U2)
    assert sum(1 for e, (u, v) in enumerate(edges) if e not in F and u in U1 and v in U1) >= r1
    assert sum(1 for e, (u, v) in enumerate(edges) if e not in F and u in U2 and v in U2) >= r2
    # U3: V0 vertices all of whose V0-edges lie in F
    U3 = {v for v in V0 if all(e in F for e, (a, b) in enumerate(edges)
                               if v in (a, b) and a in V0 and b in V0)}
    assert U3 == set(plan.U3.tolist())
    # edge classes
    want = {i: set() for i in range(1, 6)}
    for e, (u, v) in enumerate(edges):
        ends = {u, v}
        if e in FS:
            want[5].add(e)
        elif e in F:
            want[4].add(e)
        elif ends & V2:
            want[1].add(e)
        elif ends & V1:
            want[2].add(e)
        else:
            want[3].add(e)
    for i, cls in enumerate(plan.edge_classes(), start=1):
        assert set(cls.tolist()) == want[i], f"E{i}"
    assert sum(len(c) for c in plan.edge_classes()) == g.m


# ---------------------------------------------------------------------------
# labelling stars with distinct centre sums

def stars_instance(seed: int):
    from antimagic.graph import Star

    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, 21))
    sizes = rng.integers(1, 7, count)
    stars, nxt, eid = [], 0, 0
    for s in sizes.tolist():
        leaves = np.arange(nxt + 1, nxt + 1 + s)
        stars.append(Star(nxt, leaves, np.arange(eid, eid + s)))
        nxt += s + 1
        eid += s
    pot = rng.integers(0, 200, nxt)
    labels = np.sort(rng.choice(np.arange(1, 4 * eid + 10), size=eid, replace=False))
    return stars, labels, pot


def check_stars(stars, labels, pot, mapping) -> None:
    assert sorted(mapping.values()) == sorted(labels.tolist())
    assert set(mapping) == {int(e) for s in stars for e in s.edges.tolist()}
    centre = [int(pot[s.centre]) + sum(mapping[int(e)] for e in s.edges.tolist()) for s in stars]
    assert len(set(centre)) == len(centre)
    # stars served in turn take consecutive runs of the sorted labels, so
    # ordering stars by their smallest label orders the centre sums
    by_first = sorted(range(len(stars)), key=lambda i: min(mapping[int(e)] for e in stars[i].edges.tolist()))
    got = [centre[i] for i in by_first]
    assert all(a < b for a, b in zip(got, got[1:]))
