import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antimagic.errors import PreconditionError
from antimagic.generators import complete, cycle, matching, path, stars
from antimagic.graph import Graph
from antimagic.labelling import PartialLabelling, residue_histogram
from antimagic.modular import (
    colour_AB,
    colour_boundary_divisible,
    colour_isolated_edges,
    colour_mod_k,
    equitable_two_colouring,
    label_boundary,
    label_two_moduli,
)

import instances as inst

seeds = st.integers(0, 2**31 - 1)


# ---------------------------------------------------------------- residue histograms

def test_residue_histogram_empty_labelling():
    g = path(4)
    p = PartialLabelling(g)
    assert residue_histogram(p, np.arange(4), 4).to_list() == [4, 0, 0, 0]


def test_residue_histogram_p3():
    g = path(3)
    p = PartialLabelling(g)
    p.assign([0, 1], [1, 2])
    assert p.sums.tolist() == [1, 3, 2]
    assert residue_histogram(p, np.arange(3), 3).to_list() == [1, 1, 1]


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 12))
def test_residue_histogram_totals(seed, k):
    rng = np.random.default_rng(seed)
    g = inst.random_graph_without_isolated(rng, 15, 0.3)
    p = PartialLabelling(g, rng.integers(0, 50, g.n))
    chosen = np.flatnonzero(rng.random(g.m) < 0.5)
    p.assign(chosen, rng.integers(0, 100, len(chosen)))
    S = np.flatnonzero(rng.random(g.n) < 0.6)
    assert residue_histogram(p, S, k).total == len(S)
    assert p.consistent()


# ---------------------------------------------------------------- equitable colouring

def test_equitable_k4():
    g = complete(4)
    inst.check_equitable(g, 1, equitable_two_colouring(g, 1))


def test_equitable_rejects_low_degree():
    with pytest.raises(PreconditionError):
        equitable_two_colouring(cycle(5), 1)


def test_equitable_k6():
    g = complete(6)
    inst.check_equitable(g, 2, equitable_two_colouring(g, 2))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_equitable_random(seed):
    g, k = inst.equitable_instance(seed)
    inst.check_equitable(g, k, equitable_two_colouring(g, k))


# ---------------------------------------------------------------- matchings mod k

def test_single_edge_mod5():
    g = matching(1)
    p = colour_isolated_edges(g, np.zeros(2, dtype=int), 5)
    assert p.values[0] in (2, 3, 4)
    assert p.sums[0] == p.sums[1] == p.values[0]


def test_hundred_edges_mod7():
    g = matching(100)
    p = colour_isolated_edges(g, np.zeros(200, dtype=int), 7)
    counts = residue_histogram(p, np.arange(200), 7).to_list()
    assert counts[0] == counts[1] == 0
    assert max(counts[2:]) <= 200 / 4 + 8


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_matching_random(seed):
    g, pot, k = inst.matching_instance(seed)
    inst.check_matching_colouring(g, pot, k, colour_isolated_edges(g, pot, k))


def test_matching_rejects_degree_two_and_even_k():
    with pytest.raises(PreconditionError):
        colour_isolated_edges(path(3), None, 5)
    with pytest.raises(PreconditionError):
        colour_isolated_edges(matching(2), None, 6)


# ---------------------------------------------------------------- graphs mod k

def test_c5_mod5():
    g = cycle(5)
    p = colour_mod_k(g, np.zeros(5, dtype=int), np.arange(5), 5)
    counts = residue_histogram(p, np.arange(5), 5).to_list()
    assert counts[0] == counts[1] == 0
    assert max(counts) <= 5 / 2 + 7


def test_p3_middle_mod7():
    g = path(3)
    p = colour_mod_k(g, np.zeros(3, dtype=int), [1], 7)
    assert p.sums[1] % 7 not in (0, 1)


def test_mod_k_rejects_isolated_vertex():
    with pytest.raises(PreconditionError):
        colour_mod_k(Graph(3, [(0, 1)]), None, [0], 5)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_mod_k_random(seed):
    g, pot, S, k = inst.mod_k_instance(seed)
    inst.check_mod_k(g, pot, S, k, colour_mod_k(g, pot, S, k))


def test_mod_k_forest_peeling_hits_targets():
    # every non-root vertex of a tree is fixed exactly, so on a path with
    # S = V only one vertex can land outside its target class
    g = path(30)
    p = colour_mod_k(g, np.zeros(30, dtype=int), np.arange(30), 9)
    counts = residue_histogram(p, np.arange(30), 9).to_list()
    assert counts[0] == counts[1] == 0
    assert max(counts[2:]) - min(counts[2:]) <= 2


# ---------------------------------------------------------------- two moduli

@settings(max_examples=15, deadline=None)
@given(seeds)
def test_two_moduli_random(seed):
    g, pot, V1, V2, k1, k2, L = inst.two_moduli_instance(seed)
    f, phases = label_two_moduli(g, pot, V1, V2, k1, k2, L, return_phases=True)
    inst.check_two_moduli(g, pot, V1, V2, k1, k2, L, f, phases)


def test_two_moduli_rejects_sparse_v1():
    g = complete(12)
    V1, V2 = np.arange(6), np.arange(6, 12)
    with pytest.raises(PreconditionError, match="E\\(V1\\)"):
        label_two_moduli(g, None, V1, V2, 5, 7, np.arange(1, g.m + 1))


def test_two_moduli_rejects_non_coprime():
    g = complete(12)
    with pytest.raises(PreconditionError, match="coprime"):
        label_two_moduli(g, None, np.arange(6), np.arange(6, 12), 5, 15, np.arange(1, g.m + 1))


def test_two_moduli_rejects_wrong_label_count():
    g, pot, V1, V2, k1, k2, L = inst.two_moduli_instance(0)
    with pytest.raises(PreconditionError, match="exactly"):
        label_two_moduli(g, pot, V1, V2, k1, k2, L[:-1])


def test_two_moduli_rejects_thin_class():
    g, pot, V1, V2, k1, k2, L = inst.two_moduli_instance(1)
    # every label in one class mod k1*k2 replaced by a fresh label outside it
    K = k1 * k2
    bad = L[L % K != 3]
    fresh = np.arange(L.max() + 1, L.max() + 10 * len(L))
    fresh = fresh[fresh % K != 3][: len(L) - len(bad)]
    with pytest.raises(PreconditionError, match="class"):
        label_two_moduli(g, pot, V1, V2, k1, k2, np.concatenate([bad, fresh]))


# ---------------------------------------------------------------- A/B colouring

def test_ab_star():
    g = stars(4)
    A, B, Bp = [0], [1, 2, 3, 4], [1, 2]
    L = np.arange(1, g.m + 35 * 4 + 1)
    f = colour_AB(g, None, A, B, Bp, 1, 7, 5, L)
    assert f.sums[0] % 35 == 1
    assert all(f.sums[b] % 7 not in (0, 1) for b in Bp)
    assert f.is_injective()


def test_ab_uncovered_bprime_rejected():
    g = Graph(4, [(0, 1), (0, 2), (2, 3)])
    with pytest.raises(PreconditionError):
        colour_AB(g, None, [0], [1, 2, 3], [3], 1, 7, 5, np.arange(1, 200))


def test_ab_empty_a():
    g = path(4)
    f = colour_AB(g, None, [], np.arange(4), [], 0, 5, 3, np.arange(1, 10))
    assert f.complete and f.is_injective()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_ab_random(seed):
    g, pot, A, B, Bp, t, k1, k2, L = inst.ab_instance(seed)
    inst.check_ab(g, pot, A, B, Bp, t, k1, k2, L, colour_AB(g, pot, A, B, Bp, t, k1, k2, L))


# ---------------------------------------------------------------- boundary colouring

def test_boundary_pendant_path_mod5():
    # a triangle in V1 with a pendant path hanging from it
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])
    f = colour_boundary_divisible(g, [3, 4, 5], [0, 1, 2], 5)
    inst.check_boundary(g, np.array([3, 4, 5]), np.array([0, 1, 2]), 5, f)


def test_boundary_odd_cycle():
    g = cycle(5)
    f = colour_boundary_divisible(g, np.arange(5), [], 3)
    inst.check_boundary(g, np.arange(5), np.array([], dtype=int), 3, f)


def test_boundary_even_cycle_root_included():
    g = cycle(4)
    f = colour_boundary_divisible(g, np.arange(4), [], 5)
    assert all(s % 5 == 0 for s in f.sums.tolist())
    inst.check_boundary(g, np.arange(4), np.array([], dtype=int), 5, f)


def test_boundary_rejects_even_k():
    with pytest.raises(PreconditionError):
        colour_boundary_divisible(cycle(4), np.arange(4), [], 4)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_boundary_random(seed):
    g, V0, V1, k = inst.boundary_instance(seed)
    inst.check_boundary(g, V0, V1, k, colour_boundary_divisible(g, V0, V1, k))


# ---------------------------------------------------------------- boundary labelling

def test_label_boundary_triangle_pendant():
    g = Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    f = label_boundary(g, 2, 5, (1, 40))
    assert f.sums[3] % 5 == 0
    assert f.assigned.tolist() == [False, False, False, True]


def test_label_boundary_rejects_k2():
    with pytest.raises(PreconditionError, match="isolated edge"):
        label_boundary(complete(2), 2, 5, (1, 40))


def test_label_boundary_rejects_short_interval():
    g = Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    with pytest.raises(PreconditionError, match="delta"):
        label_boundary(g, 2, 5, (1, 10))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_label_boundary_random(seed):
    g, delta, k, L = inst.label_boundary_instance(seed)
    inst.check_label_boundary(g, delta, k, L, label_boundary(g, delta, k, L))


def test_label_boundary_gnp60():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = inst.random_graph_without_isolated_edges(rng, 60, 0.1)
        from antimagic.partition import r_core

        v0 = r_core(g, 4).shell
        L = (1, max(1, (4 - 1 + 45) * len(v0)))
        inst.check_label_boundary(g, 4, 15, L, label_boundary(g, 4, 15, L))
