from fractions import Fraction
from itertools import combinations

import pytest

from cyclelab.graph import Graph, complete_bipartite, complete_graph, count_pair_edges
from cyclelab.regularity import (ClusterPartition, build_epsilon_graph, build_reduced_graph, check_eps_property,
                                 check_eps_regular_pair, equipartition, p_density, reduced_edge_bound_check)
from cyclelab.rng import RngStream

L, R = range(5), range(5, 10)


def test_p_density_examples():
    K = complete_bipartite(3, 3)
    assert p_density(K, range(3), range(3, 6), 1) == 1
    assert p_density(Graph(6), range(3), range(3, 6), 1) == 0
    H = Graph(6, [e for e in K.edges if e != (0, 3)])
    assert p_density(H, range(3), range(3, 6), Fraction(1, 2)) == Fraction(16, 9)
    with pytest.raises(ValueError):
        p_density(K, [], range(3, 6), 1)
    with pytest.raises(ValueError):
        p_density(K, range(3), range(3, 6), 0)


def test_eps_property_examples():
    assert check_eps_property(complete_bipartite(5, 5), L, R, 0.2, 5, mode="exact")
    v = check_eps_property(Graph(10), L, R, 0.2, 5, mode="exact")
    assert not v
    U1, U2 = v.witness
    assert len(U1) == len(U2) == 1 and count_pair_edges(Graph(10), U1, U2) == 0
    M = Graph(10, [e for e in complete_bipartite(5, 5).edges if e[1] != e[0] + 5])
    assert check_eps_property(M, L, R, 0.4, 5, mode="exact")


def test_eps_property_monotone_in_eps():
    for s in range(30):
        gen = RngStream(s).generator()
        edges = [(a, b) for a in L for b in R if gen.random() < 0.5]
        G = Graph(10, edges)
        verdicts = [bool(check_eps_property(G, L, R, e, 5, mode="exact")) for e in (0.2, 0.4, 0.6, 0.8, 1.0)]
        for a, b in zip(verdicts, verdicts[1:]):
            assert b or not a


def test_eps_property_exact_witness_always_empty():
    for s in range(30):
        gen = RngStream(100 + s).generator()
        G = Graph(12, [(a, b) for a in range(6) for b in range(6, 12) if gen.random() < 0.3])
        v = check_eps_property(G, range(6), range(6, 12), Fraction(1, 3), 6, mode="exact")
        if not v:
            assert count_pair_edges(G, *v.witness) == 0
            assert min(len(x) for x in v.witness) >= 2


def test_regular_pair_examples():
    K = complete_bipartite(4, 4)
    assert check_eps_regular_pair(K, range(4), range(4, 8), 0.3, 1, mode="exact")
    assert check_eps_regular_pair(Graph(8), range(4), range(4, 8), 0.3, 1, mode="exact")
    half = Graph(8, [(a, b) for a in (0, 1) for b in range(4, 8)])
    v = check_eps_regular_pair(half, range(4), range(4, 8), 0.3, 1, mode="exact")
    assert not v
    Us, Ws = v.witness
    sub = Fraction(count_pair_edges(half, Us, Ws), len(Us) * len(Ws))
    assert abs(sub - Fraction(1, 2)) > Fraction(3, 10)


def brute_regular(G, U, W, eps, p):
    d = p_density(G, U, W, p)
    for a in range(1, len(U) + 1):
        if a < eps * len(U):
            continue
        for b in range(1, len(W) + 1):
            if b < eps * len(W):
                continue
            for Us in combinations(U, a):
                for Ws in combinations(W, b):
                    if abs(p_density(G, Us, Ws, p) - d) > eps:
                        return False
    return True


def test_regular_pair_exact_agrees_with_brute_force():
    for s in range(15):
        gen = RngStream(200 + s).generator()
        G = Graph(8, [(a, b) for a in range(4) for b in range(4, 8) if gen.random() < 0.6])
        if G.m == 0:
            continue
        for eps in (Fraction(1, 2), Fraction(3, 10)):
            got = check_eps_regular_pair(G, range(4), range(4, 8), eps, Fraction(1, 2), mode="exact")
            assert bool(got) == brute_regular(G, range(4), range(4, 8), eps, Fraction(1, 2))


def test_equipartition_sizes():
    assert sorted(equipartition(10, 2, 0).sizes) == [5, 5]
    assert sorted(equipartition(10, 3, 0).sizes) == [3, 3, 4]
    assert all(len(c) == 1 for c in equipartition(7, 7, 0).clusters)
    with pytest.raises(ValueError):
        equipartition(4, 5, 0)
    assert equipartition(30, 4, 8).assignment == equipartition(30, 4, 8).assignment


def test_reduced_and_epsilon_graph_on_complete_and_empty():
    part = equipartition(12, 4, 1)
    R = build_reduced_graph(complete_graph(12), part, rho=Fraction(1, 2), eps=Fraction(1, 20), p=1, mode="exact")
    S = build_epsilon_graph(complete_graph(12), part, Fraction(1, 20), mode="exact")
    assert len(R.edges) == len(S.edges) == 6
    R0 = build_reduced_graph(Graph(12), part, rho=Fraction(1, 2), eps=Fraction(1, 20), p=1, mode="exact")
    S0 = build_epsilon_graph(Graph(12), part, Fraction(1, 20), mode="exact")
    assert R0.edges == S0.edges == ()


def planted_dense(seed, k=4, m=6, q=0.9):
    gen = RngStream(seed).generator()
    clusters = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    edges = [(a, b) for i, j in combinations(range(k), 2) for a in clusters[i] for b in clusters[j]
             if gen.random() < q]
    return Graph(k * m, edges), ClusterPartition.from_clusters(k * m, clusters)


def test_planted_dense_epsilon_graph_complete():
    G, part = planted_dense(3)
    S = build_epsilon_graph(G, part, Fraction(1, 3), mode="exact")
    assert len(S.edges) == 6


def test_reduced_edges_are_epsilon_edges_on_planted_pairs():
    for s in range(10):
        G, part = planted_dense(50 + s, q=0.8)
        eps = Fraction(1, 3)
        R = build_reduced_graph(G, part, rho=Fraction(1, 2), eps=eps, p=1, mode="exact")
        S = build_epsilon_graph(G, part, eps, mode="exact")
        assert set(R.edges) <= set(S.edges)


def test_derived_mode_requires_rho_above_eps():
    G, part = planted_dense(1)
    R = build_reduced_graph(G, part, rho=Fraction(1, 10), eps=Fraction(1, 5), p=1, mode="skip")
    with pytest.raises(ValueError):
        build_epsilon_graph(G, part, Fraction(1, 5), mode="derived-from-R", reduced=R)
    R = build_reduced_graph(G, part, rho=Fraction(1, 2), eps=Fraction(1, 5), p=1, mode="skip")
    S = build_epsilon_graph(G, part, Fraction(1, 5), mode="derived-from-R", reduced=R)
    assert S.edges == R.edges


def test_reduced_edge_bound():
    assert reduced_edge_bound_check(complete_graph(6), 0.5, 0.5)
    assert not reduced_edge_bound_check(Graph(6), 0.1, 0.0)
    R20 = Graph(20, [(i, j) for i, j in combinations(range(20), 2)][:120])
    assert reduced_edge_bound_check(R20, 0.5, 0.1)
    assert not reduced_edge_bound_check(R20, 0.6, 0.1)
