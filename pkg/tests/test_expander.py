from fractions import Fraction

import pytest

from cyclelab.expander import (ExpanderParams, check_bipartite_expander, cleanup_to_expander, corollary_params,
                               dfs_path_partition, halve, longest_path_greedy)
from cyclelab.graph import Graph, complete_bipartite, complete_graph, count_pair_edges, cycle_graph, path_graph, verify_path
from cyclelab.rng import RngStream

from conftest import gnp


def neighbors_in(G, X, side):
    out = set()
    for v in X:
        out.update(u for u in G.adj[v] if u in side)
    return out


def test_expander_examples():
    m = 6
    K = complete_bipartite(m, m)
    assert check_bipartite_expander(K, range(m), range(m, 2 * m), ExpanderParams(3, 2), mode="exact")
    M = Graph(2 * m, [(i, i + m) for i in range(m)])
    v = check_bipartite_expander(M, range(m), range(m, 2 * m), ExpanderParams(1, 2), mode="exact")
    assert not v
    X = v.witness["X"]
    assert len(neighbors_in(M, X, set(range(2 * m)))) < 2 * len(X)
    C8 = cycle_graph(8)
    even, odd = [0, 2, 4, 6], [1, 3, 5, 7]
    assert check_bipartite_expander(C8, even, odd, ExpanderParams(2, Fraction(3, 2)), mode="exact")


def test_cleanup_on_complete_pair_removes_nothing():
    K = complete_bipartite(24, 24)
    tr = cleanup_to_expander(K, range(24), range(24, 48), 0.2, 20, 0.1, 2)
    assert tr.outcome == "success" and tr.removed == []


def test_cleanup_on_empty_pair_gives_witness():
    tr = cleanup_to_expander(Graph(48), range(24), range(24, 48), 0.2, 20, 0.1, 2)
    assert tr.outcome == "eps_witness"
    U, W = tr.witness
    assert len(U) >= 4 and len(W) >= 4 and count_pair_edges(Graph(48), U, W) == 0


def test_cleanup_removes_planted_hole():
    L, R = list(range(24)), list(range(24, 48))
    hole = {0, 1, 2}
    edges = [(a, b) for a in L for b in R if a not in hole or b in (24, 25)]
    G = Graph(48, edges)
    tr = cleanup_to_expander(G, L, R, 0.2, 20, 0.1, 2, verify_mode="exact")
    assert tr.outcome == "success"
    removed = {v for s in tr.removed_left for v in s}
    assert hole <= removed and not tr.removed_right
    assert len(tr.U1) >= 0.8 * 24
    x = min(len(L), len(R))
    assert check_bipartite_expander(G, tr.U1, tr.U2, ExpanderParams(max(1, int(0.1 * x)), 2), mode="exact")


def test_cleanup_rejects_bad_parameters():
    K = complete_bipartite(6, 6)
    with pytest.raises(ValueError):
        cleanup_to_expander(K, range(6), range(6, 12), 0.2, 6, 0.1, 2)


def test_cleanup_outcomes_verify_on_random_pairs():
    for s in range(20):
        gen = RngStream(s).generator()
        q = 0.2 + 0.03 * s
        G = Graph(48, [(a, b) for a in range(24) for b in range(24, 48) if gen.random() < q])
        tr = cleanup_to_expander(G, range(24), range(24, 48), 0.2, 20, 0.1, 2, verify_mode="exact")
        assert tr.outcome in ("success", "eps_witness")
        if tr.outcome == "eps_witness":
            assert count_pair_edges(G, *tr.witness) == 0
        else:
            assert tr.verdict.holds and tr.verdict.mode == "exact"


def test_expander_parameter_sets():
    p = corollary_params(0.01, 1)
    assert p.bipartite == (Fraction(6, 100), Fraction(27, 2))
    assert p.plain == (Fraction(12, 100), Fraction(25, 4))
    p2 = corollary_params(0.005, 2)
    assert p2.bipartite == (Fraction(1, 10), 9) and p2.plain == (Fraction(1, 5), 4)
    assert halve(*p.bipartite) == p.plain
    with pytest.raises(ValueError):
        corollary_params(0.02, 1)


def check_partition(G, part):
    assert len(part.S) == len(part.T)
    assert count_pair_edges(G, part.S, part.T) == 0 if part.S else True
    assert sorted(part.S + part.T + part.U) == list(range(G.n))
    if part.U:
        assert verify_path(G, part.path) and sorted(part.path) == sorted(part.U)


def test_dfs_partition_examples():
    e = dfs_path_partition(Graph(4))
    assert e.U == [] and len(e.S) == len(e.T) == 2
    k = dfs_path_partition(complete_graph(7))
    assert k.S == k.T == [] and len(k.path) == 7 and verify_path(complete_graph(7), k.path)
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    check_partition(star, dfs_path_partition(star))


@pytest.mark.parametrize("p", [0.05, 0.2, 0.8])
def test_dfs_partition_invariants(p):
    for s in range(40):
        G = gnp(5 + s, p, s)
        check_partition(G, dfs_path_partition(G, rng=s))


def test_greedy_path_examples():
    assert len(longest_path_greedy(path_graph(30), 0)) == 30
    assert len(longest_path_greedy(cycle_graph(25), 0)) == 25


def test_greedy_path_on_sparse_random_graphs():
    long = 0
    for s in range(50):
        G = gnp(1000, 10 / 1000, s)
        P = longest_path_greedy(G, RngStream(s, 1).generator())
        assert verify_path(G, P)
        long += len(P) - 1 >= 800
    assert long >= 45
