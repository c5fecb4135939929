from fractions import Fraction

import pytest

from cyclelab.extremal import (build_bipartite_extremal, build_clique_blocks, build_woodall_graph, comb2,
                               eg_cycle_bound, eg_path_bound, extremal_example, g_function, overlay_lower_bound,
                               woodall_threshold)
from cyclelab.graph import Graph, complete_graph
from cyclelab.oracle import cycle_spectrum_exact, has_cycle_of_length
from cyclelab.ramsey import is_bipartite

from conftest import gnp


@pytest.mark.parametrize("n,t,gamma,expected", [
    (10, 7, None, Fraction(26, 45)),
    (20, 5, None, Fraction(101, 190)),
    (20, 6, 0.5, Fraction(0)),
    (20, 10, 0.25, Fraction(91, 190)),
])
def test_g_function_values(n, t, gamma, expected):
    assert g_function(n, t, gamma).value == expected


def test_g_function_range_errors():
    with pytest.raises(ValueError):
        g_function(10, 11)
    with pytest.raises(ValueError):
        g_function(10, 2)
    with pytest.raises(ValueError):
        g_function(10, 6, 1.5)
    with pytest.raises(ValueError):
        g_function(10, 6)


def test_woodall_threshold_values():
    assert woodall_threshold(8, 12).value == Fraction(37, 66)
    assert woodall_threshold(5, 20).value == g_function(20, 5).value == Fraction(101, 190)


def test_woodall_threshold_matches_odd_g_and_exceeds_half():
    for n in range(3, 80):
        prev = None
        for t in range(3, n + 1, 2):
            w = woodall_threshold(t, n)
            assert w.value == g_function(n, t).value
            assert w.numerator * 2 > comb2(n)
            if prev is not None:
                assert w.value >= prev
            prev = w.value


def test_erdos_gallai_bounds():
    assert eg_path_bound(3, 10) == 10
    assert eg_path_bound(1, 7) == 0
    assert eg_path_bound(6, 6) == 15
    assert eg_cycle_bound(4, 6) == 7
    assert eg_cycle_bound(3, 5) == 4
    assert all(eg_cycle_bound(n, n) == (n - 1) ** 2 // 2 for n in range(3, 30))


def test_woodall_graph_examples():
    W = build_woodall_graph(12, 8)
    assert W.m == 36 and cycle_spectrum_exact(W).longest_cycle == 7
    W = build_woodall_graph(5, 4)
    assert W.m == 6 and cycle_spectrum_exact(W).longest_cycle == 3
    W = build_woodall_graph(9, 9)
    assert min(W.degree(v) for v in range(9)) == 1
    with pytest.raises(ValueError):
        build_woodall_graph(12, 6)


def test_bipartite_and_clique_block_examples():
    B = build_bipartite_extremal(7)
    assert B.m == 12 and is_bipartite(B)
    assert build_bipartite_extremal(4).m == 4
    T = build_clique_blocks(9, 3)
    assert T.m == 9 and cycle_spectrum_exact(T).longest_path == 2


def test_extremal_example_rejects_even_below_range():
    with pytest.raises(ValueError):
        extremal_example(20, 6)


def test_overlay_complete_and_empty_hosts():
    for n, t in [(12, 9), (10, 7), (11, 5)]:
        W, _ = extremal_example(n, t)
        res = overlay_lower_bound(complete_graph(n), t, trials=5)
        assert res.kept == W.m == res.target and res.met
    res = overlay_lower_bound(Graph(10), 7)
    assert res.kept == 0 and res.met


def test_overlay_on_random_host_is_cycle_free():
    G = gnp(14, 0.5, 11)
    res = overlay_lower_bound(G, 9, trials=200, seed=4)
    assert Fraction(res.kept, G.m) >= Fraction(36, 91)
    assert res.met
    assert not has_cycle_of_length(res.subgraph, 9)
    assert set(res.subgraph.edges) <= set(G.edges)
