from collections import deque

import pytest

from cyclelab.generators import random_regular
from cyclelab.graph import Graph, complete_bipartite, complete_graph, cycle_graph, path_graph, verify_cycle, verify_path
from cyclelab.oracle import cycle_spectrum_exact
from cyclelab.ramsey import (EdgeColoring, block_cut_tree, color_by_cut, color_class, color_random, diameter_bound,
                             diameter_check, disjoint_paths, is_bipartite, long_odd_cycle, monochromatic_odd_cycle,
                             shortest_odd_cycle, verify_disjoint_paths, verify_separator)
from cyclelab.rng import RngStream

from conftest import gnp


def petersen():
    return Graph(10, [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                 + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


def grid(a, b):
    idx = lambda i, j: i * b + j
    edges = [(idx(i, j), idx(i, j + 1)) for i in range(a) for j in range(b - 1)]
    edges += [(idx(i, j), idx(i + 1, j)) for i in range(a - 1) for j in range(b)]
    return Graph(a * b, edges)


def components(G, removed=frozenset()):
    seen, count = set(removed), 0
    for s in range(G.n):
        if s in seen:
            continue
        count += 1
        seen.add(s)
        q = deque([s])
        while q:
            v = q.popleft()
            for w in G.adj[v]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
    return count


def brute_articulation(G):
    base = components(G)
    out = []
    for v in range(G.n):
        # removing v drops one component only when v is isolated
        if G.degree(v) and components(G, {v}) > base - (0 if G.degree(v) else 1):
            out.append(v)
    return out


def test_bipartite_dichotomy():
    assert is_bipartite(complete_bipartite(3, 4))
    b = is_bipartite(petersen())
    assert not b and len(b.odd_cycle) % 2 == 1 and verify_cycle(petersen(), b.odd_cycle)


def test_bipartite_agrees_with_spectrum_parity(small_random_graphs):
    for s in range(60):
        G = gnp(4 + s % 9, 0.15 + 0.01 * s, 300 + s)
        has_odd = any(L % 2 for L in cycle_spectrum_exact(G).present)
        b = is_bipartite(G)
        assert bool(b) != has_odd
        if not b:
            assert verify_cycle(G, b.odd_cycle) and len(b.odd_cycle) % 2
        sc = shortest_odd_cycle(G)
        odd = [L for L in cycle_spectrum_exact(G).present if L % 2]
        if odd:
            assert len(sc) == min(odd) and verify_cycle(G, sc)
        else:
            assert sc is None


def test_shortest_odd_examples():
    assert len(shortest_odd_cycle(petersen())) == 5
    C6 = Graph(6, list(cycle_graph(6).edges) + [(0, 2)])
    assert len(shortest_odd_cycle(C6)) == 3
    assert shortest_odd_cycle(cycle_graph(8)) is None


def test_disjoint_paths_examples():
    K = complete_graph(5)
    res = disjoint_paths(K, {0, 1}, {2, 3}, 2)
    assert res and verify_disjoint_paths(K, {0, 1}, {2, 3}, res.paths)
    P = path_graph(3)
    res = disjoint_paths(P, {0}, {2}, 2)
    assert not res and res.cut == [1] and verify_separator(P, {0}, {2}, res.cut)
    G = grid(5, 5)
    assert not disjoint_paths(G, {0}, {24}, 2)
    res = disjoint_paths(G, {0}, {24}, 2, internal=True)
    assert res and len(res.paths) == 2 and verify_disjoint_paths(G, {0}, {24}, res.paths, internal=True)
    res = disjoint_paths(P, {0}, {2}, 2, internal=True)
    assert res.cut == [1]


def test_disjoint_paths_outcomes_verify():
    for s in range(40):
        G = gnp(14, 0.2, 500 + s)
        A, B = {0, 1, 2}, {11, 12, 13}
        count = 1 + s % 3
        res = disjoint_paths(G, A, B, count)
        if res:
            assert len(res.paths) == count and verify_disjoint_paths(G, A, B, res.paths)
        else:
            assert len(res.cut) < count and verify_separator(G, A, B, res.cut)
        inner = disjoint_paths(G, {0}, {13}, count, internal=True)
        if inner:
            assert verify_disjoint_paths(G, {0}, {13}, inner.paths, internal=True)
        else:
            assert len(inner.cut) < count and verify_separator(G, {0}, {13}, inner.cut)
            assert not {0, 13} & set(inner.cut) or G.has_edge(0, 13)


def test_disjoint_paths_rejects_overlap():
    with pytest.raises(ValueError):
        disjoint_paths(complete_graph(4), {0, 1}, {1, 2}, 1)


def test_block_cut_tree_examples():
    tri_pendant = Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    t = block_cut_tree(tri_pendant)
    assert sorted(map(sorted, t.blocks)) == [[0, 1, 2], [2, 3]] and t.cut_vertices == [2]
    t = block_cut_tree(path_graph(4))
    assert len(t.blocks) == 3 and sorted(t.cut_vertices) == [1, 2]
    bowtie = Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    t = block_cut_tree(bowtie)
    assert len(t.blocks) == 2 and t.cut_vertices == [2] and t.is_forest()


def test_block_cut_tree_against_brute_force():
    for s in range(1000):
        n = 3 + s % 58
        G = gnp(n, min(1.0, 2.2 / n + 0.002 * (s % 7)), 9000 + s)
        t = block_cut_tree(G)
        assert t.size_sum() <= 2 * n and t.is_forest()
        covered = set().union(*t.blocks) if t.blocks else set()
        assert covered == set(range(n))
        if n <= 10:
            assert sorted(t.cut_vertices) == brute_articulation(G)


def test_diameter_examples():
    for k in (5, 8, 13):
        d, bound, ok = diameter_check(cycle_graph(k))
        assert d == k // 2 and bound == k - 1 and ok
    assert diameter_check(complete_graph(7))[0] == 1
    for s in range(20):
        assert diameter_check(random_regular(50, 4, RngStream(s).generator()))[2]
    assert diameter_bound(10, 2) == 9
    with pytest.raises(ValueError):
        diameter_check(path_graph(5))
    with pytest.raises(ValueError):
        diameter_check(Graph(6, list(cycle_graph(3).edges) + [(3, 4), (4, 5), (3, 5)]))


@pytest.mark.parametrize("n", [5, 8, 9, 12])
def test_long_odd_cycle_in_complete_graph(n):
    res = long_odd_cycle(complete_graph(n), rng=0)
    assert res.length in (n, n - 1) and res.length % 2 and verify_cycle(complete_graph(n), res.cycle)


def test_long_odd_cycle_parity_fix_through_short_odd_cycle():
    # C5 on 0..4 with a 40-cycle attached through vertices 0 and 2
    edges = list(cycle_graph(5).edges)
    ring = [0] + list(range(5, 43)) + [2]
    edges += [(min(a, b), max(a, b)) for a, b in zip(ring, ring[1:])]
    G = Graph(43, edges)
    res = long_odd_cycle(G, rng=1)
    assert res.length % 2 and verify_cycle(G, res.cycle)
    # the ring path has 39 edges; closing through the 2-edge arc of C5 gives 41
    assert res.length == 41


def test_long_odd_cycle_rejects_bipartite():
    with pytest.raises(ValueError):
        long_odd_cycle(complete_bipartite(4, 4))


def test_long_odd_cycle_sparse_random():
    G = gnp(400, 5 / 400, 3)
    res = long_odd_cycle(G, rng=3)
    assert res.length % 2 and verify_cycle(G, res.cycle) and res.length >= 0.8 * 400 * 0.9


def test_colorings():
    G = complete_graph(8)
    c = color_random(G, 3, 2)
    assert sum(c.class_sizes()) == G.m
    assert sum(color_class(G, c, i).m for i in range(3)) == G.m
    cut = color_by_cut(G, range(4))
    assert cut.class_sizes() == [16, 12]


def test_mono_odd_single_color_complete():
    G = complete_graph(15)
    res = monochromatic_odd_cycle(G, EdgeColoring(1, (0,) * G.m), rng=0)
    assert res and res.length >= 14 and res.length >= res.bound


def test_mono_odd_balanced_cut():
    G = complete_graph(20)
    res = monochromatic_odd_cycle(G, color_by_cut(G, range(10)), rng=0)
    assert res.color == 1
    inside = color_class(G, color_by_cut(G, range(10)), 1)
    assert verify_cycle(inside, res.cycle) and res.length == 9
    assert len({v < 10 for v in res.cycle}) == 1


def test_mono_odd_all_bipartite():
    C6 = cycle_graph(6)
    col = EdgeColoring(2, tuple(i % 2 for i in range(6)))
    res = monochromatic_odd_cycle(C6, col, rng=0)
    assert not res and res.trace["outcome"] == "all color classes bipartite"
