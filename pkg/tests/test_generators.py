import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cyclelab.graph import Graph, complete_bipartite, complete_graph, count_pair_edges, cycle_graph
from cyclelab.generators import (check_upper_uniform, estimate_lambda, keep_each_edge, mixing_lemma_check,
                                 planted_blowup, random_regular, sample_gnp)
from cyclelab.rng import RngStream

from conftest import gnp


def test_gnp_extremes():
    assert sample_gnp(12, 0.0, 1).m == 0
    assert sample_gnp(12, 1.0, 1) == complete_graph(12)
    with pytest.raises(ValueError):
        sample_gnp(5, 1.5, 0)


def test_gnp_edge_count_within_five_sigma():
    n = 10_000
    p = 20 / n
    N = n * (n - 1) // 2
    mu, sd = p * N, math.sqrt(N * p * (1 - p))
    for s in range(100):
        G = sample_gnp(n, p, RngStream(s).generator())
        assert abs(G.m - mu) <= 5 * sd


def test_same_stream_same_graph():
    a = sample_gnp(300, 0.05, RngStream(9, 2).generator())
    b = sample_gnp(300, 0.05, RngStream(9, 2).generator())
    assert a.edges == b.edges
    assert random_regular(40, 3, RngStream(4).generator()).edges == random_regular(40, 3, RngStream(4).generator()).edges


def test_keep_each_edge_extremes():
    G = gnp(30, 0.3, 5)
    assert keep_each_edge(G, 1.0, 0) == G
    H = keep_each_edge(G, 0.0, 0)
    assert H.m == 0 and H.n == 30
    assert set(keep_each_edge(G, 0.5, 3).edges) <= set(G.edges)


def test_keep_on_complete_matches_gnp_counts():
    n, p = 40, 0.3
    K = complete_graph(n)
    a = [keep_each_edge(K, p, RngStream(s, 0).generator()).m for s in range(300)]
    b = [sample_gnp(n, p, RngStream(s, 1).generator()).m for s in range(300)]
    N = n * (n - 1) // 2
    sd = math.sqrt(N * p * (1 - p))
    # both sample means within 4 standard errors of the binomial mean
    for xs in (a, b):
        assert abs(np.mean(xs) - p * N) < 4 * sd / math.sqrt(len(xs))
    assert abs(np.std(a) - sd) < 0.2 * sd and abs(np.std(b) - sd) < 0.2 * sd


def test_upper_uniform_trivial_cases():
    assert check_upper_uniform(complete_graph(10), 1, 0, mode="exact")
    assert check_upper_uniform(Graph(10), 0.3, 0.1, mode="exact")


def test_upper_uniform_on_balanced_biclique():
    K = complete_bipartite(5, 5)
    # the two sides carry density 1, so p = 1/2 is already violated
    v = check_upper_uniform(K, Fraction(1, 2), Fraction(1, 10), mode="exact")
    assert not v
    U, W = v.witness
    assert count_pair_edges(K, U, W) > Fraction(11, 10) * Fraction(1, 2) * len(U) * len(W)
    p_low = Fraction(2 * K.m, 100) / 3
    v = check_upper_uniform(K, p_low, Fraction(1, 10), mode="exact")
    assert not v
    assert count_pair_edges(K, range(5), range(5, 10)) > (1 + Fraction(1, 10)) * p_low * 25
    assert check_upper_uniform(K, 1, 0, mode="exact")


def naive_uniform(G, p, eta):
    n = G.n
    lo = max(1, math.ceil(eta * n))
    for lab in product((0, 1, 2), repeat=n):
        U = [v for v in range(n) if lab[v] == 1]
        W = [v for v in range(n) if lab[v] == 2]
        if len(U) >= lo and len(W) >= lo and count_pair_edges(G, U, W) > (1 + eta) * p * len(U) * len(W):
            return False
    return True


def test_upper_uniform_exact_agrees_with_naive_loop():
    for s in range(25):
        G = gnp(7, 0.5, 70 + s)
        for p in (Fraction(1, 2), Fraction(3, 4)):
            eta = Fraction(1, 5)
            assert bool(check_upper_uniform(G, p, eta, mode="exact")) == naive_uniform(G, p, eta)


def test_upper_uniform_exact_beyond_budget_raises():
    with pytest.raises(ValueError):
        check_upper_uniform(Graph(30), 0.5, 0.1, mode="exact", budget=1000)


def test_upper_uniform_sampled_is_labeled():
    v = check_upper_uniform(gnp(200, 0.1, 1), 0.1, 0.5, mode="sampled", budget=200, rng=2)
    assert v.mode == "sampled"


def test_lambda_on_known_spectra():
    assert estimate_lambda(cycle_graph(5)) == pytest.approx(2 * abs(math.cos(4 * math.pi / 5)), rel=1e-4)
    assert estimate_lambda(complete_graph(9)) == pytest.approx(1, rel=1e-4)
    assert estimate_lambda(complete_bipartite(6, 6)) == pytest.approx(6, rel=1e-4)
    for n in (6, 9, 14):
        expected = max(abs(2 * math.cos(2 * math.pi * j / n)) for j in range(1, n))
        assert estimate_lambda(cycle_graph(n)) == pytest.approx(expected, rel=1e-4)
    with pytest.raises(ValueError):
        estimate_lambda(Graph(4, [(0, 1)]))


def test_mixing_examples():
    assert mixing_lemma_check(complete_graph(4), 3, 1)
    assert mixing_lemma_check(cycle_graph(6), 2, 2)
    for s in range(10):
        G = random_regular(10, 3, RngStream(s).generator())
        assert mixing_lemma_check(G, 3, 3)
        lam = float(max(abs(x) for x in np.linalg.eigvalsh(
            np.array([[1 if j in G.adj[i] else 0 for j in range(10)] for i in range(10)]))[:-1]))
        assert mixing_lemma_check(G, 3, lam)


def test_mixing_detects_too_small_lambda():
    v = mixing_lemma_check(complete_bipartite(4, 4), 4, 1)
    assert not v
    A, B = v.witness
    e = count_pair_edges(complete_bipartite(4, 4), A, B)
    assert abs(e - Fraction(4 * len(A) * len(B), 8)) > math.sqrt(len(A) * len(B))


def test_random_regular_examples():
    assert random_regular(4, 3, 0) == complete_graph(4)
    G = random_regular(6, 2, 1)
    assert all(G.degree(v) == 2 for v in range(6))
    with pytest.raises(ValueError):
        random_regular(5, 3, 0)


def test_random_regular_spectral_gap():
    good = 0
    for s in range(50):
        G = random_regular(1000, 10, RngStream(s).generator())
        assert all(G.degree(v) == 10 for v in range(0, 1000, 97))
        good += estimate_lambda(G) <= 2 * math.sqrt(9) + 1
    assert good >= 48


def test_planted_blowup_shape():
    G, part = planted_blowup(4, 5)
    assert G.m == 3 * 25 and part.k == 4
    C, _ = planted_blowup(5, 3, closed=True)
    assert C.m == 5 * 9
