import random
from fractions import Fraction

import pytest

from cyclelab.generators import planted_blowup
from cyclelab.graph import Graph, complete_bipartite, complete_graph, cycle_graph, path_graph, verify_cycle
from cyclelab.oracle import has_cycle_of_length
from cyclelab.rng import RngStream
from cyclelab.stitcher import (CycleRequest, default_gamma, execute_plan, find_cycle_of_length, floor_odd,
                               plan_even_cycle, plan_odd_cycle)
from cyclelab.verdict import StageFailure

EPS = Fraction(1, 20)


def test_floor_odd():
    assert [floor_odd(x) for x in (1, 2, 3, 230.5, Fraction(461, 2))] == [1, 1, 3, 229, 229]


def test_request_cases():
    assert CycleRequest(6, 40, Fraction(1, 4)).case == 1
    assert CycleRequest(12, 40, Fraction(1, 4)).case == 2
    assert CycleRequest(13, 40, Fraction(1, 4)).case == 3
    assert CycleRequest(22, 40, Fraction(1, 4)).case == 4


def test_even_single_pair_closes_with_one_edge():
    plan = plan_even_cycle((0, 1), 20, Fraction(1, 100), 10_000, 10)
    piece, = plan.pieces
    assert plan.branch == "single-pair" and piece.ell == 20 - 2 * plan.h - 1 and piece.ell % 2 == 1
    assert plan.total() == 20 and plan.connectors == 1


def test_even_b3_split():
    # eps*m = 300 gives depth 9 for binary trees
    plan = plan_even_cycle((0, 1, 2, 3), 400, EPS, 6000, 4)
    assert plan.h == 9 and [p.ell for p in plan.pieces] == [182, 180]


def test_plan_bookkeeping_identity():
    rnd = random.Random(5)
    done = 0
    while done < 10_000:
        item = rnd.choice((1, 2))
        b = rnd.choice((1, 3, 5, 7, 9, 11)) if item == 1 else rnd.choice((3, 5, 7, 9, 11))
        m = rnd.randint(20, 5000)
        eps = rnd.choice((Fraction(1, 20), Fraction(1, 100), Fraction(1, 200)))
        t = rnd.randint(3, 4000)
        seq = tuple(range(b + 1)) if item == 1 else tuple(range(b))
        try:
            plan = (plan_even_cycle if item == 1 else plan_odd_cycle)(seq, t + (t % 2) if item == 1 else t | 1,
                                                                     eps, m, 12)
        except ValueError:
            continue
        assert plan.total() == plan.t
        assert plan.t % 2 == (0 if item == 1 else 1)
        done += 1


def test_odd_plan_values():
    plan = plan_odd_cycle((0, 1, 2, 3, 4), 501, EPS, 6000, 5)
    assert plan.h == 9
    # l0 = floor_odd((2*501 - 2 - 19*4) / 4) = 231 and l1 = 501 - 1 - 2 - 36 - 231 = 231
    assert [p.ell for p in plan.pieces] == [231, 231]
    assert plan.total() == 501 and plan.closing == "vertex" and plan.closing_cluster == 4


def test_odd_plan_b3_single_pair():
    plan = plan_odd_cycle((0, 1, 2), 2 * 4 + 3 + 10, EPS, 200, 3)
    assert len(plan.pieces) == 1 and plan.total() == plan.t


def test_parity_errors():
    with pytest.raises(ValueError):
        plan_odd_cycle((0, 1, 2), 40, EPS, 200, 3)
    with pytest.raises(ValueError):
        plan_even_cycle((0, 1, 2, 3), 41, EPS, 200, 4)
    with pytest.raises(ValueError):
        plan_even_cycle((0, 1, 2), 40, EPS, 200, 4)


def test_planted_chain_even_cycle():
    G, part = planted_blowup(4, 300)
    plan = plan_even_cycle((0, 1, 2, 3), 404, EPS, 300, 4)
    cert = execute_plan(G, part, plan, rng=1)
    assert verify_cycle(G, cert.cycle, 404)


def test_missing_connector_pair_is_named():
    G, part = planted_blowup(4, 300)
    cut = {1, 2}
    H = Graph(G.n, [e for e in G.edges if {part.assignment[e[0]], part.assignment[e[1]]} != cut])
    plan = plan_even_cycle((0, 1, 2, 3), 404, EPS, 300, 4)
    with pytest.raises(StageFailure) as info:
        execute_plan(H, part, plan, rng=1)
    exc = info.value
    assert exc.stage == "connector"
    A, B = exc.witness["A"], exc.witness["B"]
    assert not any(H.has_edge(a, b) for a in A for b in B)


def test_planted_odd_cycle():
    G, part = planted_blowup(5, 200, closed=True)
    cert = find_cycle_of_length(G, 451, 0.1, None, EPS, 5, rng=0, partition=part, s_graph=cycle_graph(5))
    assert cert and verify_cycle(G, cert.cycle, 451)


@pytest.mark.parametrize("t", [3, 4, 7, 10, 17, 24, 30])
def test_complete_graph_any_length(t):
    G = complete_graph(30)
    cert = find_cycle_of_length(G, t, 0.1, None, EPS, 2 if t % 2 == 0 else 5, rng=t)
    assert cert and verify_cycle(G, cert.cycle, t)


def test_bipartite_host_has_no_odd_cycle():
    G = complete_bipartite(7, 7)
    res = find_cycle_of_length(G, 9, 0.1, None, EPS, 4, rng=0)
    assert not res and res.to_json()["t"] == 9
    assert not has_cycle_of_length(G, 9)


def test_default_gamma_in_range():
    for k in (2, 3, 5, 12, 40):
        for eps in (Fraction(1, 100), EPS):
            assert 0 < default_gamma(eps, k) < 1


def test_out_of_range_t_rejected():
    with pytest.raises(ValueError):
        find_cycle_of_length(path_graph(5), 6, 0.1, None, EPS, 2)
