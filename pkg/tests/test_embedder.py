import pytest

from cyclelab.embedder import (ArityError, TreeSpec, embed_large_trhl, embed_small_trhl, embed_trhl, fp_embed_tree,
                               make_rary, make_trhl, tree_diameter, verify_tree_embedding)
from cyclelab.graph import Graph, complete_bipartite
from cyclelab.rng import RngStream
from cyclelab.verdict import StageFailure


def random_pair(n1, n2, q, seed):
    gen = RngStream(seed).generator()
    return Graph(n1 + n2, [(a, n1 + b) for a in range(n1) for b in range(n2) if gen.random() < q])


def bridged_blocks(seed):
    """Two complete 50+50 blocks at opposite corners, everything else at density 1/2."""
    gen = RngStream(seed).generator()
    edges = [(a, 200 + b) for a in range(200) for b in range(200)
             if (a < 50 and b < 50) or (a >= 150 and b >= 150) or gen.random() < 0.5]
    return Graph(400, edges)


@pytest.mark.parametrize("spec,n,longest,leaves", [
    (TreeSpec(2, 1, 1), 6, 3, 2),
    (TreeSpec(2, 2, 3), 16, 7, 4),
    (TreeSpec(5, 0, 4), 5, 4, 1),
])
def test_make_trhl_examples(spec, n, longest, leaves):
    T = make_trhl(spec)
    assert T.n == n and len(T.leaves1) == len(T.leaves2) == leaves
    assert tree_diameter(T.n, T.edges()) == longest


def test_make_trhl_counts_over_grid():
    for r in range(2, 7):
        for h in range(0, 7):
            if r ** h > 2000:
                continue
            for ell in range(1, 21):
                T = make_trhl(TreeSpec(r, h, ell))
                assert T.n == ell - 1 + 2 * (r ** (h + 1) - 1) // (r - 1)
                assert len(T.edges()) == T.n - 1
                assert tree_diameter(T.n, T.edges()) == ell + 2 * h
                assert all(T.depth[x] == h for x in T.leaves1)


def test_fp_embed_star_and_matching():
    K = complete_bipartite(20, 20)
    L, R = frozenset(range(20)), frozenset(range(20, 40))
    star = make_rary(5, 1)
    f = fp_embed_tree(K, star, 0, left=L, right=R)
    assert verify_tree_embedding(K, star, f) and all(f[x] in R for x in range(1, 6))
    M = Graph(8, [(i, i + 4) for i in range(4)])
    with pytest.raises(StageFailure):
        fp_embed_tree(M, make_rary(2, 1), 0)


def test_fp_embed_binary_tree_in_sparse_pair():
    ok = 0
    tree = make_rary(2, 5)
    for s in range(50):
        H = random_pair(200, 200, 0.1, s)
        root = int(RngStream(s, 1).generator().integers(200))
        try:
            f = fp_embed_tree(H, tree, root, left=frozenset(range(200)), right=frozenset(range(200, 400)))
        except StageFailure:
            continue
        assert verify_tree_embedding(H, tree, f)
        ok += 1
    assert ok >= 48


def test_small_tree_arity_rejected_for_large_eps():
    K = complete_bipartite(64, 64)
    with pytest.raises(ArityError):
        embed_small_trhl(K, range(64), range(64, 128), 1 / 32, 64, 3)


def test_small_tree_in_dense_pair():
    H = random_pair(500, 500, 0.2, 7)
    e = embed_small_trhl(H, range(500), range(500, 1000), 0.01, 500, 9, rng=1)
    assert (e.tree.spec.r, e.tree.spec.h) == (4, 2) and e.tree.n == 50
    assert verify_tree_embedding(H, e.tree, e.mapping, e.left, e.right)


def test_small_tree_with_single_edge_path():
    H = complete_bipartite(300, 300)
    e = embed_small_trhl(H, range(300), range(300, 600), 0.01, 300, 1, rng=2)
    assert e.tree.spec.ell == 1 and verify_tree_embedding(H, e.tree, e.mapping, e.left, e.right)


@pytest.mark.parametrize("ell,leaf_side", [(151, None), (150, 0), (150, 1)])
def test_large_tree_in_bridged_blocks(ell, leaf_side):
    G = bridged_blocks(1)
    e = embed_large_trhl(G, range(200), range(200, 400), 0.02, 200, ell, leaf_side, rng=3)
    assert verify_tree_embedding(G, e.tree, e.mapping, e.left, e.right, leaf_side)
    assert tree_diameter(e.tree.n, e.tree.edges()) == ell + 2 * e.tree.spec.h
    if leaf_side is not None:
        side = e.left if leaf_side == 0 else e.right
        assert all(v in side for v in e.host_leaves(1) + e.host_leaves(2))


def test_large_tree_on_empty_pair_fails_at_path_stage():
    with pytest.raises(StageFailure) as info:
        embed_large_trhl(Graph(400), range(200), range(200, 400), 0.02, 200, 101, rng=0)
    assert info.value.stage in ("path", "cleanup")


def test_embed_trhl_explicit_spec():
    H = random_pair(60, 60, 0.5, 4)
    e = embed_trhl(H, range(60), range(60, 120), TreeSpec(3, 2, 4), leaf_side=1, rng=0)
    assert verify_tree_embedding(H, e.tree, e.mapping, e.left, e.right, 1)


def test_verify_rejects_tampered_embedding():
    H = random_pair(60, 60, 0.5, 4)
    e = embed_trhl(H, range(60), range(60, 120), TreeSpec(2, 2, 3), rng=0)
    bad = dict(e.mapping)
    bad[1] = bad[2]
    assert not verify_tree_embedding(H, e.tree, bad)
    bad = dict(e.mapping)
    bad[0] = next(v for v in range(60) if v not in e.mapping.values())
    assert not verify_tree_embedding(H, e.tree, bad, e.left, e.right) or H.has_edge(bad[0], bad[1])
