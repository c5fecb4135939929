"""Double-rooted trees T^(r,h)_l and their certified embeddings into bipartite pairs.

T^(r,h)_l is two complete r-ary trees of depth h whose roots are joined by a
path of length l. Embeddings are produced greedily and accepted only after
independent verification.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .expander import cleanup_to_expander, corollary_params, dfs_path_partition, longest_path_greedy
from .extremal import as_fraction
from .graph import Check, Graph, bipartite_pair_graph
from .rng import as_generator
from .verdict import StageFailure


class ArityError(ValueError):
    """The small-tree branch needs floor(1/(16 eps)) - 2 >= 2."""


@dataclass(frozen=True)
class TreeSpec:
    r: int
    h: int
    ell: int

    def __post_init__(self):
        if self.r < 1 or self.h < 0 or self.ell < 1:
            raise ValueError(f"invalid tree spec {self}")

    @property
    def copy_size(self) -> int:
        if self.r == 1:
            return self.h + 1
        return (self.r ** (self.h + 1) - 1) // (self.r - 1)

    @property
    def vertex_count(self) -> int:
        return self.ell - 1 + 2 * self.copy_size

    @property
    def longest_path(self) -> int:
        return self.ell + 2 * self.h


@dataclass(frozen=True)
class Rooted:
    children: tuple
    root: int


@dataclass(frozen=True)
class AbstractTree:
    """Vertex ids: copy 1 first (root1 = 0), then the path interior, then copy 2."""

    spec: TreeSpec
    parent: tuple
    children: tuple
    depth: tuple
    root1: int
    root2: int
    leaves1: tuple
    leaves2: tuple
    path: tuple
    copy_of: tuple  # 1, 2 or 0 for path interior

    @property
    def n(self) -> int:
        return len(self.parent)

    def edges(self):
        return [(self.parent[v], v) for v in range(self.n) if self.parent[v] >= 0]

    def copy_tree(self, c: int) -> Rooted:
        root = self.root1 if c == 1 else self.root2
        ch = [tuple(w for w in kids if self.copy_of[w] == c) for kids in self.children]
        return Rooted(tuple(ch), root)

    def whole(self) -> Rooted:
        return Rooted(self.children, self.root1)


def _rary(r: int, h: int, start: int):
    """Complete r-ary tree of depth h with ids from ``start``; returns (edges, leaves, next id)."""
    edges, level, nxt = [], [start], start + 1
    for _ in range(h):
        new = []
        for v in level:
            for _ in range(r):
                edges.append((v, nxt))
                new.append(nxt)
                nxt += 1
        level = new
    return edges, level, nxt


def make_trhl(spec: TreeSpec) -> AbstractTree:
    r, h, ell = spec.r, spec.h, spec.ell
    e1, leaves1, nxt = _rary(r, h, 0)
    interior = list(range(nxt, nxt + ell - 1))
    nxt += ell - 1
    root2 = nxt
    e2, leaves2, nxt = _rary(r, h, root2)
    n = nxt
    path = [0] + interior + [root2]
    parent = [-1] * n
    for a, b in e1:
        parent[b] = a
    for i in range(1, len(path)):
        parent[path[i]] = path[i - 1]
    for a, b in e2:
        parent[b] = a
    children = [[] for _ in range(n)]
    for v in range(n):
        if parent[v] >= 0:
            children[parent[v]].append(v)
    depth = [0] * n
    for v in range(1, n):
        # ids are assigned so every parent precedes its children
        depth[v] = depth[parent[v]] + 1
    size = spec.copy_size
    copy_of = [1] * size + [0] * (ell - 1) + [2] * size
    return AbstractTree(spec, tuple(parent), tuple(tuple(c) for c in children), tuple(depth), 0, root2,
                        tuple(leaves1), tuple(leaves2), tuple(path), tuple(copy_of))


def make_rary(r: int, h: int) -> Rooted:
    edges, _, n = _rary(r, h, 0)
    ch = [[] for _ in range(n)]
    for a, b in edges:
        ch[a].append(b)
    return Rooted(tuple(tuple(c) for c in ch), 0)


def tree_diameter(n: int, edges) -> int:
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def far(s):
        dist = [-1] * n
        dist[s] = 0
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    dq.append(w)
        best = max(range(n), key=lambda v: dist[v])
        return best, dist[best]

    a, _ = far(0)
    return far(a)[1]


@dataclass
class TreeEmbedding:
    tree: AbstractTree
    mapping: dict
    host: Graph = field(repr=False)
    left: frozenset | None = field(default=None, repr=False)
    right: frozenset | None = field(default=None, repr=False)
    trace: dict = field(default_factory=dict)

    def host_leaves(self, c: int) -> list:
        return [self.mapping[x] for x in (self.tree.leaves1 if c == 1 else self.tree.leaves2)]

    def leaf_side(self, c: int) -> int | None:
        if self.left is None:
            return None
        return 0 if self.host_leaves(c)[0] in self.left else 1

    def host_path(self, leaf_a: int, leaf_b: int) -> list:
        """Host path from a copy-1 leaf to a copy-2 leaf, through the joining path."""
        inv = {v: x for x, v in self.mapping.items()}
        xa, xb = inv[leaf_a], inv[leaf_b]
        T = self.tree
        if T.copy_of[xa] != 1 or T.copy_of[xb] != 2:
            raise ValueError("need a copy-1 leaf and a copy-2 leaf")
        up = []
        x = xa
        while x != T.root1:
            up.append(x)
            x = T.parent[x]
        down = []
        x = xb
        while x != T.root2:
            down.append(x)
            x = T.parent[x]
        seq = up + list(T.path) + down[::-1]
        return [self.mapping[x] for x in seq]

    def to_json(self) -> dict:
        s = self.tree.spec
        return {"r": s.r, "h": s.h, "ell": s.ell, "map": {str(k): v for k, v in sorted(self.mapping.items())},
                "trace": self.trace}


def verify_tree_embedding(G: Graph, tree, mapping: dict, left=None, right=None, leaf_side=None) -> Check:
    """Injective, edge-preserving, side-alternating and (optionally) leaves on one side."""
    if isinstance(tree, AbstractTree):
        n, edges = tree.n, tree.edges()
        leaves = list(tree.leaves1) + list(tree.leaves2)
    else:
        n = None
        edges = [(a, b) for a, kids in enumerate(tree.children) for b in kids]
        leaves = []
    keys = set(mapping)
    if n is not None and keys != set(range(n)):
        return Check(False, "mapping does not cover the tree")
    imgs = list(mapping.values())
    if len(set(imgs)) != len(imgs):
        return Check(False, "mapping is not injective")
    for v in imgs:
        if not 0 <= v < G.n:
            return Check(False, f"host vertex {v} out of range")
    for a, b in edges:
        if a not in mapping or b not in mapping:
            return Check(False, f"tree edge ({a}, {b}) not mapped")
        if not G.has_edge(mapping[a], mapping[b]):
            return Check(False, f"tree edge ({a}, {b}) maps to a non-edge")
    if left is not None:
        L, R = set(left), set(right)
        for x, v in mapping.items():
            if v not in L and v not in R:
                return Check(False, f"host vertex {v} outside the pair")
        for a, b in edges:
            if (mapping[a] in L) == (mapping[b] in L):
                return Check(False, f"tree edge ({a}, {b}) does not alternate sides")
        if leaf_side is not None:
            S = L if leaf_side == 0 else R
            for x in leaves:
                if mapping[x] not in S:
                    return Check(False, f"leaf {x} not on side {leaf_side}")
    return Check(True)


def _bfs_order(tree: Rooted):
    order, parent = [tree.root], {tree.root: -1}
    i = 0
    while i < len(order):
        x = order[i]
        for c in tree.children[x]:
            parent[c] = x
            order.append(c)
        i += 1
    return order, parent


def _heights(tree: Rooted, order, parent, cap: int):
    """Subtree heights and, per height j = 1..cap, the largest child count among vertices of that height."""
    height = {x: 0 for x in order}
    for x in reversed(order):
        p = parent[x]
        if p >= 0 and height[x] + 1 > height[p]:
            height[p] = height[x] + 1
    need = {}
    for x in order:
        j = min(height[x], cap)
        if j:
            need[j] = max(need.get(j, 0), len(tree.children[x]))
    top = min(max(height.values()), cap)
    return height, [need.get(j, 1) for j in range(1, top + 1)]


def _feasible_levels(adj, root, levels, used, ok_next):
    """ok[j]: free vertices near ``root`` able to host a vertex of height j (collisions ignored)."""
    radius = len(levels) + 1
    ball, frontier = {root}, [root]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in ball and w not in used and ok_next(v, w):
                    ball.add(w)
                    nxt.append(w)
        frontier = nxt
    ok = [ball]
    for need in levels:
        prev, cur = ok[-1], set()
        for v in prev:
            c = 0
            for w in adj[v]:
                if w in prev and ok_next(v, w):
                    c += 1
                    if c > need:
                        cur.add(v)
                        break
        ok.append(cur)
    return ok


def fp_embed_tree(H: Graph, tree: Rooted, root_host: int, *, left=None, right=None, allowed=None,
                  forbidden=(), max_degree: int | None = None, budget: int | None = None, rng=None,
                  cand_cap: int = 24, score_cap: int = 64, level_cap: int = 8) -> dict:
    """Embed a rooted tree into H with ``tree.root`` at ``root_host``.

    Vertices are placed in BFS order. Each is mapped to a free neighbor of
    its parent's image; candidates with more free neighbors are tried first
    and those with fewer free neighbors than the vertex has children are
    skipped. A host vertex is only offered for an abstract vertex of height
    j if at least (children + 1) of its free neighbors qualify for height
    j - 1 (heights capped at ``level_cap``), which ignores collisions but
    prunes most dead ends up front. Dead ends trigger chronological backtracking, at most ``budget``
    (default 50 |T|) retreats. With ``left``/``right`` given, images must
    alternate between the two sides. Returns the abstract -> host map;
    raises StageFailure("fp-embed") with the stuck vertex on failure.
    """
    if not 0 <= root_host < H.n:
        raise ValueError("root_host out of range")
    order, parent = _bfs_order(tree)
    if max_degree is not None:
        for x in order:
            deg = len(tree.children[x]) + (1 if parent[x] >= 0 else 0)
            if deg > max_degree:
                raise ValueError(f"tree degree {deg} exceeds the cap {max_degree}")
    budget = 50 * len(order) if budget is None else budget
    gen = as_generator(rng) if rng is not None else None
    used = set(forbidden)
    if left is not None:
        L, R = frozenset(left), frozenset(right)
        side_sets = (L - used, R - used)

        def ok_next(y, w):
            return w in (side_sets[1] if y in L else side_sets[0])

        if root_host not in L and root_host not in R:
            raise StageFailure("fp-embed", "root outside the pair")
    else:
        A = None if allowed is None else frozenset(allowed)

        def ok_next(y, w):
            return A is None or w in A

    if root_host in used:
        raise StageFailure("fp-embed", "root already used")
    adj = H.adj
    height, levels = _heights(tree, order, parent, level_cap)
    ok = _feasible_levels(adj, root_host, levels, used, ok_next)
    top = min(height[tree.root], len(levels))
    if top and sum(1 for z in adj[root_host] if z not in used and ok_next(root_host, z) and z in ok[top - 1]) \
            < len(tree.children[tree.root]):
        raise StageFailure("fp-embed", "root cannot carry the tree", detail={"vertex": tree.root, "placed": 0})

    def free_score(w, need):
        c = 0
        for z in adj[w]:
            if z not in used and ok_next(w, z):
                c += 1
                if c >= score_cap:
                    break
        return c

    def candidates(x):
        y = f[parent[x]]
        need = len(tree.children[x])
        nb = adj[y]
        if gen is not None and len(nb) > 1:
            off = int(gen.integers(len(nb)))
            nb = nb[off:] + nb[:off]
        out = []
        lvl = ok[min(height[x], len(levels))]
        for w in nb:
            if w in used or not ok_next(y, w) or w not in lvl:
                continue
            sc = free_score(w, need) if need else 0
            if sc >= need:
                out.append((sc, -w, w))
            if len(out) >= cand_cap:
                break
        out.sort()
        return [w for _, _, w in out]

    f = {tree.root: root_host}
    used.add(root_host)
    stacks = [None] * len(order)
    idx, retreats = 1, 0
    while idx < len(order):
        x = order[idx]
        if stacks[idx] is None:
            stacks[idx] = candidates(x)
        cands = stacks[idx]
        placed = False
        while cands:
            w = cands.pop()
            if w not in used:
                f[x] = w
                used.add(w)
                placed = True
                break
        if placed:
            idx += 1
            continue
        stacks[idx] = None
        idx -= 1
        retreats += 1
        if idx == 0 or retreats > budget:
            raise StageFailure("fp-embed", "stuck", detail={"vertex": x, "parent_host": f.get(parent[x]),
                                                             "placed": len(f), "retreats": retreats})
        used.discard(f.pop(order[idx]))
    return f


def levels_for(eps, m, r: int) -> int:
    """Smallest h >= 0 with r**h >= eps*m, i.e. ceil(log(eps m) / log r) clamped at 0."""
    target = as_fraction(eps) * as_fraction(m)
    h = 0
    while r ** h < target:
        h += 1
    return h


def small_tree_arity(eps) -> int:
    return math.floor(1 / (16 * as_fraction(eps))) - 2


def _orient_root_side(leaf_side: int | None, h: int) -> int:
    """Side of the first root so that copy-1 leaves land on ``leaf_side``."""
    if leaf_side is None:
        return 0
    return leaf_side if h % 2 == 0 else 1 - leaf_side


def embed_small_trhl(G: Graph, V1, V2, eps, m, ell: int, *, rng=None, leaf_side=None, cleanup: bool = True,
                     strict: bool = True, root_tries: int = 12, forbidden=()) -> TreeEmbedding:
    """Embed T^(r,h)_l with r = floor(1/(16 eps)) - 2 and r**h >= eps m, whole tree at once.

    The pair is first cleaned with the case-1 expander parameters (at the
    eps*m threshold scale); the tree is then embedded greedily from up to
    ``root_tries`` roots of largest degree. ``leaf_side`` fixes where the
    copy-1 leaves go.
    """
    r = small_tree_arity(eps)
    if r < 2:
        raise ArityError(f"arity {r} < 2 for eps={eps}")
    h = levels_for(eps, m, r)
    thr = as_fraction(eps) * as_fraction(m)
    if strict and not 1 <= ell <= 2 * thr:
        raise ValueError(f"ell={ell} outside [1, 2 eps m]")
    V1 = [v for v in V1 if v not in set(forbidden)]
    V2 = [v for v in V2 if v not in set(forbidden)]
    trace = {"strategy": "small", "r": r, "h": h}
    if cleanup:
        cp = corollary_params(eps, 1) if as_fraction(eps) < Fraction(1, 85) else None
        a, b = (cp.cleanup_a, cp.cleanup_b) if cp else (6 * as_fraction(eps), 1 / (8 * as_fraction(eps)) + 1)
        tr = cleanup_to_expander(G, V1, V2, eps, m, a, b, strict=False, verify_mode="sampled", budget=200, rng=rng)
        trace["cleanup"] = tr.outcome
        if tr.outcome == "eps_witness":
            raise StageFailure("cleanup", "pair violates the eps-property", witness=tr.witness)
        if tr.outcome == "success":
            V1, V2 = tr.U1, tr.U2
    tree = make_trhl(TreeSpec(r, h, ell))
    side0 = _orient_root_side(leaf_side, h)
    L, R = frozenset(V1), frozenset(V2)
    roots = sorted((V1, V2)[side0], key=lambda v: (-sum(1 for w in G.adj[v] if w in (R if side0 == 0 else L)), v))
    last = None
    for root in roots[:root_tries]:
        try:
            f = fp_embed_tree(G, tree.whole(), root, left=L, right=R, rng=rng)
        except StageFailure as exc:
            last = exc
            continue
        emb = TreeEmbedding(tree, f, G, L, R, trace)
        chk = verify_tree_embedding(G, tree, f, L, R, leaf_side if ell % 2 == 0 else None)
        if not chk:
            raise StageFailure("verify", chk.reason)
        return emb
    raise StageFailure("fp-embed", "no root admitted an embedding", detail=(last.detail if last else {}))


def _path_in_pair(G, V1, V2, min_len, rng, restarts, use_dfs=True):
    H, labels, n1 = bipartite_pair_graph(G, V1, V2)
    best = []
    if use_dfs:
        best = dfs_path_partition(H).path
    if len(best) - 1 < min_len:
        cand = longest_path_greedy(H, rng, restarts=restarts)
        if len(cand) > len(best):
            best = cand
    return [labels[i] for i in best]


class _Attach:
    """Search over attachment indices s and tree roots for the path-plus-two-trees layout."""

    def __init__(self, G, h, left, right, regions, rng, max_attempts):
        self.G, self.h = G, h
        self.L, self.R = left, right
        self.regions = regions  # ((A1, B1), (A2, B2)): side-0 and side-1 vertices for each tree
        self.rng = rng
        self.max_attempts = max_attempts
        self.attempts = 0
        self.rtree = make_rary(2, h)

    def side(self, v):
        return 0 if v in self.L else 1

    def tree_at(self, root, region, forbidden):
        f = fp_embed_tree(self.G, self.rtree, root, left=region[0], right=region[1], forbidden=forbidden,
                          rng=self.rng)
        return f

    def roots(self, u, region, forbidden):
        other = region[1] if self.side(u) == 0 else region[0]
        c = [w for w in self.G.adj[u] if w in other and w not in forbidden]
        c.sort(key=lambda w: (-sum(1 for z in self.G.adj[w] if z not in forbidden), w))
        return c

    def run(self, P0, q, parity):
        """Try s in the parity class in increasing order; return (s, w1, f1, w2, f2) or None."""
        Lp = len(P0) - 1
        for s in range(2 - parity, q, 2):
            if s < 1 or q - s < 1:
                continue
            u, v = P0[s - 1], P0[Lp - (q - s) + 1]
            sub = P0[s - 1:Lp - q + s + 2]
            forb = set(sub)
            r1 = self.roots(u, self.regions[0], forb)
            if not r1 or not self.roots(v, self.regions[1], forb):
                continue
            for w1 in r1[:3]:
                self.attempts += 1
                if self.attempts > self.max_attempts:
                    return None
                try:
                    f1 = self.tree_at(w1, self.regions[0], forb)
                except StageFailure:
                    continue
                taken = forb | set(f1.values())
                # ranked after the first tree is placed so its vertices are not offered again
                for w2 in self.roots(v, self.regions[1], taken)[:3]:
                    self.attempts += 1
                    try:
                        f2 = self.tree_at(w2, self.regions[1], taken)
                    except StageFailure:
                        continue
                    return s, sub, w1, f1, w2, f2
        return None


def _assemble(G, ell, h, sub, w1, f1, w2, f2, L, R, trace) -> TreeEmbedding:
    tree = make_trhl(TreeSpec(2, h, ell))
    mapping = {}
    # copy-1 abstract ids coincide with the standalone binary tree ids
    for x, v in f1.items():
        mapping[x] = v
    host_path = [w1] + list(sub) + [w2]
    for x, v in zip(tree.path, host_path):
        mapping[x] = v
    for x, v in f2.items():
        mapping[tree.root2 + x] = v
    return TreeEmbedding(tree, mapping, G, L, R, trace)


def embed_large_trhl(G: Graph, V1, V2, eps, m, ell: int, leaf_side: int | None = None, *, strategy: str = "auto",
                     rng=None, strict: bool = False, restarts: int = 6, max_attempts: int = 400,
                     forbidden=()) -> TreeEmbedding:
    """Embed T^(2,h)_l, h = ceil(log2(eps m)), as a long path with a binary tree at each end.

    ``strategy="proof"`` reserves four corner blocks of ceil(21 eps m)
    vertices, cleans them into expanders, takes the path P0 of length
    l - 4 + q (q = 4 ceil(eps m)) from the middle blocks and attaches the two
    trees inside the corners. ``strategy="greedy"`` skips the reservation:
    the path comes from the whole pair and the trees use whatever the
    chosen path window leaves free; q shrinks (staying even) if the path is
    short. ``"auto"`` tries the first and falls back to the second when the
    corner layout does not fit or fails. For even l all leaves are placed on
    ``leaf_side`` (0 = V1, 1 = V2).
    """
    gen = as_generator(rng)
    eps_f, m_f = as_fraction(eps), as_fraction(m)
    forb = set(forbidden)
    V1 = [v for v in sorted(set(V1)) if v not in forb]
    V2 = [v for v in sorted(set(V2)) if v not in forb]
    L, R = frozenset(V1), frozenset(V2)
    h = levels_for(eps_f, m_f, 2)
    q_full = 4 * math.ceil(eps_f * m_f)
    in_range = 1 <= ell <= 2 * (1 - 48 * eps_f) * m_f
    if strict and not in_range:
        raise ValueError(f"ell={ell} outside [1, 2(1-48 eps) m]")
    if ell % 2 == 0 and leaf_side is None:
        leaf_side = 0
    base = {"h": h, "q": q_full, "ell_in_range": in_range}
    if ell <= 2:
        return _embed_short(G, V1, V2, ell, h, leaf_side, gen, dict(base, strategy="whole"))
    errors = []
    if strategy in ("auto", "proof"):
        try:
            return _large_proof(G, V1, V2, eps_f, m_f, ell, h, q_full, leaf_side, gen, restarts, max_attempts,
                                dict(base, strategy="proof"))
        except StageFailure as exc:
            if strategy == "proof":
                raise
            errors.append(f"{exc.stage}: {exc.message}")
    if strategy in ("auto", "greedy"):
        return _large_greedy(G, V1, V2, ell, h, q_full, leaf_side, gen, restarts, max_attempts,
                             dict(base, strategy="greedy", fallback_from=errors))
    raise ValueError(f"unknown strategy {strategy}")


def _parity_for(P0, ell, h, leaf_side, L):
    """Index class (1 = odd, 0 = even) so that leaves land on leaf_side; odd l always uses odd."""
    if ell % 2 == 1:
        return 1
    j = 0 if P0[0] in L else 1
    # odd s keeps u_s on side j, so roots sit on 1 - j and leaves on 1 - j iff h is even
    odd_leaf = (1 - j) if h % 2 == 0 else j
    return 1 if odd_leaf == leaf_side else 0


def _orient(P0, ell, L):
    if ell % 2 == 1 and P0[0] not in L:
        return P0[::-1]
    return P0


def _finish(G, ell, h, res, L, R, leaf_side, trace):
    s, sub, w1, f1, w2, f2 = res
    trace["s"] = s
    emb = _assemble(G, ell, h, sub, w1, f1, w2, f2, L, R, trace)
    chk = verify_tree_embedding(G, emb.tree, emb.mapping, L, R, leaf_side if ell % 2 == 0 else None)
    if not chk:
        raise StageFailure("verify", chk.reason)
    return emb


def _large_proof(G, V1, V2, eps, m, ell, h, q, leaf_side, gen, restarts, max_attempts, trace):
    c = math.ceil(21 * eps * m)
    xs = math.floor((1 - 43 * eps) * m)
    if len(V1) < 2 * c + xs or len(V2) < 2 * c + xs or xs < 1:
        raise StageFailure("layout", "corner blocks and middle blocks do not fit in the pair")
    order1 = gen.permutation(V1).tolist()
    order2 = gen.permutation(V2).tolist()
    U11, U12 = order1[:c], order1[c:2 * c]
    U21, U22 = order2[:c], order2[c:2 * c]
    cp_a, cp_b = Fraction(1, 10), Fraction(9)
    W = {}
    for key, (A, B) in {1: (U11, U21), 2: (U12, U22)}.items():
        tr = cleanup_to_expander(G, A, B, eps, m, cp_a, cp_b, strict=False, verify_mode="sampled", budget=200, rng=gen)
        if tr.outcome == "eps_witness":
            raise StageFailure("corner-cleanup", "corner pair violates the eps-property", witness=tr.witness)
        if tr.outcome != "success":
            raise StageFailure("corner-cleanup", "corner cleanup did not produce an expander")
        W[key] = (tr.U1, tr.U2)
    used1 = set(W[1][0]) | set(W[2][0])
    used2 = set(W[1][1]) | set(W[2][1])
    X1 = [v for v in order1 if v not in used1][:xs]
    X2 = [v for v in order2 if v not in used2][:xs]
    need = ell - 4 + q
    P = _path_in_pair(G, X1, X2, need, gen, restarts)
    if len(P) - 1 < need:
        raise StageFailure("path", f"middle path {len(P) - 1} shorter than {need}")
    L, R = frozenset(V1), frozenset(V2)
    P0 = _orient(P[:need + 1], ell, L)
    trace.update({"corner_size": c, "middle_size": xs})
    regions = ((frozenset(W[1][0]), frozenset(W[1][1])), (frozenset(W[2][0]), frozenset(W[2][1])))
    att = _Attach(G, h, L, R, regions, gen, max_attempts)
    res = att.run(P0, q, _parity_for(P0, ell, h, leaf_side, L))
    if res is None:
        raise StageFailure("attach", "no attachment index admitted both corner trees")
    return _finish(G, ell, h, res, L, R, leaf_side, trace)


def _large_greedy(G, V1, V2, ell, h, q_full, leaf_side, gen, restarts, max_attempts, trace):
    L, R = frozenset(V1), frozenset(V2)
    P = _path_in_pair(G, V1, V2, ell - 4 + q_full, gen, restarts, use_dfs=False)
    avail = len(P) - 1
    if avail < ell - 2:
        raise StageFailure("path", f"longest path found {avail} < {ell - 2}")
    q = q_full
    while q > 2 and ell - 4 + q > avail:
        q -= 2
    trace["q_used"] = q
    need = ell - 4 + q
    region = (L, R)
    att = _Attach(G, h, L, R, (region, region), gen, max_attempts)
    # slide the window along the long path to vary the endpoints
    offsets = list(range(0, avail - need + 1, 2))
    step = max(1, len(offsets) // 8)
    for off in offsets[::step][:8]:
        P0 = _orient(P[off:off + need + 1], ell, L)
        res = att.run(P0, q, _parity_for(P0, ell, h, leaf_side, L))
        if res is not None:
            trace["offset"] = off
            trace["attempts"] = att.attempts
            return _finish(G, ell, h, res, L, R, leaf_side, trace)
        if att.attempts > max_attempts:
            break
    raise StageFailure("attach", "no attachment index admitted both trees", detail={"attempts": att.attempts})


def embed_trhl(G: Graph, V1, V2, spec: TreeSpec, *, leaf_side=None, rng=None, root_tries: int = 24,
               trace: dict | None = None) -> TreeEmbedding:
    """Whole-tree embedding of T^(r,h)_l for explicit (r, h, l), trying the best-connected roots first."""
    gen = as_generator(rng)
    tree = make_trhl(spec)
    L, R = frozenset(V1), frozenset(V2)
    side0 = _orient_root_side(leaf_side, spec.h)
    other = R if side0 == 0 else L
    roots = sorted((V1, V2)[side0], key=lambda v: (-sum(1 for w in G.adj[v] if w in other), v))
    for root in roots[:root_tries]:
        try:
            f = fp_embed_tree(G, tree.whole(), root, left=L, right=R, rng=gen)
        except StageFailure:
            continue
        chk = verify_tree_embedding(G, tree, f, L, R, leaf_side if spec.ell % 2 == 0 else None)
        if not chk:
            raise StageFailure("verify", chk.reason)
        return TreeEmbedding(tree, f, G, L, R, trace if trace is not None else {"strategy": "whole"})
    raise StageFailure("fp-embed", f"no root among {min(root_tries, len(roots))} admitted an embedding")


def _embed_short(G, V1, V2, ell, h, leaf_side, gen, trace):
    """l <= 2: embed the whole (small) tree greedily."""
    try:
        return embed_trhl(G, V1, V2, TreeSpec(2, h, ell), leaf_side=leaf_side, rng=gen, trace=trace)
    except StageFailure as exc:
        if exc.stage == "verify":
            raise
        raise StageFailure("fp-embed", "short tree could not be embedded") from None
