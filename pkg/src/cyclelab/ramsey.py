"""Edge colorings and odd-cycle tools: bipartiteness, shortest and long odd cycles, Menger paths, blocks."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .expander import longest_path_greedy
from .extremal import as_fraction
from .graph import Graph, induced_subgraph, verify_cycle
from .rng import as_generator


@dataclass(frozen=True)
class EdgeColoring:
    """``colors[i]`` is the color (0..r-1) of ``G.edges[i]``."""

    r: int
    colors: tuple

    def class_sizes(self) -> list:
        out = [0] * self.r
        for c in self.colors:
            out[c] += 1
        return out


def color_random(G: Graph, r: int, rng=None) -> EdgeColoring:
    if r < 1:
        raise ValueError("need r >= 1")
    gen = as_generator(rng)
    return EdgeColoring(r, tuple(int(c) for c in gen.integers(0, r, size=G.m)))


def color_by_cut(G: Graph, side) -> EdgeColoring:
    """Two colors: 0 on edges crossing ``side`` / complement, 1 inside either part."""
    S = set(side)
    return EdgeColoring(2, tuple(0 if (a in S) != (b in S) else 1 for a, b in G.edges))


def color_class(G: Graph, coloring: EdgeColoring, i: int) -> Graph:
    if len(coloring.colors) != G.m:
        raise ValueError("coloring does not match the graph")
    return Graph.from_sorted_edges(G.n, [e for e, c in zip(G.edges, coloring.colors) if c == i])


@dataclass
class Bipartition:
    """Falsy when the graph is not bipartite; then ``odd_cycle`` is a verified odd cycle."""

    bipartite: bool
    sides: tuple | None = None
    odd_cycle: list | None = None

    def __bool__(self) -> bool:
        return self.bipartite


def is_bipartite(G: Graph) -> Bipartition:
    n = G.n
    color = [-1] * n
    parent = [-1] * n
    depth = [0] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in G.adj[v]:
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    dq.append(w)
                elif color[w] == color[v]:
                    cyc = _tree_cycle(v, w, parent, depth)
                    assert verify_cycle(G, cyc)
                    return Bipartition(False, None, cyc)
    left = tuple(v for v in range(n) if color[v] == 0)
    right = tuple(v for v in range(n) if color[v] == 1)
    return Bipartition(True, (left, right), None)


def _tree_cycle(u, v, parent, depth):
    """Cycle closed by the non-tree edge uv through the BFS tree."""
    a, b = [u], [v]
    while depth[a[-1]] > depth[b[-1]]:
        a.append(parent[a[-1]])
    while depth[b[-1]] > depth[a[-1]]:
        b.append(parent[b[-1]])
    while a[-1] != b[-1]:
        a.append(parent[a[-1]])
        b.append(parent[b[-1]])
    return a + b[-2::-1]


def shortest_odd_cycle(G: Graph) -> list | None:
    """Exact: BFS from (s, 0) in the bipartite double cover, shortest return to (s, 1), minimized over s."""
    n = G.n
    best_len, best_s, best_par = None, None, None
    for s in range(n):
        if not G.adj[s]:
            continue
        dist = {(s, 0): 0}
        par = {}
        dq = deque([(s, 0)])
        found = None
        while dq:
            v, p = dq.popleft()
            d = dist[(v, p)]
            if best_len is not None and d + 1 >= best_len:
                break
            for w in G.adj[v]:
                st = (w, 1 - p)
                if st not in dist:
                    dist[st] = d + 1
                    par[st] = (v, p)
                    if st == (s, 1):
                        found = d + 1
                        break
                    dq.append(st)
            if found is not None:
                break
        if found is not None and (best_len is None or found < best_len):
            best_len, best_s, best_par = found, s, par
            if best_len == 3:
                break
    if best_len is None:
        return None
    walk = []
    st = (best_s, 1)
    while st != (best_s, 0):
        walk.append(st[0])
        st = best_par[st]
    cyc = walk[::-1]
    assert verify_cycle(G, cyc, best_len)
    return cyc


@dataclass
class DisjointPaths:
    """Either ``count`` vertex-disjoint A-B paths or a vertex cut of size < count separating A from B."""

    paths: list | None
    cut: list | None

    def __bool__(self) -> bool:
        return self.paths is not None


def _unit_flow(G: Graph, A, B, count: int, term_cap: int):
    """Vertex-split network; vertices of A and B carry ``term_cap`` units, the rest one."""
    n = G.n
    # node ids: v_in = 2v, v_out = 2v+1, source = 2n, sink = 2n+1
    src, snk = 2 * n, 2 * n + 1
    cap: dict = {}
    graph = [[] for _ in range(2 * n + 2)]

    def add(u, v, c):
        if (u, v) not in cap:
            graph[u].append(v)
            graph[v].append(u)
            cap.setdefault((v, u), 0)
        cap[(u, v)] = cap.get((u, v), 0) + c

    for v in range(n):
        add(2 * v, 2 * v + 1, term_cap if (v in A or v in B) else 1)
        for w in G.adj[v]:
            add(2 * v + 1, 2 * w, count)
    for a in sorted(A):
        add(src, 2 * a, term_cap)
    for b in sorted(B):
        add(2 * b + 1, snk, term_cap)
    flow = 0
    while flow < count:
        prev = {src: None}
        dq = deque([src])
        while dq and snk not in prev:
            u = dq.popleft()
            for v in graph[u]:
                if v not in prev and cap[(u, v)] > 0:
                    prev[v] = u
                    dq.append(v)
        if snk not in prev:
            break
        v = snk
        while prev[v] is not None:
            u = prev[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1
    reach = {src}
    if flow < count:
        dq = deque([src])
        while dq:
            u = dq.popleft()
            for v in graph[u]:
                if v not in reach and cap[(u, v)] > 0:
                    reach.add(v)
                    dq.append(v)
    return flow, cap, reach


def _vertex_cut(n: int, A, B, reach) -> list:
    """Vertices whose split arc, or source/sink arc for terminals, leaves the residual-reachable side."""
    cut = {v for v in range(n) if 2 * v in reach and 2 * v + 1 not in reach}
    cut.update(a for a in A if 2 * a not in reach)
    cut.update(b for b in B if 2 * b + 1 in reach)
    return sorted(cut)


def disjoint_paths(G: Graph, A, B, count: int, internal: bool = False) -> DisjointPaths:
    """Vertex-capacity max-flow (BFS augmentation) with path trimming.

    By default every vertex, endpoints included, carries one unit, so the
    paths are fully vertex-disjoint. With ``internal=True`` the vertices of
    A and B may be shared and only interior vertices are exclusive, which is
    the form that makes sense for singleton A or B. Returned paths meet A
    only at their first vertex and B only at their last. When the flow falls
    short, a separator avoiding A and B is preferred if one of the same size
    exists.
    """
    A, B = set(A), set(B)
    if A & B:
        raise ValueError("A and B must be disjoint")
    n = G.n
    flow, cap, reach = _unit_flow(G, A, B, count, count if internal else 1)
    if flow < count:
        cut = _vertex_cut(n, A, B, reach)
        if not internal:
            f2, _, reach2 = _unit_flow(G, A, B, count, count)
            if f2 == flow:
                cut = _vertex_cut(n, A, B, reach2)
        return DisjointPaths(None, cut)
    return DisjointPaths(_decompose(G, A, B, cap, count), None)


def _decompose(G: Graph, A, B, cap, count: int) -> list:
    """Split the flow into A-B paths, consuming each edge arc's flow as it is walked."""
    n = G.n
    src = 2 * n
    used = {}
    for v in range(n):
        for w in G.adj[v]:
            # the reverse residual of an edge arc counts the flow it carries
            f = cap[(2 * w, 2 * v + 1)]
            if f > 0:
                used[(v, w)] = f
    paths = []
    for a in sorted(A):
        units = cap[(2 * a, src)]
        for _ in range(units):
            path, pos, v = [a], {a: 0}, a
            while v not in B:
                nxt = next(w for w in G.adj[v] if used.get((v, w), 0) > 0)
                used[(v, nxt)] -= 1
                if nxt in pos:
                    # drop a circulation picked up on the way
                    for x in path[pos[nxt] + 1:]:
                        del pos[x]
                    path = path[:pos[nxt] + 1]
                else:
                    pos[nxt] = len(path)
                    path.append(nxt)
                v = nxt
            paths.append(_trim(path, A, B))
            if len(paths) == count:
                return paths
    return paths


def _trim(path, A, B):
    last_a = max(i for i, v in enumerate(path) if v in A)
    first_b = next(i for i in range(last_a, len(path)) if path[i] in B)
    return path[last_a:first_b + 1]


def verify_disjoint_paths(G: Graph, A, B, paths, internal: bool = False) -> bool:
    A, B = set(A), set(B)
    seen = set()
    for p in paths:
        if not p or p[0] not in A or p[-1] not in B:
            return False
        if any(v in A or v in B for v in p[1:-1]):
            return False
        for u, v in zip(p, p[1:]):
            if not G.has_edge(u, v):
                return False
        inner = set(p) if not internal else set(p[1:-1])
        if len(set(p)) != len(p) or seen & inner:
            return False
        seen |= inner
    return True


def verify_separator(G: Graph, A, B, cut) -> bool:
    """No path from A \\ cut to B \\ cut avoiding ``cut``."""
    C = set(cut)
    B = set(B) - C
    start = [a for a in A if a not in C]
    seen = set(start)
    dq = deque(start)
    while dq:
        v = dq.popleft()
        if v in B:
            return False
        for w in G.adj[v]:
            if w not in seen and w not in C:
                seen.add(w)
                dq.append(w)
    return True


@dataclass
class BlockCutTree:
    blocks: list
    cut_vertices: list
    incidence: list  # (block index, cut vertex)

    def size_sum(self) -> int:
        return sum(len(b) for b in self.blocks)

    def is_forest(self) -> bool:
        nodes = len(self.blocks) + len(self.cut_vertices)
        idx = {c: len(self.blocks) + i for i, c in enumerate(self.cut_vertices)}
        parent = list(range(nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for bi, c in self.incidence:
            a, b = find(bi), find(idx[c])
            if a == b:
                return False
            parent[a] = b
        return True


def block_cut_tree(G: Graph) -> BlockCutTree:
    """Blocks (2-connected pieces, bridges, isolated vertices) and cut vertices, iterative lowpoint DFS."""
    n = G.n
    disc = [-1] * n
    low = [0] * n
    timer = 0
    blocks, cuts = [], set()
    for root in range(n):
        if disc[root] >= 0:
            continue
        if not G.adj[root]:
            disc[root] = timer
            timer += 1
            blocks.append(frozenset([root]))
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, 0)]
        estack = []
        root_children = 0
        while stack:
            v, p, i = stack[-1]
            if i < len(G.adj[v]):
                stack[-1] = (v, p, i + 1)
                w = G.adj[v][i]
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append((v, w))
                    stack.append((w, v, 0))
                    if v == root:
                        root_children += 1
                elif w != p and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if p >= 0:
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        comp = set()
                        while True:
                            e = estack.pop()
                            comp.update(e)
                            if e == (p, v):
                                break
                        blocks.append(frozenset(comp))
                        if p != root:
                            cuts.add(p)
        if root_children > 1:
            cuts.add(root)
    cut_list = sorted(cuts)
    inc = [(bi, c) for bi, b in enumerate(blocks) for c in cut_list if c in b]
    return BlockCutTree(blocks, cut_list, inc)


def _bfs_dist(G: Graph, s: int) -> list:
    dist = [-1] * G.n
    dist[s] = 0
    dq = deque([s])
    while dq:
        v = dq.popleft()
        for w in G.adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                dq.append(w)
    return dist


def _bfs_path(G: Graph, s: int, t: int, blocked=frozenset()):
    prev = {s: None}
    dq = deque([s])
    while dq:
        v = dq.popleft()
        if v == t:
            break
        for w in G.adj[v]:
            if w not in prev and w not in blocked:
                prev[w] = v
                dq.append(w)
    if t not in prev:
        return None
    out = [t]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


def diameter_bound(k: int, min_deg: int) -> int:
    return math.ceil(Fraction(3 * k, min_deg + 1)) - 1


def diameter_check(G: Graph) -> tuple:
    """(diameter, bound ceil(3k/(delta+1)) - 1, diameter <= bound) for connected G with min degree >= 2."""
    k = G.n
    if k == 0:
        raise ValueError("empty graph")
    dmin = min(G.degree(v) for v in range(k))
    if dmin < 2:
        raise ValueError("minimum degree must be at least 2")
    diam = 0
    for s in range(k):
        dist = _bfs_dist(G, s)
        if min(dist) < 0:
            raise ValueError("graph is disconnected")
        diam = max(diam, max(dist))
    bound = diameter_bound(k, dmin)
    return diam, bound, diam <= bound


def _cycle_from_path(G: Graph, path):
    """Longest cycle closed by a chord of the path: P[i..j] for an edge P[i]P[j] with j > i + 1."""
    pos = {v: i for i, v in enumerate(path)}
    best = None
    for i, v in enumerate(path):
        j = max((pos[w] for w in G.adj[v] if w in pos), default=-1)
        if j > i + 1 and (best is None or j - i + 1 > len(best)):
            best = path[i:j + 1]
    return best


def _odd_from_even(G: Graph, cyc):
    """Chord parity fix: a chord spanning an even arc a of an even cycle closes an odd cycle of length |C|-a+1."""
    L = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    best = None
    for i, v in enumerate(cyc):
        for w in G.adj[v]:
            j = pos.get(w)
            if j is None or j <= i:
                continue
            a = j - i
            if a < 2 or a > L - 2:
                continue
            # arc i..j has length a; the other arc has length L - a
            if a % 2 == 0:
                cand = cyc[j:] + cyc[:i + 1]
            else:
                continue
            if best is None or len(cand) > len(best):
                best = cand
    return best


def _long_cycle(G: Graph, rng, restarts: int = 6):
    if G.m == 0:
        return None
    path = longest_path_greedy(G, rng, restarts=restarts)
    return _cycle_from_path(G, path) if len(path) >= 3 else None


def _arc(cyc, i, j):
    """Vertices of cyc walking forward from index i to index j."""
    L = len(cyc)
    out = [cyc[i]]
    while i != j:
        i = (i + 1) % L
        out.append(cyc[i])
    return out


@dataclass
class OddCycleResult:
    cycle: list
    trace: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.cycle)


def long_odd_cycle(G: Graph, delta=Fraction(1, 10), rng=None, restarts: int = 6, slack: int = 120) -> OddCycleResult:
    """Long odd cycle in three steps plus two direct candidates; every cycle in the trace is verified.

    Step I takes a shortest odd cycle C0. Step II grows a path of about
    delta*k/2 from an edge uv of C0 outside C0, returns to u by a shortest
    path and closes through C0 with the arc of the right parity (C1).
    Step III finds a long cycle C2 away from C1; an even C2 is joined to C1
    by two disjoint paths whose ends on C2 are closest, and the long arc of
    C2 plus the odd-fixing arc of C1 closes the cycle. A greedy long cycle of
    G and its chord parity fix compete as extra candidates.
    """
    gen = as_generator(rng)
    bp = is_bipartite(G)
    if bp:
        raise ValueError("graph is bipartite: no odd cycle")
    k = G.n
    delta = as_fraction(delta)
    trace: dict = {"k": k}
    cands = []
    C0 = shortest_odd_cycle(G)
    trace["step1"] = {"length": len(C0), "cycle": C0}
    cands.append(C0)
    # Step II
    C1 = C0
    target = max(1, math.ceil(delta * k / 2))
    step2 = None
    L0 = len(C0)
    for e in range(L0):
        for u, v in ((C0[e], C0[(e + 1) % L0]), (C0[(e + 1) % L0], C0[e])):
            cyc = _step_two(G, C0, u, v, target, gen)
            if cyc is not None and (step2 is None or len(cyc) > len(step2)):
                step2 = cyc
        if step2 is not None and len(step2) > target:
            break
    if step2 is not None:
        C1 = step2
        trace["step2"] = {"length": len(C1), "target": target, "in_window": target <= len(C1) <= target + slack,
                          "cycle": C1}
        cands.append(C1)
    else:
        trace["step2"] = {"failed": "no return path closes a longer odd cycle", "target": target}
    # Step III
    rest = [x for x in range(k) if x not in set(C1)]
    Hs, lab_s = induced_subgraph(G, rest)
    C2s = _long_cycle(Hs, gen, restarts)
    if C2s is None:
        trace["step3"] = {"failed": "no cycle outside C1"}
    else:
        C2 = [lab_s[i] for i in C2s]
        trace["step3"] = {"c2_length": len(C2)}
        if len(C2) % 2 == 1:
            cands.append(C2)
            trace["step3"]["cycle"] = C2
        else:
            res = disjoint_paths(G, C1, C2, min(len(C1), len(C2)))
            if not res:
                res = disjoint_paths(G, C1, C2, 2)
            if not res:
                trace["step3"]["failed"] = "fewer than two disjoint paths"
                trace["step3"]["cut"] = res.cut
            else:
                cyc = _menger_close(G, C1, C2, res.paths)
                trace["step3"]["cycle"] = cyc
                if cyc is not None:
                    cands.append(cyc)
    # direct candidates
    D = _long_cycle(G, gen, restarts)
    if D is not None:
        if len(D) % 2 == 1:
            cands.append(D)
        else:
            fix = _odd_from_even(G, D)
            if fix is not None:
                cands.append(fix)
        trace["direct"] = {"length": len(D)}
    good = [c for c in cands if c and len(c) % 2 == 1 and verify_cycle(G, c)]
    best = max(good, key=len)
    trace["best"] = len(best)
    return OddCycleResult(best, trace)


def _step_two(G, C0, u, v, target, gen, tries: int = 24):
    """Path from v of length <= target avoiding C0 - {v}, back to u by a shortest path, closed through C0."""
    L0 = len(C0)
    iu, iv = C0.index(u), C0.index(v)
    inner = set(C0) - {u, v}
    keep = [x for x in range(G.n) if x not in inner and x != u]
    H, lab = induced_subgraph(G, keep)
    pos = {x: i for i, x in enumerate(lab)}
    P = longest_path_greedy(H, gen, restarts=1, start=pos[v])
    # both ends get extended, so v may sit inside; keep its longer side
    i = P.index(pos[v])
    P = P[i:] if len(P) - i >= i + 1 else P[i::-1]
    P = [lab[i] for i in P[:target + 1]]
    # arc of C0 from v round to u avoiding the edge uv
    step = 1 if (iv - iu) % L0 == 1 else -1
    arc = [C0[(iv + step * i) % L0] for i in range(L0)]
    for j in range(len(P) - 1, 0, -max(1, (len(P) - 1) // tries)):
        w = P[j]
        back = _bfs_path(G, w, u, frozenset(set(P[:j]) | inner))
        if back is None:
            continue
        route = P[:j + 1] + back[1:]  # v ... w ... u
        if (len(route) - 1) % 2 == 0:
            cyc = route
        else:
            cyc = route + arc[1:-1][::-1]
        if len(cyc) % 2 == 1 and verify_cycle(G, cyc):
            return cyc
    return None


def _menger_close(G, C1, C2, paths):
    """Join odd C1 and even C2 by the two paths whose C2 ends are closest; close through C1 with the odd-fixing arc."""
    p1 = {v: i for i, v in enumerate(C1)}
    p2 = {v: i for i, v in enumerate(C2)}
    L2 = len(C2)
    best = None
    for a in range(len(paths)):
        for b in range(a + 1, len(paths)):
            i, j = p2[paths[a][-1]], p2[paths[b][-1]]
            d = min((i - j) % L2, (j - i) % L2)
            if best is None or d < best[0]:
                best = (d, a, b)
    if best is None:
        return None
    _, a, b = best
    P1, P2 = paths[a], paths[b]
    i, j = p2[P1[-1]], p2[P2[-1]]
    # long arc of C2 from u1 to u2
    fwd = _arc(C2, i, j)
    bwd = _arc(C2, j, i)[::-1]
    P3 = fwd if len(fwd) >= len(bwd) else bwd
    body = P1 + P3[1:] + P2[::-1][1:]  # v1 ... u1 ... u2 ... v2
    x, y = p1[P2[0]], p1[P1[0]]
    options = [_arc(C1, x, y), _arc(C1, y, x)[::-1]]  # both run v2 -> v1
    L1 = len(C1)
    odd = []
    for arc in options:
        cyc = body + arc[1:-1]
        if len(cyc) % 2 == 1:
            odd.append(cyc)
    if not odd:
        return None
    cyc = min(odd, key=len) if len(odd) > 1 else odd[0]
    return cyc if verify_cycle(G, cyc) else None


def _maxcut_deficiency(G: Graph, rng, rounds: int = 3) -> int:
    """Edges left inside the sides by a greedy local-search cut: an upper bound on the distance to bipartite."""
    n = G.n
    if G.m == 0:
        return 0
    gen = as_generator(rng)
    best = None
    for rd in range(rounds):
        side = [0] * n
        seen = [False] * n
        order = gen.permutation(n).tolist()
        for s in order:
            if seen[s]:
                continue
            seen[s] = True
            dq = deque([s])
            while dq:
                x = dq.popleft()
                for y in G.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        side[y] = 1 - side[x]
                        dq.append(y)
        improved = True
        while improved:
            improved = False
            for x in order:
                same = sum(1 for y in G.adj[x] if side[y] == side[x])
                if 2 * same > len(G.adj[x]):
                    side[x] = 1 - side[x]
                    improved = True
        inside = sum(1 for a, b in G.edges if side[a] == side[b])
        best = inside if best is None else min(best, inside)
    return best


@dataclass
class MonoOddResult:
    color: int | None
    cycle: list | None
    bound: Fraction
    trace: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return 0 if self.cycle is None else len(self.cycle)

    def __bool__(self) -> bool:
        return self.cycle is not None


def monochromatic_odd_cycle(G: Graph, coloring: EdgeColoring, eps=None, rng=None) -> MonoOddResult:
    """Long monochromatic odd cycle: most non-bipartite color, then its most non-bipartite block.

    Far-ness from bipartite is estimated from above by a local-search cut.
    A block B is preferred when its estimate reaches (eps/3) k |B|;
    otherwise the block with the largest estimate per vertex is used.
    """
    r, k = coloring.r, G.n
    eps = Fraction(1, r * 2 ** (r + 2)) if eps is None else as_fraction(eps)
    bound = Fraction(k, r * 2 ** (r + 4))
    gen = as_generator(rng)
    trace: dict = {"eps": str(eps), "classes": []}
    best_color, best_def = None, -1
    classes = []
    for i in range(r):
        Gi = color_class(G, coloring, i)
        classes.append(Gi)
        bi = is_bipartite(Gi)
        d = 0 if bi else _maxcut_deficiency(Gi, gen)
        trace["classes"].append({"color": i, "edges": Gi.m, "bipartite": bool(bi), "deficiency": d,
                                 "eps_far_estimate": d >= eps * k * k})
        if not bi and d > best_def:
            best_color, best_def = i, d
    if best_color is None:
        trace["outcome"] = "all color classes bipartite"
        return MonoOddResult(None, None, bound, trace)
    Gi = classes[best_color]
    bct = block_cut_tree(Gi)
    chosen, chosen_score = None, None
    for B in bct.blocks:
        if len(B) < 3:
            continue
        H, lab = induced_subgraph(Gi, sorted(B))
        if is_bipartite(H):
            continue
        d = _maxcut_deficiency(H, gen)
        rule = d >= eps / 3 * k * len(B)
        score = (rule, Fraction(d, len(B)), len(B))
        if chosen_score is None or score > chosen_score:
            chosen, chosen_score = (H, lab), score
    trace["blocks"] = len(bct.blocks)
    H, lab = chosen
    trace["block_size"] = len(lab)
    trace["block_rule_met"] = bool(chosen_score[0])
    res = long_odd_cycle(H, rng=gen)
    cyc = [lab[x] for x in res.cycle]
    assert verify_cycle(Gi, cyc)
    trace["long_odd_cycle"] = {kk: vv for kk, vv in res.trace.items() if kk != "k"}
    trace["bound_met"] = len(cyc) >= bound
    trace["outcome"] = "cycle"
    return MonoOddResult(best_color, cyc, bound, trace)
