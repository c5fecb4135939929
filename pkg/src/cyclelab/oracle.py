"""Exact cycle spectra and longest paths for small graphs.

Two independent engines are provided: a bitmask DP over (subset, endpoint)
states and a plain recursive DFS. Tests cross-check one against the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, verify_cycle, verify_path

DP_CAP = 14
DFS_CAP = 12
WITNESS_CAP = 20


class OracleCapError(ValueError):
    pass


@dataclass(frozen=True)
class CycleSpectrum:
    present: frozenset
    longest_path: int

    @property
    def girth(self) -> int | None:
        return min(self.present) if self.present else None

    @property
    def longest_cycle(self) -> int:
        return max(self.present) if self.present else 0


def _masks(G: Graph) -> list[int]:
    out = []
    for v in range(G.n):
        m = 0
        for w in G.adj[v]:
            m |= 1 << w
        out.append(m)
    return out


def _popcount(x: int) -> int:
    return x.bit_count()


def _cycle_dp(G: Graph, want=None):
    """Yield ``(length, cycle)`` for every length the first time it is found.

    Cycles are enumerated with their smallest vertex ``s`` as the start, so
    the DP for ``s`` only touches vertices above ``s``.
    """
    n = G.n
    adj = _masks(G)
    found = set()
    for s in range(n):
        k = n - s - 1
        if k < 2:
            break
        ep = [0] * (1 << k)
        ep[0] = 1 << s
        base = s + 1
        close = adj[s]
        for sub in range(1, 1 << k):
            res = 0
            x = sub
            while x:
                low = x & -x
                prev = ep[sub ^ low]
                if prev:
                    v = base + low.bit_length() - 1
                    if prev & adj[v]:
                        res |= 1 << v
                x ^= low
            if not res:
                continue
            ep[sub] = res
            if res & close:
                L = _popcount(sub) + 1
                if L >= 3 and L not in found and (want is None or L in want):
                    found.add(L)
                    end = (res & close).bit_length() - 1
                    yield L, _walk_back(ep, adj, sub, end, s, base)
        if want is not None and want <= found:
            return


def _walk_back(ep, adj, sub, end, s, base):
    path = [end]
    cur = sub
    while cur:
        cur ^= 1 << (end - base)
        cand = ep[cur] & adj[end]
        end = cand.bit_length() - 1
        path.append(end)
    assert end == s
    path.reverse()
    return path


def _longest_path_dp(G: Graph) -> list[int]:
    n = G.n
    if n == 0:
        return []
    adj = _masks(G)
    full = 1 << n
    dp = [0] * full
    best_mask, best_end, best_len = 1, 0, 0
    for v in range(n):
        dp[1 << v] = 1 << v
    for mask in range(1, full):
        if dp[mask] and mask & (mask - 1) == 0:
            continue
        res = 0
        x = mask
        while x:
            low = x & -x
            prev = dp[mask ^ low]
            if prev:
                v = low.bit_length() - 1
                if prev & adj[v]:
                    res |= low
            x ^= low
        dp[mask] = res
        if res:
            L = _popcount(mask) - 1
            if L > best_len:
                best_len, best_mask, best_end = L, mask, res.bit_length() - 1
    path = [best_end]
    cur, end = best_mask, best_end
    while cur ^ (1 << end):
        cur ^= 1 << end
        end = (dp[cur] & adj[end]).bit_length() - 1
        path.append(end)
    return path[::-1]


def _cap(G: Graph, cap: int):
    if G.n > cap:
        raise OracleCapError(f"n={G.n} exceeds the oracle cap {cap}")


def cycle_spectrum_exact(G: Graph) -> CycleSpectrum:
    _cap(G, DP_CAP)
    present = frozenset(L for L, _ in _cycle_dp(G))
    return CycleSpectrum(present, max(len(_longest_path_dp(G)) - 1, 0))


def has_cycle_of_length(G: Graph, t: int) -> bool:
    _cap(G, DP_CAP)
    if t < 3 or t > G.n:
        return False
    return any(True for _ in _cycle_dp(G, {t}))


def longest_cycle_exact(G: Graph) -> int:
    return cycle_spectrum_exact(G).longest_cycle


def longest_path_exact(G: Graph) -> list[int]:
    """A longest path as a vertex list (single vertex for edgeless graphs)."""
    _cap(G, WITNESS_CAP)
    return _longest_path_dp(G)


def cycles_by_length(G: Graph, lengths=None) -> dict[int, list[int]]:
    """One witness cycle per achievable length (restricted to ``lengths``)."""
    _cap(G, WITNESS_CAP)
    want = None if lengths is None else set(lengths)
    out = {}
    for L, cyc in _cycle_dp(G, want):
        assert verify_cycle(G, cyc, L)
        out[L] = cyc
    return out


def cycle_spectrum_dfs(G: Graph) -> CycleSpectrum:
    """Second engine: recursive enumeration of simple paths with pruning."""
    _cap(G, DFS_CAP)
    n = G.n
    adj = G.adj
    present: set[int] = set()
    on = [False] * n

    for s in range(n):
        top = n - s
        if all(L in present for L in range(3, top + 1)):
            continue

        def grow(v, count):
            for w in adj[v]:
                if w == s:
                    if count >= 3:
                        present.add(count)
                elif w > s and not on[w]:
                    on[w] = True
                    grow(w, count + 1)
                    on[w] = False

        on[s] = True
        grow(s, 1)
        on[s] = False

    longest = 0

    def extend(v, length, seen):
        nonlocal longest
        if length > longest:
            longest = length
        if longest == n - 1:
            return
        # vertices still reachable bound the best continuation
        stack, reach = [v], {v}
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in reach and w not in seen:
                    reach.add(w)
                    stack.append(w)
        if length + len(reach) - 1 <= longest:
            return
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                extend(w, length + 1, seen)
                seen.discard(w)
                if longest == n - 1:
                    return

    for s in range(n):
        extend(s, 0, {s})
        if longest == n - 1:
            break
    return CycleSpectrum(frozenset(present), longest)


@dataclass
class ExCheck:
    n: int
    t: int
    construction: str
    edges: int
    formula_edges: int
    matches_formula: bool
    forbidden_free: bool
    greedy_best: int
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.forbidden_free and self.greedy_best <= max(self.edges, self.formula_edges)


def ex_check_small(n: int, t: int, trials: int = 5, seed: int = 0) -> ExCheck:
    """Certify the extremal constructions for (n, t) with n <= 10.

    The construction for the regime is built and checked against the oracle.
    A few randomized greedy maximal C_t-free graphs are grown as a sanity
    probe; none of them may beat the construction where it is known to be
    extremal. This certifies the constructions only, not ex(n, C_t) itself.
    """
    from . import extremal

    if n > 10:
        raise OracleCapError("ex_check_small is capped at n <= 10")
    if not 3 <= t <= n:
        raise ValueError("need 3 <= t <= n")
    notes = []
    if 2 * t >= n + 3:
        H = extremal.build_woodall_graph(n, t)
        name = "woodall"
        formula = extremal.comb2(t - 1) + extremal.comb2(n - t + 2)
        spec = cycle_spectrum_exact(H)
        free = all(L < t for L in spec.present)
    elif t % 2 == 1:
        H = extremal.build_bipartite_extremal(n)
        name = "bipartite"
        formula = n * n // 4
        free = not any(L % 2 for L in cycle_spectrum_exact(H).present)
    else:
        H = extremal.build_clique_blocks(n, t)
        name = "clique-blocks"
        formula = extremal.eg_path_bound(t, n)
        free = cycle_spectrum_exact(H).longest_path < t
        notes.append("even t below the Woodall range: checks P_t-freeness of the path construction")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    best = 0
    if name != "clique-blocks":
        for _ in range(trials):
            order = rng.permutation(len(pairs))
            kept = []
            for idx in order:
                cand = Graph(n, kept + [pairs[idx]])
                if not has_cycle_of_length(cand, t):
                    kept.append(pairs[idx])
            best = max(best, len(kept))
    return ExCheck(n, t, name, H.m, formula, H.m == formula, free, best, notes)


def certify_path(G: Graph, path) -> int:
    chk = verify_path(G, path)
    if not chk:
        raise AssertionError(chk.reason)
    return chk.length
