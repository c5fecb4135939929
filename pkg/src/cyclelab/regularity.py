"""Cluster partitions, p-densities, epsilon-property and regular-pair verdicts.

The two auxiliary graphs on cluster indices are built here: the
epsilon-graph S (pairs with the epsilon-property) and the reduced graph R
(regular pairs of p-density at least rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .extremal import as_fraction, comb2
from .graph import Graph, count_pair_edges
from .rng import as_generator
from .verdict import Verdict


@dataclass(frozen=True)
class ClusterPartition:
    k: int
    assignment: tuple
    clusters: tuple

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.clusters)

    @property
    def m(self) -> Fraction:
        return Fraction(self.n, self.k)

    @classmethod
    def from_clusters(cls, n: int, clusters) -> "ClusterPartition":
        assignment = [-1] * n
        cl = []
        for i, c in enumerate(clusters):
            c = tuple(sorted(int(v) for v in c))
            for v in c:
                if assignment[v] != -1:
                    raise ValueError(f"vertex {v} assigned twice")
                assignment[v] = i
            cl.append(c)
        if -1 in assignment:
            raise ValueError("every vertex must be assigned")
        return cls(len(cl), tuple(assignment), tuple(cl))


def equipartition(n: int, k: int, rng=None) -> ClusterPartition:
    """Uniformly random partition into k parts of sizes floor(n/k) or ceil(n/k)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    gen = as_generator(rng)
    perm = gen.permutation(n).tolist()
    q, r = divmod(n, k)
    clusters, pos = [], 0
    for i in range(k):
        size = q + (1 if i < r else 0)
        clusters.append(perm[pos:pos + size])
        pos += size
    return ClusterPartition.from_clusters(n, clusters)


def p_density(G: Graph, U, W, p) -> Fraction:
    p = as_fraction(p)
    U, W = set(U), set(W)
    if not U or not W:
        raise ValueError("both sides must be nonempty")
    if p <= 0:
        raise ValueError("p must be positive")
    return Fraction(count_pair_edges(G, U, W)) / (p * len(U) * len(W))


def threshold_size(eps, m) -> int:
    return max(1, math.ceil(as_fraction(eps) * as_fraction(m)))


def _nbr_masks(G: Graph, A, B):
    """Bitmask (over B's positions) of each A-vertex's neighbors in B."""
    pos = {v: i for i, v in enumerate(B)}
    out = []
    for a in A:
        mk = 0
        for w in G.adj[a]:
            j = pos.get(w)
            if j is not None:
                mk |= 1 << j
        out.append(mk)
    return out


def _bits_to(mask: int, labels, limit: int | None = None):
    out = []
    i = 0
    while mask and (limit is None or len(out) < limit):
        if mask & 1:
            out.append(labels[i])
        mask >>= 1
        i += 1
    return out


def check_eps_property(G: Graph, V1, V2, eps, m, mode: str = "auto", budget: int = 20_000,
                       rng=None) -> Verdict:
    """Every U1 in V1, U2 in V2 with |U1|, |U2| >= eps*m spans an edge.

    Only threshold-size subsets s = ceil(eps*m) matter. For a fixed U1 the
    best U2 is any s vertices outside its neighborhood, so exact mode
    enumerates s-subsets of one side only: C(|side|, s) <= budget.
    """
    V1, V2 = sorted(set(V1)), sorted(set(V2))
    if not set(V1).isdisjoint(V2):
        raise ValueError("sides must be disjoint")
    s = threshold_size(eps, m)
    if s > len(V1) or s > len(V2):
        return Verdict(True, "exact", 0, detail={"size": s, "vacuous": True})
    if math.comb(len(V2), s) < math.comb(len(V1), s):
        V1, V2, swapped = V2, V1, True
    else:
        swapped = False
    cost = math.comb(len(V1), s)
    if mode == "auto":
        mode = "exact" if cost <= budget else "sampled"

    def witness(U1, free):
        U2 = _bits_to(free, V2, s)
        return (U2, list(U1)) if swapped else (list(U1), U2)

    masks = _nbr_masks(G, V1, V2)
    full = (1 << len(V2)) - 1
    if mode == "exact":
        if cost > budget:
            raise ValueError(f"exact mode needs C({len(V1)}, {s}) = {cost} <= budget={budget}")
        checked = 0
        for idx in combinations(range(len(V1)), s):
            checked += 1
            nb = 0
            for i in idx:
                nb |= masks[i]
            free = full & ~nb
            if free.bit_count() >= s:
                return Verdict(False, "exact", checked, witness([V1[i] for i in idx], free), {"size": s})
        return Verdict(True, "exact", checked, detail={"size": s})
    if mode != "sampled":
        raise ValueError("mode must be exact, sampled or auto")
    gen = as_generator(rng)
    order = sorted(range(len(V1)), key=lambda i: (masks[i].bit_count(), i))
    # the lowest-degree vertices make the most promising first guess
    tries = [order[:s]]
    for it in range(budget):
        idx = tries.pop() if tries else gen.choice(len(V1), size=s, replace=False).tolist()
        nb = 0
        for i in idx:
            nb |= masks[i]
        free = full & ~nb
        if free.bit_count() >= s:
            return Verdict(False, "sampled", it + 1, witness([V1[i] for i in idx], free), {"size": s})
    return Verdict(True, "sampled", budget, detail={"size": s})


def check_eps_regular_pair(G: Graph, U, W, eps, p, mode: str = "auto", budget: int = 1 << 16,
                           rng=None) -> Verdict:
    """|d_p(U,W) - d_p(U',W')| <= eps for U' in U, W' in W with |U'| >= eps|U|, |W'| >= eps|W|.

    For a fixed U' and |W'| the density extremes come from the |W'| vertices
    of W with most (fewest) neighbors in U'. Exact mode enumerates all U' of
    the smaller side (2**|U| <= budget); sampled mode draws ``budget`` random
    U' and still optimizes W' exactly.
    """
    U, W = sorted(set(U)), sorted(set(W))
    if not U or not W:
        raise ValueError("both sides must be nonempty")
    if not set(U).isdisjoint(W):
        raise ValueError("sides must be disjoint")
    eps = as_fraction(eps)
    p = as_fraction(p)
    if len(W) < len(U):
        U, W = W, U
    nu, nw = len(U), len(W)
    A = np.zeros((nu, nw), dtype=np.int64)
    wpos = {v: j for j, v in enumerate(W)}
    for i, u in enumerate(U):
        for x in G.adj[u]:
            j = wpos.get(x)
            if j is not None:
                A[i, j] = 1
    e = int(A.sum())
    lo_u = max(1, math.ceil(eps * nu))
    lo_w = max(1, math.ceil(eps * nw))
    if mode == "auto":
        mode = "exact" if (1 << nu) <= budget else "sampled"
    if mode == "exact":
        if (1 << nu) > budget:
            raise ValueError(f"exact mode needs 2**{nu} <= budget={budget}")
        masks = np.arange(1 << nu, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(nu)) & 1).astype(np.int64)
    elif mode == "sampled":
        gen = as_generator(rng)
        sizes = gen.integers(lo_u, nu + 1, size=budget)
        bits = np.zeros((budget, nu), dtype=np.int64)
        for r, sz in enumerate(sizes):
            bits[r, gen.choice(nu, size=int(sz), replace=False)] = 1
    else:
        raise ValueError("mode must be exact, sampled or auto")
    usz = bits.sum(axis=1)
    keep = usz >= lo_u
    bits, usz = bits[keep], usz[keep]
    deg = bits @ A
    hi = np.cumsum(-np.sort(-deg, axis=1), axis=1)
    lo = np.cumsum(np.sort(deg, axis=1), axis=1)
    # violation: |e' nu nw - e u' w'| * Q * B > A_eps * P * u' w' nu nw
    P, Q = p.numerator, p.denominator
    Ae, Be = eps.numerator, eps.denominator
    checked = 0
    for w in range(lo_w, nw + 1):
        rhs = Ae * P * usz * w * nu * nw
        for arr, big in ((hi, True), (lo, False)):
            diff = np.abs(arr[:, w - 1] * nu * nw - e * usz * w) * Q * Be
            checked += len(usz)
            bad = np.flatnonzero(diff > rhs)
            if len(bad):
                r = int(bad[0])
                Us = [U[i] for i in range(nu) if bits[r, i]]
                order = sorted(range(nw), key=lambda j: (-deg[r, j], j) if big else (deg[r, j], j))
                Ws = sorted(W[j] for j in order[:w])
                sub = Fraction(count_pair_edges(G, Us, Ws)) / (p * len(Us) * len(Ws))
                whole = Fraction(e) / (p * nu * nw)
                return Verdict(False, mode, checked, (Us, Ws), {"density": whole, "sub_density": sub})
    return Verdict(True, mode, checked)


@dataclass
class EpsilonGraph:
    k: int
    edges: tuple
    epsilon: Fraction
    mode: str
    verdicts: dict = field(default_factory=dict, repr=False)

    def as_graph(self) -> Graph:
        return Graph(self.k, self.edges)


@dataclass
class ReducedGraph:
    k: int
    edges: tuple
    rho: Fraction
    epsilon: Fraction
    p: Fraction
    mode: str
    densities: dict = field(default_factory=dict, repr=False)
    verdicts: dict = field(default_factory=dict, repr=False)

    def as_graph(self) -> Graph:
        return Graph(self.k, self.edges)


def build_reduced_graph(G: Graph, part: ClusterPartition, rho=None, eps=Fraction(1, 10), p=None,
                        mode: str = "auto", budget: int = 1 << 12, rng=None) -> ReducedGraph:
    """R: pairs with p-density >= rho that pass the regularity verdict.

    ``mode="skip"`` keeps density-qualified pairs without a regularity test;
    their verdicts are recorded as unchecked.
    """
    eps = as_fraction(eps)
    rho = 10 * eps if rho is None else as_fraction(rho)
    if p is None:
        p = Fraction(G.m, comb2(G.n)) if G.n > 1 and G.m else Fraction(1)
    p = as_fraction(p)
    gen = as_generator(rng)
    edges, dens, verdicts = [], {}, {}
    sets = [set(c) for c in part.clusters]
    for i, j in combinations(range(part.k), 2):
        if not part.clusters[i] or not part.clusters[j]:
            continue
        d = Fraction(count_pair_edges(G, sets[i], sets[j])) / (p * len(sets[i]) * len(sets[j]))
        dens[(i, j)] = d
        if d < rho:
            continue
        if mode == "skip":
            verdicts[(i, j)] = Verdict(True, "unchecked", 0)
        else:
            verdicts[(i, j)] = check_eps_regular_pair(G, part.clusters[i], part.clusters[j], eps, p, mode, budget, gen)
        if verdicts[(i, j)].holds:
            edges.append((i, j))
    return ReducedGraph(part.k, tuple(edges), rho, eps, p, mode, dens, verdicts)


def build_epsilon_graph(G: Graph, part: ClusterPartition, eps, mode: str = "auto", budget: int = 20_000,
                        rng=None, reduced: ReducedGraph | None = None) -> EpsilonGraph:
    """S: cluster pairs with the epsilon-property.

    ``mode="derived-from-R"`` copies the edges of ``reduced`` without
    re-testing; this is sound only when rho > eps, which is enforced.
    """
    eps = as_fraction(eps)
    if mode == "derived-from-R":
        if reduced is None:
            raise ValueError("derived-from-R needs a reduced graph")
        if not reduced.rho > eps:
            raise ValueError("derived-from-R needs rho > eps")
        return EpsilonGraph(part.k, tuple(reduced.edges), eps, mode,
                            {e: Verdict(True, "derived-from-R", 0) for e in reduced.edges})
    gen = as_generator(rng)
    m = part.m
    edges, verdicts = [], {}
    for i, j in combinations(range(part.k), 2):
        v = check_eps_property(G, part.clusters[i], part.clusters[j], eps, m, mode, budget, gen)
        verdicts[(i, j)] = v
        if v.holds:
            edges.append((i, j))
    return EpsilonGraph(part.k, tuple(edges), eps, mode, verdicts)


def reduced_edge_bound_check(R, x, tau) -> bool:
    """e(R) >= (x + tau) * C(k, 2), exactly."""
    k = R.k if hasattr(R, "k") else R.n
    e = len(R.edges)
    return e >= (as_fraction(x) + as_fraction(tau)) * comb2(k)
