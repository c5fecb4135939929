"""Cycles of an exact length from a path or odd cycle of well-connected cluster pairs.

A plan fixes, for every cluster pair it uses, a double-rooted tree
T^(r,h)_l and the order in which the trees are chained. The leaf sets of
consecutive trees are joined by single edges; the route is closed either by
one more edge (even lengths) or through a single vertex of a spare cluster
(odd lengths). Every returned cycle has been verified against the host graph.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .embedder import embed_large_trhl, embed_small_trhl, levels_for, small_tree_arity
from .extremal import as_fraction, comb2, g_function
from .graph import CycleCertificate, Graph, certify_cycle
from .oracle import cycles_by_length, longest_path_exact
from .regularity import ClusterPartition, build_epsilon_graph, build_reduced_graph, equipartition
from .rng import RngStream
from .verdict import BudgetExceeded, StageFailure

C1_DEFAULT = 2.5
C2_DEFAULT = Fraction(48, 10000)
RETRY_BUDGET = 5


def default_gamma(eps, k: int) -> Fraction:
    """2(1 - 48 eps)/k, or 2/k when that falls outside (0, 1)."""
    g = 2 * (1 - 48 * as_fraction(eps)) / k
    return g if 0 < g < 1 else Fraction(2, k) if k > 2 else Fraction(1, 2)


def floor_odd(x) -> int:
    """The odd integer y with y <= x < y + 2."""
    y = math.floor(as_fraction(x))
    return y if y % 2 else y - 1


@dataclass(frozen=True)
class CycleRequest:
    t: int
    n: int
    gamma: Fraction

    def __post_init__(self):
        if self.t < 3:
            raise ValueError("t must be at least 3")

    @property
    def parity(self) -> str:
        return "even" if self.t % 2 == 0 else "odd"

    @property
    def case(self) -> int:
        """1: even, t < gamma n; 2: even below (n+3)/2; 3: odd below (n+3)/2; 4: t >= (n+3)/2."""
        if 2 * self.t >= self.n + 3:
            return 4
        if self.t % 2:
            return 3
        return 1 if self.t < self.gamma * self.n else 2


@dataclass(frozen=True)
class Piece:
    """One tree T^(r,h)_l in the pair (clusters[0], clusters[1]).

    ``half`` is None for whole clusters and 0/1 for the first/second halves.
    The route enters the tree through the leaves lying in cluster ``entry``
    and leaves it through those in cluster ``exit``.
    """

    clusters: tuple
    half: int | None
    r: int
    h: int
    ell: int
    entry: int
    exit: int
    large: bool


@dataclass
class StitchPlan:
    item: int
    branch: str
    t: int
    b: int
    h: int
    r: int
    eps: Fraction
    m: Fraction
    structure: tuple
    pieces: tuple
    closing: str  # "edge" or "vertex"
    closing_cluster: int | None = None
    flags: list = field(default_factory=list)

    @property
    def connectors(self) -> int:
        return len(self.pieces) if self.closing == "edge" else len(self.pieces) - 1

    def total(self) -> int:
        """Planned cycle length: tree paths, joining edges and the closing vertex's two edges."""
        s = sum(p.ell + 2 * p.h for p in self.pieces) + self.connectors
        return s + (2 if self.closing == "vertex" else 0)

    def to_json(self) -> dict:
        return {"item": self.item, "branch": self.branch, "t": self.t, "b": self.b, "h": self.h, "r": self.r,
                "eps": str(self.eps), "m": str(self.m), "structure": list(self.structure),
                "pieces": [asdict(p) for p in self.pieces], "closing": self.closing,
                "closing_cluster": self.closing_cluster, "flags": list(self.flags)}


def key_lemma_window(item: int, b: int, eps, m, k: int, C1: float = C1_DEFAULT) -> tuple:
    """Length window (low, high) covered by a path (item 1) or odd cycle (item 2) of length b in S."""
    eps, m = as_fraction(eps), as_fraction(m)
    n = m * k
    a = Fraction(b + 1, k) if item == 1 else Fraction(b, k)
    scale = 1 if item == 1 else Fraction(b - 1, 2)
    low = float(scale) * C1 / math.log(1 / float(eps)) * math.log(float(n))
    high = (1 - 48 * eps) * a * n
    return low, high


def _split_even(total: int) -> tuple:
    """Two even numbers summing to ``total`` that differ by at most 2."""
    half = total // 2
    if half % 2 == 0:
        return half, half
    return half + 1, half - 1


def _regime(t: int, eps, m):
    """(r, h, large) for the tree family: small trees when t <= 2 eps m and the arity allows."""
    eps, m = as_fraction(eps), as_fraction(m)
    r = small_tree_arity(eps)
    if t <= 2 * eps * m and r >= 2:
        return r, levels_for(eps, m, r), False
    return 2, levels_for(eps, m, 2), True


def _window_flags(item, b, t, eps, m, k, C1, strict):
    low, high = key_lemma_window(item, b, eps, m, k, C1)
    flags = []
    if t < low:
        flags.append(f"t below the window low {low:.2f}")
    if t > high:
        flags.append(f"t above the window high {float(high):.2f}")
    if flags and strict:
        raise ValueError("; ".join(flags))
    return flags


def plan_even_cycle(S_path, t: int, eps, m, k: int, *, C1: float = C1_DEFAULT, strict: bool = False) -> StitchPlan:
    """Plan an even cycle of length t from a cluster path of odd length b = len(S_path) - 1."""
    path = tuple(S_path)
    b = len(path) - 1
    if b < 1 or b % 2 == 0:
        raise ValueError(f"the cluster path must have odd length, got {b}")
    if t % 2:
        raise ValueError("item 1 plans even lengths only")
    if len(set(path)) != len(path):
        raise ValueError("cluster path repeats a cluster")
    eps, m = as_fraction(eps), as_fraction(m)
    flags = _window_flags(1, b, t, eps, m, k, C1, strict)
    r, h, large = _regime(t, eps, m)
    if not large or b == 1:
        # single pair; odd l puts the two leaf sets on opposite sides
        ell = t - 2 * h - 1
        if ell < 1:
            raise ValueError(f"t={t} too short for depth {h}")
        v1, v2 = path[0], path[1]
        piece = Piece((v1, v2), None, r, h, ell, v1, v2, large)
        branch = "single-pair" if not large else "b=1"
        plan = StitchPlan(1, branch, t, b, h, r, eps, m, path[:2], (piece,), "edge", None, flags)
    elif b == 3:
        l1, l3 = _split_even(t - 4 * h - 2)
        if l3 < 2:
            raise ValueError(f"t={t} too short for b=3 at depth {h}")
        V1, V2, V3, V4 = path
        pieces = (Piece((V1, V2), None, 2, h, l1, V2, V2, True), Piece((V3, V4), None, 2, h, l3, V3, V3, True))
        plan = StitchPlan(1, "b=3", t, b, h, 2, eps, m, path, pieces, "edge", None, flags)
    else:
        l0 = floor_odd(Fraction(t - b + 1, b + 1)) - 2 * h
        if l0 < 1:
            raise ValueError(f"t={t} too short for b={b} at depth {h}")
        l_star = Fraction((l0 + 2 * h) * (b - 3), 2) + Fraction(b - 5, 2) - 2 * h
        assert l_star.denominator == 1
        l1, lb = _split_even(t - 2 * int(l_star) - 8 * h - 4)
        if lb < 2:
            raise ValueError(f"t={t} leaves no room for the end trees at b={b}")
        V = (None,) + path  # 1-based
        first = Piece((V[1], V[2]), None, 2, h, l1, V[2], V[2], True)
        last = Piece((V[b], V[b + 1]), None, 2, h, lb, V[b], V[b], True)
        chain = [Piece((V[2 * i - 1], V[2 * i]), 0, 2, h, l0, V[2 * i - 1], V[2 * i], True)
                 for i in range(2, (b - 1) // 2 + 1)]
        back = [Piece((V[2 * i - 1], V[2 * i]), 1, 2, h, l0, V[2 * i], V[2 * i - 1], True)
                for i in range((b - 1) // 2, 1, -1)]
        pieces = tuple([first] + chain + [last] + back)
        plan = StitchPlan(1, "b>=5", t, b, h, 2, eps, m, path, pieces, "edge", None, flags)
    if plan.total() != t:
        raise AssertionError(f"plan bookkeeping {plan.total()} != {t}")
    return plan


def plan_odd_cycle(S_cycle, t: int, eps, m, k: int, *, C1: float = C1_DEFAULT, strict: bool = False) -> StitchPlan:
    """Plan an odd cycle of length t from an odd cluster cycle (V_1, ..., V_b); V_b supplies the closing vertex."""
    cyc = tuple(S_cycle)
    b = len(cyc)
    if b < 3 or b % 2 == 0:
        raise ValueError(f"the cluster cycle must have odd length >= 3, got {b}")
    if t % 2 == 0:
        raise ValueError("item 2 plans odd lengths only")
    if len(set(cyc)) != b:
        raise ValueError("cluster cycle repeats a cluster")
    eps, m = as_fraction(eps), as_fraction(m)
    flags = _window_flags(2, b, t, eps, m, k, C1, strict)
    r, h, large = _regime(t, eps, m)
    l0 = floor_odd(Fraction(2 * t - 2 - (1 + 2 * h) * (b - 1), b - 1))
    l1 = t - 1 - (b - 1) // 2 - h * (b - 1) - (b - 3) // 2 * l0
    if l1 < 1 or (b > 3 and l0 < 1):
        raise ValueError(f"t={t} too short for b={b} at depth {h}")
    V = (None,) + cyc
    pieces = [Piece((V[1], V[2]), None, r, h, l1, V[1], V[2], large)]
    for i in range(2, (b - 1) // 2 + 1):
        pieces.append(Piece((V[2 * i - 1], V[2 * i]), None, r, h, l0, V[2 * i - 1], V[2 * i], large))
    plan = StitchPlan(2, "odd", t, b, h, r, eps, m, cyc, tuple(pieces), "vertex", V[b], flags)
    if plan.total() != t:
        raise AssertionError(f"plan bookkeeping {plan.total()} != {t}")
    return plan


def _halves(cluster):
    c = sorted(cluster)
    return c[:len(c) // 2], c[len(c) // 2:]


def _piece_sets(part: ClusterPartition, piece: Piece):
    a, b = piece.clusters
    A, B = part.clusters[a], part.clusters[b]
    if piece.half is not None:
        A, B = _halves(A)[piece.half], _halves(B)[piece.half]
    return list(A), list(B)


def _first_edge(G: Graph, A, B):
    Bs = set(B)
    for a in sorted(A):
        for w in G.adj[a]:
            if w in Bs:
                return a, w
    return None


def execute_plan(G: Graph, part: ClusterPartition, plan: StitchPlan, *, strategy: str = "auto", rng=None,
                 deadline: float | None = None) -> CycleCertificate:
    """Embed the planned trees, join them and close the cycle; raises StageFailure naming the stage."""
    stream = rng if isinstance(rng, RngStream) else RngStream(0 if rng is None else int(rng))
    used: set = set()
    embs, traces = [], []
    for idx, piece in enumerate(plan.pieces):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("deadline", f"deadline hit before piece {idx}")
        A, B = _piece_sets(part, piece)
        eps_p, m_p = plan.eps, plan.m
        if piece.half is not None:
            m_p = plan.m / 2 - 1
            eps_p = plan.eps * plan.m / m_p
        leaf_side = None
        if piece.ell % 2 == 0:
            leaf_side = 0 if piece.entry == piece.clusters[0] else 1
        try:
            if piece.large:
                emb = embed_large_trhl(G, A, B, eps_p, m_p, piece.ell, leaf_side, strategy=strategy,
                                       rng=stream.child(idx).generator(), forbidden=used)
            else:
                emb = embed_small_trhl(G, A, B, eps_p, m_p, piece.ell, rng=stream.child(idx).generator(),
                                       leaf_side=leaf_side, strict=False, forbidden=used)
        except StageFailure as exc:
            raise StageFailure(f"tree-{idx}:{exc.stage}", exc.message, exc.witness,
                               dict(exc.detail, piece=asdict(piece))) from exc
        used.update(emb.mapping.values())
        embs.append(emb)
        traces.append(emb.trace)
    # entry/exit leaf sets per piece, as (copy, leaves)
    ends = []
    for piece, emb in zip(plan.pieces, embs):
        if piece.ell % 2 == 0:
            ends.append(((1, emb.host_leaves(1)), (2, emb.host_leaves(2))))
        else:
            A, B = _piece_sets(part, piece)
            entry_set = set(A if piece.entry == piece.clusters[0] else B)
            c_in = 1 if emb.host_leaves(1)[0] in entry_set else 2
            ends.append(((c_in, emb.host_leaves(c_in)), (3 - c_in, emb.host_leaves(3 - c_in))))
    links = []
    npieces = len(plan.pieces)
    pairs = [(i, i + 1) for i in range(npieces - 1)]
    if plan.closing == "edge":
        pairs.append((npieces - 1, 0))
    for i, j in pairs:
        X, Y = ends[i][1][1], ends[j][0][1]
        e = _first_edge(G, X, Y)
        if e is None:
            raise StageFailure("connector", f"no edge between the leaf sets of pieces {i} and {j}",
                               witness={"A": sorted(X), "B": sorted(Y)})
        links.append(e)
    closing_vertex = None
    if plan.closing == "vertex":
        L_first, L_last = set(ends[0][0][1]), set(ends[-1][1][1])
        for v in sorted(part.clusters[plan.closing_cluster]):
            if v in used:
                continue
            a = next((w for w in G.adj[v] if w in L_first), None)
            z = next((w for w in G.adj[v] if w in L_last), None)
            if a is not None and z is not None:
                closing_vertex = (v, a, z)
                break
        if closing_vertex is None:
            raise StageFailure("closing-vertex", f"no vertex of cluster {plan.closing_cluster} sees both end leaf sets",
                               witness={"L1": sorted(L_first), "Lb": sorted(L_last),
                                        "cluster": plan.closing_cluster})
    # leaves chosen for each piece
    entry_leaf = [None] * npieces
    exit_leaf = [None] * npieces
    for (i, j), (x, y) in zip(pairs, links):
        exit_leaf[i] = x
        entry_leaf[j] = y
    if closing_vertex is not None:
        entry_leaf[0] = closing_vertex[1]
        exit_leaf[-1] = closing_vertex[2]
    seq = []
    for idx, emb in enumerate(embs):
        c_in = ends[idx][0][0]
        if c_in == 1:
            seq.extend(emb.host_path(entry_leaf[idx], exit_leaf[idx]))
        else:
            seq.extend(reversed(emb.host_path(exit_leaf[idx], entry_leaf[idx])))
    if closing_vertex is not None:
        seq.append(closing_vertex[0])
    prov = {"plan": plan.to_json(), "trees": traces, "links": [list(e) for e in links],
            "closing_vertex": None if closing_vertex is None else closing_vertex[0]}
    return certify_cycle(G, seq, plan.t, prov)


@dataclass
class CycleSearchFailure:
    t: int
    stage: str
    message: str
    attempts: list = field(default_factory=list)
    s_edges: int | None = None
    s_threshold: Fraction | None = None
    flags: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"t": self.t, "stage": self.stage, "message": self.message, "attempts": self.attempts,
                "s_edges": self.s_edges,
                "s_threshold": None if self.s_threshold is None else str(self.s_threshold), "flags": self.flags}


_COUNT_CACHE: dict = {}


def _pair_counts(G: Graph, part: ClusterPartition) -> np.ndarray:
    """k x k matrix of edge counts between clusters (memoized for the last few graph/partition pairs)."""
    key = (id(G), id(part))
    hit = _COUNT_CACHE.get(key)
    if hit is not None and hit[0] is G and hit[1] is part:
        return hit[2]
    M = _count_matrix(G, part)
    if len(_COUNT_CACHE) >= 4:
        _COUNT_CACHE.pop(next(iter(_COUNT_CACHE)))
    _COUNT_CACHE[key] = (G, part, M)
    return M


def _count_matrix(G: Graph, part: ClusterPartition) -> np.ndarray:
    k = part.k
    if G.m == 0:
        return np.zeros((k, k), dtype=np.int64)
    asg = np.asarray(part.assignment, dtype=np.int64)
    e = np.asarray(G.edges, dtype=np.int64)
    a, b = asg[e[:, 0]], asg[e[:, 1]]
    M = np.zeros((k, k), dtype=np.int64)
    np.add.at(M, (a, b), 1)
    return M + M.T


def _score(plan: StitchPlan, part: ClusterPartition, counts: np.ndarray, eps, k, C1):
    """Sort key: window-valid plans by smallest b, the rest by tree load among pairs dense enough for the trees."""
    loads, degs = [], []
    for p in plan.pieces:
        a, b = p.clusters
        size = len(part.clusters[a]) + len(part.clusters[b])
        e = counts[a, b]
        if p.half is not None:
            size, e = size / 2, e / 4
        copy = (p.r ** (p.h + 1) - 1) // (p.r - 1)
        loads.append((p.ell + 2 * copy) / max(size, 1))
        degs.append(2 * e / max(size, 1))
    deg_ok = min(degs) >= plan.r + 1
    if not plan.flags:
        return (0, 0, plan.b, -min(degs))
    return (1, 0 if deg_ok else 1, max(loads), -min(degs))


def _candidate_plans(t, S: Graph, part, counts, eps, k, C1, limit):
    cands = []
    m = part.m
    if t % 2 == 0:
        P = longest_path_exact(S)
        L = len(P) - 1
        windows = []
        for b in range(1, L + 1, 2):
            for i in range(L - b + 1):
                windows.append(tuple(P[i:i + b + 1]))
        extra = sorted(S.edges, key=lambda e: -counts[e[0], e[1]])[:8]
        windows.extend(tuple(e) for e in extra)
        for w in dict.fromkeys(windows):
            try:
                cands.append(plan_even_cycle(w, t, eps, m, k, C1=C1))
            except ValueError:
                continue
    else:
        cyc = cycles_by_length(S, range(3, S.n + 1, 2))
        for b, C in sorted(cyc.items()):
            for j in range(b):
                for seq in (C[j:] + C[:j], (C[j:] + C[:j])[::-1]):
                    try:
                        cands.append(plan_odd_cycle(seq, t, eps, m, k, C1=C1))
                    except ValueError:
                        continue
    cands.sort(key=lambda p: _score(p, part, counts, eps, k, C1))
    return cands[:limit]


def build_s_graph(G: Graph, part: ClusterPartition, eps, s_mode: str = "auto", *, p=None, rho=None,
                  budget: int = 2000, rng=None):
    """The cluster graph S. ``s_mode="derived"`` reads it off a density-only reduced graph."""
    if s_mode == "derived":
        R = build_reduced_graph(G, part, rho=rho, eps=eps, p=p, mode="skip")
        return build_epsilon_graph(G, part, eps, mode="derived-from-R", reduced=R)
    return build_epsilon_graph(G, part, eps, mode=s_mode, budget=budget, rng=rng)


def find_cycle_of_length(G: Graph, t: int, beta, gamma, eps, k: int, rng=None, *, s_mode: str = "auto",
                         p=None, rho=None, retries: int = RETRY_BUDGET, deadline: float = 60.0,
                         C1: float = C1_DEFAULT, C2=C2_DEFAULT, strategy: str = "auto", partition=None,
                         plans_per_partition: int = 4, s_budget: int = 2000, s_graph=None):
    """Search for a cycle of length exactly t; returns a CycleCertificate or a falsy CycleSearchFailure.

    Each retry draws a fresh equipartition into k clusters (or uses
    ``partition``, with ``s_graph`` reusing a precomputed S), builds S, finds a longest path (even t) or the odd
    cycles (odd t) of S exactly, and executes the most promising plans.
    """
    n = G.n
    if not 3 <= t <= n:
        raise ValueError("need 3 <= t <= n")
    gamma = default_gamma(eps, k) if gamma is None else as_fraction(gamma)
    req = CycleRequest(t, n, gamma)
    beta = as_fraction(beta)
    stream = rng if isinstance(rng, RngStream) else RngStream(0 if rng is None else int(rng))
    stop = time.monotonic() + deadline if deadline else None
    g = g_function(n, t, gamma).value
    threshold = (g + beta / 32) * comb2(k)
    flags = []
    if t > (1 - as_fraction(C2) * beta) * n:
        flags.append("t above (1 - C2 beta) n")
    attempts = []
    last = ("s-graph", "no attempt made")
    s_edges = None
    for attempt in range(retries if partition is None else 1):
        sub = stream.child(attempt)
        part = partition if partition is not None else equipartition(n, k, sub.child(0).generator())
        if s_graph is not None and partition is not None:
            Sg = s_graph.as_graph() if hasattr(s_graph, "as_graph") else s_graph
        else:
            S = build_s_graph(G, part, eps, s_mode, p=p, rho=rho, budget=s_budget, rng=sub.child(1).generator())
            Sg = S.as_graph()
        s_edges = Sg.m
        rec = {"attempt": attempt, "s_edges": Sg.m, "case": req.case, "plans": []}
        attempts.append(rec)
        if Sg.m == 0:
            last = ("s-graph", "S has no edges")
            continue
        counts = _pair_counts(G, part)
        plans = _candidate_plans(t, Sg, part, counts, eps, k, C1, plans_per_partition)
        if not plans:
            last = ("plan", "S has no usable path or odd cycle for this t")
            rec["plans"].append({"stage": last[0], "message": last[1]})
            continue
        for pi, plan in enumerate(plans):
            if stop is not None and time.monotonic() > stop:
                return CycleSearchFailure(t, "deadline", "time budget exhausted", attempts, s_edges, threshold, flags)
            try:
                cert = execute_plan(G, part, plan, strategy=strategy, rng=sub.child(2 + pi), deadline=stop)
            except StageFailure as exc:
                last = (exc.stage, exc.message)
                rec["plans"].append({"branch": plan.branch, "b": plan.b, "stage": exc.stage, "message": exc.message})
                continue
            cert.provenance.update({"attempt": attempt, "case": req.case, "s_mode": s_mode, "s_edges": Sg.m,
                                    "s_threshold": str(threshold), "s_threshold_met": Sg.m >= threshold,
                                    "flags": flags + plan.flags})
            return cert
    return CycleSearchFailure(t, last[0], last[1], attempts, s_edges, threshold, flags)
