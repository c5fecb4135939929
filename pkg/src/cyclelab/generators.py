"""Random graph models and pseudo-randomness checks."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .extremal import as_fraction
from .graph import Graph
from .rng import as_generator
from .verdict import Verdict


def _pair_index_to_edges(idx: np.ndarray, n: int) -> np.ndarray:
    rows = np.arange(n, dtype=np.int64)
    row_start = rows * (2 * n - rows - 1) // 2
    u = np.searchsorted(row_start, idx, side="right") - 1
    v = idx - row_start[u] + u + 1
    return np.stack([u, v], axis=1)


def sample_gnp(n: int, p: float, rng=None) -> Graph:
    """G(n, p) by geometric skipping over the C(n, 2) pairs in lexicographic order."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    gen = as_generator(rng)
    N = n * (n - 1) // 2
    if p == 0 or N == 0:
        return Graph(n)
    if p == 1:
        idx = np.arange(N, dtype=np.int64)
    else:
        chunks = []
        pos = -1
        chunk = max(1024, int(N * p * 1.05) + 64)
        while True:
            gaps = gen.geometric(p, size=chunk).astype(np.int64)
            cs = pos + np.cumsum(gaps)
            keep = cs[cs < N]
            chunks.append(keep)
            if len(keep) < chunk:
                break
            pos = int(keep[-1])
            chunk = max(1024, int((N - pos) * p * 1.05) + 64)
        idx = np.concatenate(chunks)
    return Graph.from_sorted_edges(n, _pair_index_to_edges(idx, n).tolist())


def keep_each_edge(G: Graph, p: float, rng=None) -> Graph:
    """G(p): keep every edge of G independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    gen = as_generator(rng)
    if G.m == 0:
        return Graph(G.n)
    mask = gen.random(G.m) < p
    return Graph.from_sorted_edges(G.n, [e for e, k in zip(G.edges, mask) if k])


def random_regular(n: int, d: int, rng=None, max_restarts: int = 1000) -> Graph:
    """Random d-regular graph from stub pairing, rejecting loops and repeated pairs.

    Stubs are paired one random pair at a time; a pair that would create a
    loop or a multi-edge is redrawn, and the whole pairing restarts if it gets
    stuck. The result is asymptotically uniform, not exactly uniform.
    """
    if d < 0 or d >= n or (n * d) % 2:
        raise ValueError("need 0 <= d < n and n*d even")
    gen = as_generator(rng)
    if d == 0:
        return Graph(n)
    for _ in range(max_restarts):
        stubs = np.repeat(np.arange(n), d)
        gen.shuffle(stubs)
        stubs = stubs.tolist()
        edges = set()
        ok = True
        while stubs:
            placed = False
            for _try in range(100):
                L = len(stubs)
                i = int(gen.integers(L))
                j = int(gen.integers(L - 1))
                if j >= i:
                    j += 1
                u, v = stubs[i], stubs[j]
                e = (u, v) if u < v else (v, u)
                if u != v and e not in edges:
                    edges.add(e)
                    for k in sorted((i, j), reverse=True):
                        stubs[k] = stubs[-1]
                        stubs.pop()
                    placed = True
                    break
            if not placed:
                ok = False
                break
        if ok:
            return Graph.from_sorted_edges(n, sorted(edges))
    raise RuntimeError("random_regular: restart cap exceeded; retry with another stream")


def _regular_degree(G: Graph) -> int:
    degs = {len(a) for a in G.adj}
    if len(degs) > 1:
        raise ValueError("graph is not regular")
    return degs.pop() if degs else 0


def _csr(G: Graph):
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in G.adj])
    indices = np.fromiter((w for a in G.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
    return indptr, indices


def estimate_lambda(G: Graph, tol: float = 1e-10, max_iter: int = 10_000, rng=None) -> float:
    """Largest |eigenvalue| of the adjacency matrix orthogonal to the all-ones vector.

    Two shifted power iterations: ``A + dI`` finds the top of the remaining
    spectrum, ``dI - A`` the bottom. Both operators are PSD on a d-regular
    graph, so the Rayleigh quotient converges monotonically.
    """
    d = _regular_degree(G)
    n = G.n
    if n <= 1 or d == 0:
        return 0.0
    indptr, indices = _csr(G)
    starts = indptr[:-1]
    gen = as_generator(rng)

    def matvec(x):
        return np.add.reduceat(x[indices], starts)

    def run(sign):
        x = gen.standard_normal(n)
        x -= x.mean()
        x /= np.linalg.norm(x)
        mu_old = None
        mu = 0.0
        for _ in range(max_iter):
            y = d * x + sign * matvec(x)
            y -= y.mean()
            mu = float(x @ y)
            nrm = np.linalg.norm(y)
            if nrm == 0:
                return 0.0
            x = y / nrm
            if mu_old is not None and abs(mu - mu_old) <= tol * max(abs(mu), 1.0):
                break
            mu_old = mu
        return mu

    top = run(+1) - d
    bottom = d - run(-1)
    return max(abs(top), abs(bottom))


def _subset_bits(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)


def _adjacency(G: Graph) -> np.ndarray:
    A = np.zeros((G.n, G.n), dtype=np.int64)
    for a, b in G.edges:
        A[a, b] = A[b, a] = 1
    return A


def _extreme_pair_counts(G: Graph):
    """For every subset U and size w: max and min e(U, W) over W outside U with |W| = w.

    Returns ``(bits, maxe, mine, sizes)`` with ``maxe[U, w-1]`` etc.; W is
    built from the w outside vertices of largest (smallest) degree into U.
    """
    n = G.n
    bits = _subset_bits(n)
    degU = bits @ _adjacency(G)
    inside = bits.astype(bool)
    big = np.where(inside, -1, degU)
    small = np.where(inside, n + 1, degU)
    desc = -np.sort(-big, axis=1)
    asc = np.sort(small, axis=1)
    maxe = np.cumsum(desc, axis=1)
    mine = np.cumsum(asc, axis=1)
    sizes = bits.sum(axis=1)
    return bits, degU, maxe, mine, sizes


def _top_w(degU_row, U_mask_row, w, largest=True):
    cand = [v for v in range(len(degU_row)) if not U_mask_row[v]]
    cand.sort(key=lambda v: (-degU_row[v], v) if largest else (degU_row[v], v))
    return sorted(cand[:w])


def check_upper_uniform(G: Graph, p, eta, mode: str = "auto", budget: int = 1 << 16,
                        rng=None, induced: bool = False) -> Verdict:
    """(p, eta)-upper-uniformity: e(U, W) <= (1 + eta) p |U||W| for disjoint U, W of size >= eta n.

    With ``induced=True`` the single-set form e(G[U]) <= (1 + eta) p C(|U|, 2)
    for |U| >= 2 eta n is checked instead. Exact mode enumerates every U and
    uses the fact that the worst W of each size takes the vertices with the
    most neighbors in U; it needs ``2**n <= budget``. Sampled mode draws
    ``budget`` pairs with |U|, |W| uniform in [ceil(eta n), n/2].
    """
    p = as_fraction(p)
    eta = as_fraction(eta)
    F = (1 + eta) * p
    n = G.n
    lo = max(1, math.ceil(eta * n * (2 if induced else 1)))
    if mode == "auto":
        mode = "exact" if (1 << n) <= budget else "sampled"
    if mode == "exact":
        if (1 << n) > budget:
            raise ValueError(f"exact mode needs 2**{n} <= budget={budget}")
        return _uniform_exact(G, F, lo, induced)
    if mode != "sampled":
        raise ValueError("mode must be exact, sampled or auto")
    return _uniform_sampled(G, F, lo, induced, budget, as_generator(rng))


def _uniform_exact(G, F: Fraction, lo: int, induced: bool) -> Verdict:
    n = G.n
    a, b = F.numerator, F.denominator
    if induced:
        bits = _subset_bits(n)
        A = _adjacency(G)
        e_in = ((bits @ A) * bits).sum(axis=1) // 2
        sizes = bits.sum(axis=1)
        ok = sizes >= lo
        bad = ok & (b * 2 * e_in > a * sizes * (sizes - 1))
        checked = int(ok.sum())
        if bad.any():
            U = int(np.flatnonzero(bad)[0])
            Us = [v for v in range(n) if U >> v & 1]
            return Verdict(False, "exact", checked, (Us,), {"edges": int(e_in[U]), "bound": F * len(Us) * (len(Us) - 1) / 2})
        return Verdict(True, "exact", checked)
    bits, degU, maxe, _mine, sizes = _extreme_pair_counts(G)
    checked = 0
    for w in range(lo, n):
        valid = (sizes >= lo) & (sizes + w <= n)
        checked += int(valid.sum())
        viol = valid & (b * maxe[:, w - 1] > a * sizes * w)
        if viol.any():
            U = int(np.flatnonzero(viol)[0])
            Us = [v for v in range(n) if U >> v & 1]
            Ws = _top_w(degU[U], bits[U], w)
            e = sum(1 for u in Us for x in G.adj[u] if x in set(Ws))
            return Verdict(False, "exact", checked, (Us, Ws), {"edges": e, "bound": F * len(Us) * len(Ws)})
    return Verdict(True, "exact", checked)


def _uniform_sampled(G, F: Fraction, lo: int, induced: bool, budget: int, gen) -> Verdict:
    n = G.n
    hi = max(lo, n // 2)
    checked = 0
    for _ in range(budget):
        u = int(gen.integers(lo, hi + 1))
        if induced:
            if u > n:
                continue
            perm = gen.permutation(n)
            U = set(perm[:u].tolist())
            e = sum(1 for x in U for y in G.adj[x] if y in U) // 2
            checked += 1
            if e > F * u * (u - 1) / 2:
                return Verdict(False, "sampled", checked, (sorted(U),), {"edges": e, "bound": F * u * (u - 1) / 2})
            continue
        w = int(gen.integers(lo, hi + 1))
        if u + w > n:
            continue
        perm = gen.permutation(n)
        U = perm[:u].tolist()
        W = set(perm[u:u + w].tolist())
        e = sum(1 for x in U for y in G.adj[x] if y in W)
        checked += 1
        if e > F * u * w:
            return Verdict(False, "sampled", checked, (sorted(U), sorted(W)), {"edges": e, "bound": F * u * w})
    return Verdict(True, "sampled", checked)


def mixing_lemma_check(G: Graph, d: int, lam: float, budget: int = 20_000, rng=None,
                       rel_tol: float = 1e-9) -> Verdict:
    """|e(A, B) - d|A||B|/n| <= lam * sqrt(|A||B|) over disjoint nonempty A, B.

    Exhaustive for n <= 16: for each A and each size of B only the two
    extreme choices of B (highest and lowest degrees into A) need testing.
    ``rel_tol`` absorbs rounding in a floating-point lam.
    """
    if _regular_degree(G) != d and G.n > 0:
        raise ValueError("graph is not d-regular")
    n = G.n
    slack = 1 + rel_tol
    if n <= 16:
        bits, degU, maxe, mine, sizes = _extreme_pair_counts(G)
        checked = 0
        for w in range(1, n):
            valid = (sizes >= 1) & (sizes + w <= n)
            checked += 2 * int(valid.sum())
            c = d * sizes * w / n
            bound = lam * np.sqrt(sizes * w) * slack + 1e-12
            hi = valid & (maxe[:, w - 1] - c > bound)
            lo = valid & (c - mine[:, w - 1] > bound)
            for arr, largest in ((hi, True), (lo, False)):
                if arr.any():
                    U = int(np.flatnonzero(arr)[0])
                    A = [v for v in range(n) if U >> v & 1]
                    B = _top_w(degU[U], bits[U], w, largest)
                    Bs = set(B)
                    e = sum(1 for a in A for x in G.adj[a] if x in Bs)
                    return Verdict(False, "exact", checked, (A, B), {"edges": e, "expected": Fraction(d * len(A) * w, n)})
        return Verdict(True, "exact", checked)
    gen = as_generator(rng)
    for i in range(budget):
        a = int(gen.integers(1, n))
        b = int(gen.integers(1, n - a + 1))
        perm = gen.permutation(n)
        A = perm[:a].tolist()
        B = set(perm[a:a + b].tolist())
        e = sum(1 for x in A for y in G.adj[x] if y in B)
        if abs(e - d * a * b / n) > lam * math.sqrt(a * b) * slack + 1e-12:
            return Verdict(False, "sampled", i + 1, (sorted(A), sorted(B)), {"edges": e, "expected": Fraction(d * a * b, n)})
    return Verdict(True, "sampled", budget)


def planted_blowup(k: int, m: int, closed: bool = False):
    """k clusters of m vertices, consecutive clusters joined completely (a chain, or a cycle when ``closed``).

    Returns the graph and the planted partition.
    """
    from .regularity import ClusterPartition

    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    if closed and k < 3:
        raise ValueError("a closed blow-up needs k >= 3")
    n = k * m
    clusters = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    links = [(i, i + 1) for i in range(k - 1)] + ([(0, k - 1)] if closed else [])
    edges = sorted((u, v) for a, b in links for u in clusters[a] for v in clusters[b])
    return Graph.from_sorted_edges(n, edges), ClusterPartition.from_clusters(n, clusters)
