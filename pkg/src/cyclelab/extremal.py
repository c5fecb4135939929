"""Exact extremal edge-fraction functions and the matching constructions.

All fractions are over C(n, 2) and kept as integer numerator/denominator
pairs; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .graph import Graph, complete_bipartite
from .rng import as_generator


def comb2(x: int) -> int:
    return x * (x - 1) // 2 if x >= 2 else 0


def as_fraction(x) -> Fraction:
    """Exact value of a parameter; floats are read through their repr so 0.2 means 1/5."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


@dataclass(frozen=True)
class ExtremalValue:
    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        return self.numerator / self.denominator


def _check(n: int, t: int):
    if n < 3 or not 3 <= t <= n:
        raise ValueError(f"need 3 <= t <= n, got t={t}, n={n}")


def _woodall_count(n: int, t: int) -> int:
    return comb2(t - 1) + comb2(n - t + 2) + 1


def in_woodall_range(n: int, t: int) -> bool:
    return 2 * t >= n + 3


def g_odd(n: int, t: int) -> ExtremalValue:
    _check(n, t)
    if t % 2 == 0:
        raise ValueError("g_odd needs odd t")
    num = _woodall_count(n, t) if in_woodall_range(n, t) else n * n // 4 + 1
    return ExtremalValue(num, comb2(n))


def g_even(n: int, t: int, gamma) -> ExtremalValue:
    _check(n, t)
    if t % 2:
        raise ValueError("g_even needs even t")
    gamma = as_fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    if in_woodall_range(n, t):
        num = _woodall_count(n, t)
    elif t >= gamma * n:
        num = n * (t - 1) // 2 + 1
    else:
        num = 0
    return ExtremalValue(num, comb2(n))


def g_function(n: int, t: int, gamma=None) -> ExtremalValue:
    """g^gamma(t, n): dispatch on the parity of t. gamma is ignored for odd t."""
    if t % 2:
        return g_odd(n, t)
    if gamma is None:
        raise ValueError("even t needs gamma")
    return g_even(n, t, gamma)


def woodall_threshold(t: int, n: int) -> ExtremalValue:
    _check(n, t)
    num = _woodall_count(n, t) if in_woodall_range(n, t) else n * n // 4 + 1
    return ExtremalValue(num, comb2(n))


def eg_path_bound(t: int, n: int) -> int:
    if t < 1:
        raise ValueError("t >= 1")
    return (t - 1) * n // 2


def eg_cycle_bound(t: int, n: int) -> int:
    if t < 3:
        raise ValueError("t >= 3")
    return (n - 1) * (t - 1) // 2


def build_woodall_graph(n: int, t: int) -> Graph:
    """K_{t-1} and K_{n-t+2} glued at vertex t-2; no cycle of length >= t."""
    _check(n, t)
    if not in_woodall_range(n, t):
        raise ValueError("needs t >= (n+3)/2")
    a = t - 1
    edges = [(i, j) for i in range(a) for j in range(i + 1, a)]
    second = list(range(a - 1, n))
    edges += [(second[i], second[j]) for i in range(len(second)) for j in range(i + 1, len(second))]
    return Graph(n, edges)


def build_bipartite_extremal(n: int) -> Graph:
    if n < 2:
        raise ValueError("n >= 2")
    return complete_bipartite(n // 2, n - n // 2)


def build_clique_blocks(n: int, t: int) -> Graph:
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    edges = []
    for start in range(0, n, t):
        block = range(start, min(start + t, n))
        edges += [(i, j) for i in block for j in block if i < j]
    return Graph(n, edges)


def extremal_example(n: int, t: int) -> tuple[Graph, str]:
    """The C_t-free construction W_t used for overlays."""
    _check(n, t)
    if in_woodall_range(n, t):
        return build_woodall_graph(n, t), "woodall"
    if t % 2:
        return build_bipartite_extremal(n), "bipartite"
    raise ValueError(f"no extremal construction for even t={t} < (n+3)/2 with n={n}")


@dataclass
class OverlayResult:
    subgraph: Graph
    kept: int
    target: int
    met: bool
    construction: str
    sigma: tuple


def overlay_lower_bound(G: Graph, t: int, trials: int = 200, seed=0) -> OverlayResult:
    """Best of ``trials`` random placements of W_t intersected with G.

    ``target`` is ceil(e(W_t) * e(G) / C(n, 2)); ``met`` records whether the
    best placement reached it.
    """
    n = G.n
    W, name = extremal_example(n, t)
    target = ceil(Fraction(W.m * G.m, comb2(n))) if n >= 2 else 0
    rng = as_generator(seed)
    if G.m == 0:
        return OverlayResult(Graph(n), 0, target, True, name, tuple(range(n)))
    src = np.array(G.edges, dtype=np.int64)
    wmat = np.zeros((n, n), dtype=bool)
    for a, b in W.edges:
        wmat[a, b] = wmat[b, a] = True
    best_mask, best_kept, best_sigma = None, -1, None
    for _ in range(max(1, trials)):
        # sigma maps host vertices onto W_t's vertices
        sigma = rng.permutation(n)
        mask = wmat[sigma[src[:, 0]], sigma[src[:, 1]]]
        kept = int(mask.sum())
        if kept > best_kept:
            best_kept, best_mask, best_sigma = kept, mask, sigma
    H = Graph(n, [G.edges[i] for i in np.flatnonzero(best_mask)])
    return OverlayResult(H, best_kept, target, best_kept >= target, name, tuple(int(x) for x in best_sigma))
