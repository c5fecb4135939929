"""Immutable simple graphs, certificates and edge-list I/O."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed edge lists (bad header, self-loop, duplicate edge)."""


class CertificateError(ValueError):
    """Raised when a claimed cycle or path does not verify."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency lists are sorted tuples. Edges are stored once as ``(u, v)``
    with ``u < v`` in lexicographic order, which is the canonical edge order
    used by colorings and edge-sampling routines.
    """

    __slots__ = ("n", "edges", "adj", "_sets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise GraphFormatError(f"self-loop at {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphFormatError(f"edge ({a}, {b}) out of range for n={n}")
            e = (a, b) if a < b else (b, a)
            if e in norm:
                raise GraphFormatError(f"duplicate edge {e}")
            norm.add(e)
        self.n = n
        self.edges = tuple(sorted(norm))
        lists: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            lists[a].append(b)
            lists[b].append(a)
        self.adj = tuple(tuple(sorted(x)) for x in lists)
        self._sets = None

    @classmethod
    def from_sorted_edges(cls, n: int, edges) -> "Graph":
        """Fast path for edges already normalized (u < v), unique and sorted."""
        g = cls.__new__(cls)
        g.n = n
        g.edges = tuple((int(a), int(b)) for a, b in edges)
        lists: list[list[int]] = [[] for _ in range(n)]
        for a, b in g.edges:
            lists[a].append(b)
            lists[b].append(a)
        g.adj = tuple(tuple(sorted(x)) for x in lists)
        g._sets = None
        return g

    @classmethod
    def from_edge_set(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from edges that may repeat or appear in either orientation."""
        return cls(n, {(a, b) if a < b else (b, a) for a, b in edges if a != b})

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_sets(self) -> list[frozenset]:
        if self._sets is None:
            self._sets = [frozenset(a) for a in self.adj]
        return self._sets

    def has_edge(self, u: int, v: int) -> bool:
        if self._sets is not None:
            return v in self._sets[u]
        a = self.adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Check:
    """Outcome of verifying a vertex sequence; falsy on rejection."""

    ok: bool
    reason: str = ""
    index: int | None = None
    length: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CycleCertificate:
    cycle: tuple[int, ...]
    t: int
    provenance: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"t": self.t, "cycle": list(self.cycle), "provenance": self.provenance}


def verify_cycle(G: Graph, seq: Sequence[int], t: int | None = None) -> Check:
    """Check that ``seq`` lists the vertices of a cycle of G in order.

    The closing edge ``seq[-1] -- seq[0]`` is implied. On rejection ``index``
    points at the offending position.
    """
    k = len(seq)
    if t is not None and k != t:
        return Check(False, f"length {k} != {t}", None, k)
    if k < 3:
        return Check(False, "a cycle needs at least 3 vertices", None, k)
    seen = set()
    for i, v in enumerate(seq):
        if not (0 <= v < G.n):
            return Check(False, f"vertex {v} out of range", i, k)
        if v in seen:
            return Check(False, f"repeated vertex {v}", i, k)
        seen.add(v)
    for i in range(k):
        u, v = seq[i], seq[(i + 1) % k]
        if not G.has_edge(u, v):
            return Check(False, f"non-edge ({u}, {v})", i, k)
    return Check(True, "", None, k)


def verify_path(G: Graph, seq: Sequence[int], length: int | None = None) -> Check:
    """Check a simple path; ``length`` counts edges."""
    k = len(seq)
    if k == 0:
        return Check(False, "empty path", None, -1)
    if length is not None and k - 1 != length:
        return Check(False, f"length {k - 1} != {length}", None, k - 1)
    seen = set()
    for i, v in enumerate(seq):
        if not (0 <= v < G.n):
            return Check(False, f"vertex {v} out of range", i, k - 1)
        if v in seen:
            return Check(False, f"repeated vertex {v}", i, k - 1)
        seen.add(v)
    for i in range(k - 1):
        if not G.has_edge(seq[i], seq[i + 1]):
            return Check(False, f"non-edge ({seq[i]}, {seq[i + 1]})", i, k - 1)
    return Check(True, "", None, k - 1)


def certify_cycle(G: Graph, seq: Sequence[int], t: int, provenance: dict | None = None) -> CycleCertificate:
    chk = verify_cycle(G, seq, t)
    if not chk:
        raise CertificateError(chk.reason)
    return CycleCertificate(tuple(int(v) for v in seq), t, dict(provenance or {}))


def neighborhood(G: Graph, U: Iterable[int]) -> set[int]:
    """External neighborhood: vertices outside U with a neighbor in U."""
    U = set(U)
    _check_ids(G, U)
    out = set()
    for u in U:
        out.update(G.adj[u])
    return out - U


def induced_subgraph(G: Graph, U: Iterable[int]) -> tuple[Graph, list[int]]:
    """Return ``(H, labels)`` where ``labels[i]`` is the G-vertex of H-vertex i."""
    labels = sorted(set(U))
    _check_ids(G, labels)
    pos = {v: i for i, v in enumerate(labels)}
    edges = []
    for v in labels:
        i = pos[v]
        for w in G.adj[v]:
            j = pos.get(w)
            if j is not None and i < j:
                edges.append((i, j))
    return Graph(len(labels), edges), labels


def _check_ids(G: Graph, X) -> None:
    for v in X:
        if not (0 <= v < G.n):
            raise ValueError(f"vertex {v} out of range for n={G.n}")


def count_pair_edges(G: Graph, U: Iterable[int], W: Iterable[int]) -> int:
    """e(U, W) for disjoint U, W."""
    U = U if isinstance(U, (set, frozenset)) else set(U)
    W = W if isinstance(W, (set, frozenset)) else set(W)
    if not U.isdisjoint(W):
        raise ValueError("U and W must be disjoint")
    c = 0
    for u in U:
        for w in G.adj[u]:
            if w in W:
                c += 1
    return c


@dataclass(frozen=True)
class BipartitePairView:
    """Edge queries on G restricted to ``left x right``."""

    host: Graph
    left: frozenset
    right: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))
        if not self.left.isdisjoint(self.right):
            raise ValueError("pair sides must be disjoint")

    def other_side(self, v: int) -> frozenset:
        return self.right if v in self.left else self.left

    def neighbors(self, v: int) -> list[int]:
        side = self.other_side(v)
        return [w for w in self.host.adj[v] if w in side]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u in self.left and v in self.right) or (u in self.right and v in self.left)) and self.host.has_edge(u, v)

    def edge_count(self) -> int:
        return count_pair_edges(self.host, self.left, self.right)


def bipartite_pair_graph(G: Graph, U: Iterable[int], W: Iterable[int]) -> tuple[Graph, list[int], int]:
    """Bipartite subgraph G[U, W] relabelled with U first.

    Returns ``(H, labels, |U|)``; only U-W edges are kept.
    """
    U = sorted(set(U))
    W = sorted(set(W))
    labels = U + W
    pos = {v: i for i, v in enumerate(labels)}
    nu = len(U)
    edges = []
    for i, u in enumerate(U):
        for w in G.adj[u]:
            j = pos.get(w)
            if j is not None and j >= nu:
                edges.append((i, j))
    # rows ascend in i and, within a row, in j: already canonical
    return Graph.from_sorted_edges(len(labels), edges), labels, nu


def edge_subgraph(G: Graph, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(G.n, edges)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for H in graphs:
        edges.extend((a + off, b + off) for a, b in H.edges)
        off += H.n
    return Graph(off, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def read_graph(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())


def parse_graph(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise GraphFormatError("header must be 'n m'")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
    except ValueError as exc:
        raise GraphFormatError("header must be two integers") from exc
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header says {m} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise GraphFormatError(f"bad edge line: {' '.join(row)}")
        try:
            u, v = int(row[0]), int(row[1])
        except ValueError as exc:
            raise GraphFormatError(f"bad edge line: {' '.join(row)}") from exc
        if u >= v:
            raise GraphFormatError(f"edge line must have u < v: {u} {v}")
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(G: Graph) -> str:
    out = [f"{G.n} {G.m}"]
    out.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(out) + "\n"


def write_graph(G: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(G))
