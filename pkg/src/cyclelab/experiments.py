"""Batch experiment drivers: Turán-type deletion, robustness under random sparsification, Ramsey colorings.

Every run is a pure function of its config (including the master seed).
Graphs are rebuilt from the config when certificates are re-verified, so
reports never have to store the host graphs.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .extremal import as_fraction, comb2, g_function, in_woodall_range
from .generators import _pair_index_to_edges, planted_blowup, random_regular, sample_gnp
from .graph import Graph, complete_graph, read_graph, verify_cycle
from .oracle import has_cycle_of_length
from .ramsey import EdgeColoring, color_class, color_random, monochromatic_odd_cycle
from .rng import RngStream
from .stitcher import C1_DEFAULT, C2_DEFAULT, default_gamma, find_cycle_of_length

THREADS_ENV = "CYCLELAB_THREADS"
CSV_COLUMNS = ("trial", "t", "parity", "scenario", "outcome", "stage", "edges_kept", "threshold_num",
               "threshold_den", "seconds", "cert_path")
DEFAULT_DEGREES = (10, 20, 40)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Experiment parameters. ``p`` is the edge probability of G(n, p) for the Turán and Ramsey drivers and
    the retention probability of G(p) for robustness; a list sweeps it, and ``degrees`` gives it as c/n."""

    model: str = "gnp"
    n: int = 200
    p: float | list | None = None
    degrees: list | None = None
    d: int | None = None
    file: str | None = None
    planted: dict | None = None
    beta: float = 0.1
    gamma: float | None = None
    eps: float = 0.05
    k: int = 12
    rho: float | None = None
    C1: float = C1_DEFAULT
    C2: float = float(C2_DEFAULT)
    t: list = field(default_factory=list)
    t_frac: list = field(default_factory=list)
    t_sweep: dict | None = None
    trials: int = 1
    seed: int = 0
    s_mode: str = "auto"
    retries: int = 5
    deadline: float = 60.0
    strategy: str = "auto"
    deletion: str = "random"
    scenario: str = "a"
    f_n: str | float = "log"
    tight_eps: float = 0.1
    oracle_max_n: int = 13
    r: int = 2
    coloring: str = "random"
    mono_odd: bool = True
    record_seconds: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.model in ("gnp", "regular", "planted", "file", "complete"), f"unknown model {self.model!r}")
        if self.model == "planted":
            need(isinstance(self.planted, dict) and {"k", "m"} <= set(self.planted),
                 "planted model needs planted = {k, m[, closed]}")
            self.n = int(self.planted["k"]) * int(self.planted["m"])
        need(isinstance(self.n, int) and self.n >= 3, "n must be an integer >= 3")
        need(self.model != "regular" or isinstance(self.d, int), "regular model needs d")
        need(self.model != "file" or self.file, "file model needs file")
        need(isinstance(self.trials, int) and self.trials >= 1, "trials must be >= 1")
        need(isinstance(self.k, int) and self.k >= 1, "k must be >= 1")
        need(0 < as_fraction(self.eps) < 1, "eps must lie in (0, 1)")
        need(0 <= as_fraction(self.beta) <= 1, "beta must lie in [0, 1]")
        for p in self.p_values():
            need(0 <= p <= 1, "p must lie in [0, 1]")
        need(self.deletion in ("none", "random", "adversarial", "overlay"), f"unknown deletion {self.deletion!r}")
        need(self.scenario in ("a", "b", "c"), f"unknown scenario {self.scenario!r}")
        need(self.coloring in ("random", "balanced-cut", "two-thirds", "abcd", "doubling"),
             f"unknown coloring {self.coloring!r}")
        need(isinstance(self.r, int) and self.r >= 1, "r must be >= 1")
        need(self.s_mode in ("auto", "exact", "sampled", "derived"), f"unknown s_mode {self.s_mode!r}")
        for t in self.t_values():
            need(3 <= t <= self.n, f"t={t} outside [3, n]")

    @property
    def gamma_value(self) -> Fraction:
        return default_gamma(self.eps, self.k) if self.gamma is None else as_fraction(self.gamma)

    def p_values(self) -> list:
        if self.p is not None:
            return [float(x) for x in (self.p if isinstance(self.p, list) else [self.p])]
        if self.degrees is not None:
            return [c / self.n for c in self.degrees]
        return []

    def p_labels(self) -> list:
        if self.p is None and self.degrees is not None:
            return [f"p={c}/n" for c in self.degrees]
        return [f"p={x}" for x in self.p_values()]

    def t_values(self) -> list:
        out = [int(t) for t in self.t]
        for frac, parity in self.t_frac:
            x = math.floor(as_fraction(frac) * self.n)
            if parity not in ("even", "odd"):
                raise ConfigError("t_frac parity must be 'even' or 'odd'")
            if (x % 2 == 1) != (parity == "odd"):
                x -= 1
            out.append(x)
        if self.t_sweep:
            s = self.t_sweep
            out.extend(range(int(s["start"]), int(s["stop"]) + 1, int(s.get("step", 1))))
        seen, uniq = set(), []
        for t in out:
            if t not in seen:
                seen.add(t)
                uniq.append(t)
        if not uniq:
            raise ConfigError("no t values requested")
        return uniq


@dataclass
class Row:
    trial: int
    t: int
    scenario: str
    outcome: str
    stage: str
    edges_kept: int
    threshold: Fraction
    seconds: float
    cert_path: str = ""
    cert: dict | None = None
    note: dict = field(default_factory=dict)

    @property
    def parity(self) -> str:
        return "odd" if self.t % 2 else "even"


@dataclass
class Report:
    kind: str
    config: ExperimentConfig
    rows: list

    def aggregate(self) -> dict:
        groups: dict = {}
        for r in self.rows:
            key = f"{r.scenario}|t={r.t}"
            g = groups.setdefault(key, {"trials": 0, "success": 0})
            g["trials"] += 1
            g["success"] += r.outcome == "success"
        for g in groups.values():
            g["rate"] = g["success"] / g["trials"]
        return groups

    def success_rate(self, scenario: str | None = None, t: int | None = None) -> float:
        sel = [r for r in self.rows if (scenario is None or r.scenario == scenario) and (t is None or r.t == t)]
        return sum(r.outcome == "success" for r in sel) / len(sel) if sel else 0.0

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            secs = f"{r.seconds:.3f}" if self.config.record_seconds else ""
            w.writerow([r.trial, r.t, r.parity, r.scenario, r.outcome, r.stage, r.edges_kept,
                        r.threshold.numerator, r.threshold.denominator, secs, r.cert_path])
        return buf.getvalue()

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        (out / "certs").mkdir(parents=True, exist_ok=True)
        for r in self.rows:
            if r.cert is not None:
                (out / r.cert_path).write_text(_dumps(r.cert))
        (out / "report.csv").write_text(self.csv_text())
        summary = {"kind": self.kind, "config": self.config.to_dict(), "aggregate": self.aggregate(),
                   "notes": [{"trial": r.trial, "t": r.t, "scenario": r.scenario, **r.note}
                             for r in self.rows if r.note]}
        (out / "summary.json").write_text(_dumps(summary))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("trial", "t", "scenario", "seconds"))
        for r in self.rows:
            w.writerow((r.trial, r.t, r.scenario, f"{r.seconds:.3f}"))
        (out / "timings.csv").write_text(buf.getvalue())
        return out


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str, indent=1) + "\n"


def graph_digest(G: Graph) -> str:
    h = hashlib.sha256(f"{G.n}\n".encode())
    h.update(np.asarray(G.edges, dtype=np.int64).tobytes())
    return h.hexdigest()


def thread_count(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, default)))
    except ValueError:
        return default


# --- sampling helpers -------------------------------------------------------

def _index_sample(N: int, p: float, gen) -> np.ndarray:
    """Indices of a Bernoulli(p) subset of range(N), by geometric skipping."""
    if p <= 0 or N == 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1:
        return np.arange(N, dtype=np.int64)
    out, pos = [], -1
    while True:
        chunk = max(1024, int((N - pos) * p * 1.05) + 64)
        cs = pos + np.cumsum(gen.geometric(p, size=chunk).astype(np.int64))
        keep = cs[cs < N]
        out.append(keep)
        if len(keep) < chunk:
            break
        pos = int(keep[-1])
    return np.concatenate(out)


@dataclass(frozen=True)
class Block:
    """A clique on ``a`` or the complete bipartite graph between ``a`` and ``b``."""

    a: tuple
    b: tuple | None = None

    @property
    def size(self) -> int:
        return comb2(len(self.a)) if self.b is None else len(self.a) * len(self.b)

    def pairs(self, idx: np.ndarray) -> list:
        A = np.asarray(self.a, dtype=np.int64)
        if self.b is None:
            loc = _pair_index_to_edges(idx, len(self.a))
            u, v = A[loc[:, 0]], A[loc[:, 1]]
        else:
            B = np.asarray(self.b, dtype=np.int64)
            u, v = A[idx // len(self.b)], B[idx % len(self.b)]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        return list(zip(lo.tolist(), hi.tolist()))


def _sample_blocks(blocks, p: float, gen) -> set:
    edges = set()
    for bl in blocks:
        if bl.size:
            edges.update(bl.pairs(_index_sample(bl.size, p, gen)))
    return edges


def _uniform_from_pool(pool, count: int, gen) -> set:
    """``count`` distinct pairs chosen uniformly from the union of disjoint pool blocks."""
    sizes = [bl.size for bl in pool]
    total = sum(sizes)
    count = min(count, total)
    if count <= 0:
        return set()
    picks = np.sort(gen.choice(total, size=count, replace=False))
    out, start = set(), 0
    for bl, sz in zip(pool, sizes):
        sel = picks[(picks >= start) & (picks < start + sz)] - start
        out.update(bl.pairs(sel))
        start += sz
    return out


def _graph_from(n: int, edges) -> Graph:
    return Graph.from_sorted_edges(n, sorted(edges))


# --- host graphs ---------------------------------------------------------------

def sample_host(cfg: ExperimentConfig, p: float | None, stream: RngStream):
    """Host graph for a trial and, for planted instances, the planted partition."""
    gen = stream.generator()
    if cfg.model == "gnp":
        if p is None:
            raise ConfigError("gnp model needs p or degrees")
        return sample_gnp(cfg.n, p, gen), None
    if cfg.model == "regular":
        return random_regular(cfg.n, cfg.d, gen), None
    if cfg.model == "complete":
        return complete_graph(cfg.n), None
    if cfg.model == "file":
        G = read_graph(cfg.file)
        if G.n != cfg.n:
            raise ConfigError(f"file graph has {G.n} vertices, config says n={cfg.n}")
        return G, None
    pl = cfg.planted
    return planted_blowup(int(pl["k"]), int(pl["m"]), bool(pl.get("closed", False)))


def _overlay_membership(n: int, t: int):
    """Membership test for the C_t-free construction used as an adversarial overlay."""
    if in_woodall_range(n, t):
        a = t - 1
        return lambda x, y: (x < a and y < a) or (x >= a - 1 and y >= a - 1), "woodall"
    if t % 2:
        h = n // 2
        return lambda x, y: (x < h) != (y < h), "bipartite"
    s = t - 1
    return lambda x, y: x // s == y // s, "clique-blocks"


def _search(G: Graph, t: int, cfg: ExperimentConfig, stream: RngStream, partition=None):
    t0 = time.monotonic()
    res = find_cycle_of_length(G, t, cfg.beta, cfg.gamma_value, cfg.eps, cfg.k, rng=stream, s_mode=cfg.s_mode,
                               rho=cfg.rho, retries=cfg.retries, deadline=cfg.deadline, C1=cfg.C1, C2=cfg.C2,
                               strategy=cfg.strategy, partition=partition)
    return res, time.monotonic() - t0


def _row(trial, t, scenario, G, res, seconds, threshold, tag) -> Row:
    if res:
        cert = res.to_json()
        cert["graph_sha256"] = graph_digest(G)
        return Row(trial, t, scenario, "success", "", G.m, threshold, seconds, f"certs/{tag}.json", cert)
    outcome = "timeout" if res.stage == "deadline" else "failure"
    return Row(trial, t, scenario, outcome, res.stage, G.m, threshold, seconds)


def _cap_one(x: Fraction) -> Fraction:
    return min(Fraction(1), x)


# --- Turán ---------------------------------------------------------------------

def turan_graphs(cfg: ExperimentConfig, trial: int):
    """Yield (t, scenario, G', threshold, search stream, partition) for one trial."""
    ts = RngStream(cfg.seed).child(trial)
    ps = cfg.p_values() or [None]
    labels = cfg.p_labels() or [""]
    for pi, (p, lab) in enumerate(zip(ps, labels)):
        st = ts.child(pi)
        G, part = sample_host(cfg, p, st.child(0))
        for j, t in enumerate(cfg.t_values()):
            gen = st.child(1).child(j).generator()
            theta = _cap_one(g_function(cfg.n, t, cfg.gamma_value).value + as_fraction(cfg.beta))
            keep = min(G.m, math.ceil(theta * G.m))
            Gp = _delete(G, t, keep, cfg.deletion, gen)
            scen = cfg.deletion + (f":{lab}" if lab else "")
            yield t, scen, Gp, theta, st.child(2).child(j), part


def _delete(G: Graph, t: int, keep: int, mode: str, gen) -> Graph:
    if mode == "none":
        return G
    if mode == "random":
        idx = np.sort(gen.choice(G.m, size=keep, replace=False)) if keep < G.m else np.arange(G.m)
        return Graph.from_sorted_edges(G.n, [G.edges[i] for i in idx.tolist()])
    inside, _ = _overlay_membership(G.n, t)
    sigma = gen.permutation(G.n)
    on = [e for e in G.edges if inside(int(sigma[e[0]]), int(sigma[e[1]]))]
    if mode == "overlay":
        return Graph.from_sorted_edges(G.n, on)
    off = [e for e in G.edges if not inside(int(sigma[e[0]]), int(sigma[e[1]]))]
    if len(on) >= keep:
        idx = np.sort(gen.choice(len(on), size=keep, replace=False))
        chosen = [on[i] for i in idx.tolist()]
    else:
        idx = gen.choice(len(off), size=keep - len(on), replace=False)
        chosen = on + [off[i] for i in idx.tolist()]
    return Graph.from_sorted_edges(G.n, sorted(chosen))


def _run_trials(cfg: ExperimentConfig, per_trial, threads: int | None) -> list:
    threads = thread_count() if threads is None else threads
    if threads <= 1:
        chunks = [per_trial(i) for i in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(threads) as ex:
            chunks = list(ex.map(per_trial, range(cfg.trials)))
    return [row for chunk in chunks for row in chunk]


def run_turan(cfg: ExperimentConfig, threads: int | None = None) -> Report:
    def per_trial(i):
        rows = []
        for j, (t, scen, Gp, theta, stream, part) in enumerate(turan_graphs(cfg, i)):
            res, secs = _search(Gp, t, cfg, stream, part)
            rows.append(_row(i, t, scen, Gp, res, secs, theta, f"trial{i}_{j}_t{t}"))
        return rows

    return Report("turan", cfg, _run_trials(cfg, per_trial, threads))


# --- robustness ------------------------------------------------------------------

def _f_of_n(cfg: ExperimentConfig) -> float:
    return math.log(cfg.n) if cfg.f_n == "log" else float(cfg.f_n)


def robustness_base(cfg: ExperimentConfig, t: int):
    """(blocks, extra pool, extra count) describing the base graph G of a scenario."""
    n = cfg.n
    V = tuple(range(n))
    if cfg.scenario == "c":
        s1 = min(n, math.ceil((1 + as_fraction(cfg.tight_eps)) * t))
        return [Block(V[:s1]), Block(V[s1 - 1:])], [], 0
    if cfg.scenario == "b":
        if t % 2 == 0:
            raise ConfigError("scenario b needs odd t")
        h = n // 2
        blocks = [Block(V[:h], V[h:])]
        return blocks, [Block(V[:h])], None
    if in_woodall_range(n, t):
        a = t - 1
        blocks = [Block(V[:a]), Block(V[a - 1:])]
        pool = [Block(V[:a - 1], V[a:])]
    elif t % 2:
        h = n // 2
        blocks = [Block(V[:h], V[h:])]
        pool = [Block(V[:h]), Block(V[h:])]
    else:
        s = t - 1
        groups = [V[i:i + s] for i in range(0, n, s)]
        blocks = [Block(g) for g in groups]
        pool = [Block(groups[i], groups[j]) for i in range(len(groups)) for j in range(i + 1, len(groups))]
    extra = round(as_fraction(cfg.beta) * comb2(n))
    return blocks, pool, extra


def robustness_graphs(cfg: ExperimentConfig, trial: int):
    ts = RngStream(cfg.seed).child(trial)
    for pi, (p, lab) in enumerate(zip(cfg.p_values(), cfg.p_labels())):
        st = ts.child(pi)
        for j, t in enumerate(cfg.t_values()):
            gen = st.child(1).child(j).generator()
            blocks, pool, extra = robustness_base(cfg, t)
            if extra is None:  # scenario b: f(n)/p extra edges inside one side
                extra = math.ceil(_f_of_n(cfg) / p) if p > 0 else 0
            edges = _sample_blocks(blocks, p, gen)
            total = sum(bl.size for bl in pool)
            kept_extra = int(gen.binomial(min(extra, total), p)) if extra and total else 0
            edges |= _uniform_from_pool(pool, kept_extra, gen)
            Gp = _graph_from(cfg.n, edges)
            base_edges = sum(bl.size for bl in blocks)
            base_edges += min(extra, total)
            theta = Fraction(base_edges, comb2(cfg.n))
            yield t, f"{cfg.scenario}:{lab}", Gp, theta, st.child(2).child(j), blocks


def _expected_absent(Gp: Graph, blocks, t: int) -> bool:
    """Sufficient condition for no C_t in scenario c: every cycle lies inside one clique, so each clique's
    2-core must have at least t vertices to host one."""
    for bl in blocks:
        S = set(bl.a)
        deg = {v: sum(1 for w in Gp.adj[v] if w in S) for v in S}
        alive = set(S)
        stack = [v for v in S if deg[v] < 2]
        while stack:
            v = stack.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in Gp.adj[v]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] < 2:
                        stack.append(w)
        if len(alive) >= t:
            return False
    return True


def run_robustness(cfg: ExperimentConfig, threads: int | None = None) -> Report:
    if not cfg.p_values():
        cfg = dataclasses.replace(cfg, degrees=list(DEFAULT_DEGREES))
    if cfg.scenario == "b" and any(t % 2 == 0 for t in cfg.t_values()):
        raise ConfigError("scenario b needs odd t")

    def per_trial(i):
        rows = []
        for j, (t, scen, Gp, theta, stream, blocks) in enumerate(robustness_graphs(cfg, i)):
            res, secs = _search(Gp, t, cfg, stream)
            row = _row(i, t, scen, Gp, res, secs, theta, f"trial{i}_{j}_t{t}")
            if cfg.scenario == "c":
                row.note["failure_expected"] = _expected_absent(Gp, blocks, t)
                if cfg.n <= cfg.oracle_max_n:
                    row.note["oracle_has_ct"] = has_cycle_of_length(Gp, t)
            rows.append(row)
        return rows

    return Report("robustness", cfg, _run_trials(cfg, per_trial, threads))


# --- Ramsey ----------------------------------------------------------------------

def pattern_coloring(G: Graph, r: int, pattern: str) -> EdgeColoring:
    """Structured colorings of the lower-bound constructions (vertex order defines the parts)."""
    n = G.n
    if pattern == "balanced-cut":
        if r != 2:
            raise ConfigError("balanced-cut needs r = 2")
        h = n // 2
        return EdgeColoring(2, tuple(0 if (a < h) != (b < h) else 1 for a, b in G.edges))
    if pattern == "two-thirds":
        if r != 2:
            raise ConfigError("two-thirds needs r = 2")
        a1 = n // 3
        return EdgeColoring(2, tuple(1 if (a >= a1 and b >= a1) else 0 for a, b in G.edges))
    if pattern in ("abcd", "doubling"):
        if pattern == "abcd" and r != 3:
            raise ConfigError("abcd needs r = 3")
        if r < 2:
            raise ConfigError("doubling needs r >= 2")
        parts = 1 << (r - 1)
        cols = []
        for a, b in G.edges:
            pa, pb = a * parts // n, b * parts // n
            if pa == pb:
                cols.append(1)
            else:
                j = (pa ^ pb).bit_length() - 1
                cols.append(0 if j == 0 else j + 1)
        return EdgeColoring(r, tuple(cols))
    raise ConfigError(f"unknown coloring {pattern!r}")


def ramsey_window(r: int, parity: str, beta) -> Fraction:
    """Fraction of n (odd: of the cluster count for general r) targeted by the length windows."""
    beta = as_fraction(beta)
    if parity == "even":
        return Fraction(2, 3) - beta if r == 2 else Fraction(1, r * 2 ** (r + 4))
    if r == 2:
        return Fraction(1, 2) - beta
    if r == 3:
        return Fraction(1, 4) - beta
    return Fraction(1, r * 2 ** (r + 4))


def ramsey_instances(cfg: ExperimentConfig, trial: int):
    ts = RngStream(cfg.seed).child(trial)
    ps = cfg.p_values() or [None]
    labels = cfg.p_labels() or [""]
    for pi, (p, lab) in enumerate(zip(ps, labels)):
        st = ts.child(pi)
        G, _ = sample_host(cfg, p, st.child(0))
        if cfg.coloring == "random":
            col = color_random(G, cfg.r, st.child(3).generator())
        else:
            col = pattern_coloring(G, cfg.r, cfg.coloring)
        yield pi, lab, G, col, st


def run_ramsey(cfg: ExperimentConfig, threads: int | None = None) -> Report:
    if cfg.r == 1:
        rep = run_turan(dataclasses.replace(cfg, deletion="none"), threads)
        return Report("ramsey", cfg, rep.rows)

    def per_trial(i):
        rows = []
        for pi, lab, G, col, st in ramsey_instances(cfg, i):
            suffix = f":{lab}" if lab else ""
            for c in range(cfg.r):
                Gc = color_class(G, col, c)
                scen = f"{cfg.coloring}:color{c}{suffix}"
                for j, t in enumerate(cfg.t_values()):
                    res, secs = _search(Gc, t, cfg, st.child(4 + c).child(j))
                    window = ramsey_window(cfg.r, "odd" if t % 2 else "even", cfg.beta)
                    rows.append(_row(i, t, scen, Gc, res, secs, window, f"trial{i}_{pi}_c{c}_t{t}"))
            if cfg.mono_odd:
                t0 = time.monotonic()
                mono = monochromatic_odd_cycle(G, col, rng=st.child(2).generator())
                secs = time.monotonic() - t0
                scen = f"{cfg.coloring}:mono-odd{suffix}"
                bound = Fraction(mono.bound)
                thr = bound / cfg.n if cfg.n else bound
                if mono:
                    Gc = color_class(G, col, mono.color)
                    cert = {"t": mono.length, "cycle": list(mono.cycle), "color": mono.color,
                            "provenance": {"trace": mono.trace, "bound": str(bound)},
                            "graph_sha256": graph_digest(Gc)}
                    row = Row(i, mono.length, scen, "success", "", Gc.m, thr, secs,
                              f"certs/trial{i}_{pi}_mono.json", cert)
                else:
                    row = Row(i, 3, scen, "failure", "all-bipartite", G.m, thr, secs)
                row.note["bound_met"] = bool(mono) and mono.length >= bound
                rows.append(row)
        return rows

    return Report("ramsey", cfg, _run_trials(cfg, per_trial, threads))


RUNNERS = {"turan": run_turan, "robustness": run_robustness, "ramsey": run_ramsey}


def run_experiment(kind: str, cfg: ExperimentConfig, threads: int | None = None) -> Report:
    if kind not in RUNNERS:
        raise ConfigError(f"unknown experiment {kind!r}")
    return RUNNERS[kind](cfg, threads)


# --- re-verification ---------------------------------------------------------------

def _graphs_for(kind: str, cfg: ExperimentConfig, trial: int) -> dict:
    """Map cert tag -> graph, rebuilt from the config."""
    out = {}
    if kind == "turan" or (kind == "ramsey" and cfg.r == 1):
        c = cfg if kind == "turan" else dataclasses.replace(cfg, deletion="none")
        for j, (t, _, Gp, _, _, _) in enumerate(turan_graphs(c, trial)):
            out[f"trial{trial}_{j}_t{t}"] = Gp
    elif kind == "robustness":
        if not cfg.p_values():
            cfg = dataclasses.replace(cfg, degrees=list(DEFAULT_DEGREES))
        for j, (t, _, Gp, _, _, _) in enumerate(robustness_graphs(cfg, trial)):
            out[f"trial{trial}_{j}_t{t}"] = Gp
    else:
        for pi, _, G, col, _ in ramsey_instances(cfg, trial):
            classes = [color_class(G, col, c) for c in range(cfg.r)]
            for c, Gc in enumerate(classes):
                for t in cfg.t_values():
                    out[f"trial{trial}_{pi}_c{c}_t{t}"] = Gc
            out[f"trial{trial}_{pi}_mono"] = classes
    return out


def verify_report(kind: str, cfg: ExperimentConfig, out_dir) -> list:
    """Re-verify every stored certificate against graphs rebuilt from the config; returns problems found."""
    out = Path(out_dir)
    problems = []
    with open(out / "report.csv") as fh:
        rows = list(csv.DictReader(fh))
    cache: dict = {}
    for row in rows:
        if row["outcome"] != "success":
            continue
        trial = int(row["trial"])
        if trial not in cache:
            cache[trial] = _graphs_for(kind, cfg, trial)
        path = row["cert_path"]
        cert = json.loads((out / path).read_text())
        tag = Path(path).stem
        G = cache[trial].get(tag)
        if isinstance(G, list):
            G = G[cert["color"]]
        if G is None:
            problems.append(f"{path}: no graph rebuilt for tag {tag}")
            continue
        if cert.get("graph_sha256") != graph_digest(G):
            problems.append(f"{path}: graph digest mismatch")
        chk = verify_cycle(G, cert["cycle"], int(row["t"]))
        if not chk:
            problems.append(f"{path}: {chk.reason}")
    return problems
