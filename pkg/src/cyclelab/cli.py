"""Command-line entry point ``cyclelab``.

Exit codes: 0 when the command ran (a failed search is data, not an error),
2 for bad arguments or configuration, 3 for I/O problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .embedder import ArityError, TreeSpec, embed_large_trhl, embed_small_trhl, embed_trhl
from .expander import cleanup_to_expander, dfs_path_partition
from .experiments import ConfigError, ExperimentConfig, run_experiment, verify_report
from .extremal import eg_cycle_bound, eg_path_bound, g_function, woodall_threshold
from .generators import (check_upper_uniform, mixing_lemma_check, planted_blowup, random_regular,
                         sample_gnp)
from .graph import GraphFormatError, format_graph, read_graph, write_graph
from .oracle import OracleCapError, cycle_spectrum_exact, cycles_by_length
from .ramsey import color_random, monochromatic_odd_cycle
from .regularity import equipartition
from .rng import RngStream
from .stitcher import build_s_graph, find_cycle_of_length
from .verdict import StageFailure

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, sort_keys=True, default=str, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ids(text: str | None) -> list:
    if not text:
        return []
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _verdict_json(v) -> dict:
    return {"holds": v.holds, "mode": v.mode, "checked": v.checked, "witness": v.witness, "detail": v.detail}


def cmd_gen(a) -> int:
    gen = RngStream(a.seed).generator()
    if a.model == "gnp":
        G = sample_gnp(a.n, a.p, gen)
    elif a.model == "regular":
        G = random_regular(a.n, a.d, gen)
    else:
        G, _ = planted_blowup(a.k, a.m, a.closed)
    if a.out:
        write_graph(G, a.out)
    else:
        sys.stdout.write(format_graph(G))
    return EXIT_OK


def cmd_check(a) -> int:
    G = read_graph(a.input)
    if a.what == "uniformity":
        v = check_upper_uniform(G, Fraction(a.p), Fraction(a.eta), a.mode, a.budget, RngStream(a.seed).generator())
    else:
        v = mixing_lemma_check(G, a.d, a.lam, a.budget, RngStream(a.seed).generator())
    _emit(_verdict_json(v))
    return EXIT_OK


def cmd_sgraph(a) -> int:
    G = read_graph(a.input)
    st = RngStream(a.seed)
    part = equipartition(G.n, a.k, st.child(0).generator())
    S = build_s_graph(G, part, Fraction(a.eps), a.mode, p=a.p, rho=a.rho, budget=a.budget,
                      rng=st.child(1).generator())
    pairs = [{"pair": list(e), **_verdict_json(v)} for e, v in sorted(S.verdicts.items())]
    _emit({"k": S.k, "eps": str(S.epsilon), "mode": S.mode, "edges": [list(e) for e in S.edges],
           "clusters": [list(c) for c in part.clusters], "pairs": pairs}, a.out)
    return EXIT_OK


def cmd_embed(a) -> int:
    G = read_graph(a.input)
    L, R = _ids(a.left), _ids(a.right)
    if not L or not R:
        raise ConfigError("--left and --right are required")
    m = Fraction(a.m) if a.m else Fraction(max(len(L), len(R)))
    gen = RngStream(a.seed).generator()
    try:
        if a.r is not None and a.h is not None:
            emb = embed_trhl(G, L, R, TreeSpec(a.r, a.h, a.ell), leaf_side=a.leaf_side, rng=gen)
        elif a.kind == "small":
            emb = embed_small_trhl(G, L, R, Fraction(a.eps), m, a.ell, rng=gen, leaf_side=a.leaf_side,
                                   strict=False)
        else:
            emb = embed_large_trhl(G, L, R, Fraction(a.eps), m, a.ell, a.leaf_side, rng=gen)
    except (StageFailure, ArityError) as exc:
        _emit({"outcome": "failure", "stage": getattr(exc, "stage", "arity"), "message": str(exc)})
        return EXIT_OK
    _emit({"outcome": "success", **emb.to_json()}, a.out)
    return EXIT_OK


def cmd_expander(a) -> int:
    G = read_graph(a.input)
    if a.what == "dfs-partition":
        res = dfs_path_partition(G, RngStream(a.seed).generator())
        _emit({"S": res.S, "T": res.T, "U": res.U, "path": res.path})
        return EXIT_OK
    L, R = _ids(a.left), _ids(a.right)
    if not L or not R:
        raise ConfigError("--left and --right are required")
    m = Fraction(a.m) if a.m else Fraction(max(len(L), len(R)))
    tr = cleanup_to_expander(G, L, R, Fraction(a.eps), m, Fraction(a.a), Fraction(a.b), strict=not a.lenient,
                             rng=RngStream(a.seed).generator())
    _emit({"outcome": tr.outcome, "U1": tr.U1, "U2": tr.U2, "removed": tr.removed, "witness": tr.witness,
           "search": tr.search, "notes": tr.notes,
           "verdict": _verdict_json(tr.verdict) if tr.verdict is not None else None})
    return EXIT_OK


def cmd_find_cycle(a) -> int:
    G = read_graph(a.input)
    res = find_cycle_of_length(G, a.t, Fraction(a.beta), None if a.gamma is None else Fraction(a.gamma),
                               Fraction(a.eps), a.k, rng=RngStream(a.seed), s_mode=a.s_mode, deadline=a.deadline,
                               retries=a.retries)
    if res:
        _emit(res.to_json(), a.cert)
        if a.cert:
            print(f"success: cycle of length {a.t} written to {a.cert}")
    else:
        _emit({"outcome": "failure", **res.to_json()})
    return EXIT_OK


def cmd_extremal(a) -> int:
    gamma = Fraction(a.gamma)
    ts = range(3, a.n + 1) if a.table else [a.t]
    print("n,t,parity,g_num,g_den,w_num,w_den,eg_path,eg_cycle")
    for t in ts:
        g = g_function(a.n, t, gamma)
        w = woodall_threshold(t, a.n)
        print(f"{a.n},{t},{'odd' if t % 2 else 'even'},{g.numerator},{g.denominator},{w.numerator},"
              f"{w.denominator},{eg_path_bound(t, a.n)},{eg_cycle_bound(t, a.n)}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    G = read_graph(a.input)
    if a.what == "spectrum":
        sp = cycle_spectrum_exact(G)
        _emit({"lengths": sorted(sp.present), "longest_path": sp.longest_path})
    else:
        wit = cycles_by_length(G, [a.t]).get(a.t)
        _emit({"t": a.t, "present": wit is not None, "cycle": wit})
    return EXIT_OK


def cmd_ramsey(a) -> int:
    G = read_graph(a.input)
    st = RngStream(a.seed)
    col = color_random(G, a.r, st.child(0).generator())
    res = monochromatic_odd_cycle(G, col, None if a.eps is None else Fraction(a.eps), rng=st.child(1).generator())
    _emit({"color": res.color, "length": res.length, "cycle": res.cycle, "bound": str(res.bound),
           "bound_met": res.length >= res.bound, "trace": res.trace}, a.out)
    return EXIT_OK


def cmd_experiment(a) -> int:
    cfg = ExperimentConfig.load(a.config)
    rep = run_experiment(a.kind, cfg, a.threads)
    out = rep.write(a.out)
    print(f"{len(rep.rows)} rows written to {out / 'report.csv'}")
    for key, g in sorted(rep.aggregate().items()):
        print(f"  {key}: {g['success']}/{g['trials']}")
    if a.verify:
        problems = verify_report(a.kind, cfg, out)
        print("certificates re-verified" if not problems else "\n".join(problems))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclelab", description="Cycles of prescribed length in sparse graphs.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("model", choices=["gnp", "regular", "planted"])
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--d", type=int)
    g.add_argument("--k", type=int, help="planted: cluster count")
    g.add_argument("--m", type=int, help="planted: cluster size")
    g.add_argument("--closed", action="store_true", help="planted: join the last cluster to the first")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="pseudo-randomness verdicts")
    c.add_argument("what", choices=["uniformity", "mixing"])
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--p", default="0.5")
    c.add_argument("--eta", default="0.1")
    c.add_argument("--d", type=int)
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--mode", default="auto", choices=["auto", "exact", "sampled"])
    c.add_argument("--budget", type=int, default=1 << 14)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sgraph", help="cluster graph of eps-property pairs")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--eps", default="0.05")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mode", default="auto", choices=["auto", "exact", "sampled", "derived"])
    s.add_argument("--rho")
    s.add_argument("--p")
    s.add_argument("--budget", type=int, default=2000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sgraph)

    e = sub.add_parser("embed", help="embed a double tree into a bipartite pair")
    e.add_argument("what", choices=["trhl"])
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--left", required=True, help="ids, e.g. 0-99 or 1,4,7")
    e.add_argument("--right", required=True)
    e.add_argument("--ell", type=int, required=True)
    e.add_argument("--r", type=int)
    e.add_argument("--h", type=int)
    e.add_argument("--eps", default="0.01")
    e.add_argument("--m")
    e.add_argument("--kind", choices=["small", "large"], default="large")
    e.add_argument("--leaf-side", type=int, choices=[0, 1])
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.set_defaults(func=cmd_embed)

    x = sub.add_parser("expander", help="expander cleanup and DFS partition")
    x.add_argument("what", choices=["cleanup", "dfs-partition"])
    x.add_argument("--in", dest="input", required=True)
    x.add_argument("--left")
    x.add_argument("--right")
    x.add_argument("--eps", default="0.05")
    x.add_argument("--m")
    x.add_argument("--a", default="0.1")
    x.add_argument("--b", default="9")
    x.add_argument("--lenient", action="store_true", help="skip the parameter-constraint check")
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_expander)

    f = sub.add_parser("find-cycle", help="search for a cycle of length exactly t")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--t", type=int, required=True)
    f.add_argument("--beta", default="0.1")
    f.add_argument("--gamma")
    f.add_argument("--eps", default="0.05")
    f.add_argument("--k", type=int, default=12)
    f.add_argument("--s-mode", default="auto", choices=["auto", "exact", "sampled", "derived"])
    f.add_argument("--deadline", type=float, default=60.0)
    f.add_argument("--retries", type=int, default=5)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--cert")
    f.set_defaults(func=cmd_find_cycle)

    t = sub.add_parser("extremal", help="threshold formulas as CSV")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--t", type=int)
    t.add_argument("--gamma", default="0.2")
    t.add_argument("--table", action="store_true", help="all t in [3, n]")
    t.set_defaults(func=cmd_extremal)

    o = sub.add_parser("oracle", help="exact cycle oracle for small graphs")
    o.add_argument("what", choices=["spectrum", "has-cycle"])
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--t", type=int)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("ramsey", help="monochromatic odd cycle under a random coloring")
    r.add_argument("what", choices=["mono-odd"])
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--r", type=int, default=2)
    r.add_argument("--eps")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_ramsey)

    xp = sub.add_parser("experiment", help="batch experiments")
    xp.add_argument("kind", choices=["turan", "robustness", "ramsey"])
    xp.add_argument("--config", required=True)
    xp.add_argument("--out", required=True)
    xp.add_argument("--threads", type=int, help="defaults to $CYCLELAB_THREADS or 1")
    xp.add_argument("--verify", action="store_true", help="re-verify stored certificates afterwards")
    xp.set_defaults(func=cmd_experiment)
    return ap


def _validate(a) -> None:
    if a.command == "gen":
        need = {"gnp": ("n", "p"), "regular": ("n", "d"), "planted": ("k", "m")}[a.model]
        missing = [x for x in need if getattr(a, x) is None]
        if missing:
            raise ConfigError(f"gen {a.model} needs --{' --'.join(missing)}")
    if a.command == "check" and a.what == "mixing" and (a.d is None or a.lam is None):
        raise ConfigError("check mixing needs --d and --lambda")
    if a.command == "extremal" and not a.table and a.t is None:
        raise ConfigError("extremal needs --t or --table")
    if a.command == "oracle" and a.what == "has-cycle" and a.t is None:
        raise ConfigError("oracle has-cycle needs --t")


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        _validate(a)
        return a.func(a)
    except (ConfigError, OracleCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, GraphFormatError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
