import json

import pytest

from cyclelab.experiments import (CSV_COLUMNS, ConfigError, ExperimentConfig, pattern_coloring, run_experiment,
                                  run_ramsey, run_robustness, run_turan, verify_report)
from cyclelab.graph import complete_graph
from cyclelab.oracle import cycle_spectrum_exact
from cyclelab.ramsey import color_class


def cfg(**kw):
    base = dict(model="gnp", n=120, p=0.3, k=4, eps=0.05, t=[20, 21], trials=2, seed=7, deadline=30.0,
                s_mode="derived")
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def test_csv_header_and_row_count():
    rep = run_turan(cfg(deletion="random"))
    lines = rep.csv_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 2


def test_turan_rerun_is_byte_identical(tmp_path):
    c = cfg(deletion="random")
    a = run_turan(c).write(tmp_path / "a")
    b = run_turan(c).write(tmp_path / "b")
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()
    certs = sorted(p.name for p in (a / "certs").iterdir())
    assert certs == sorted(p.name for p in (b / "certs").iterdir())
    for name in certs:
        assert (a / "certs" / name).read_bytes() == (b / "certs" / name).read_bytes()


def test_threaded_run_matches_sequential():
    c = cfg(deletion="random")
    assert run_turan(c, threads=1).csv_text() == run_turan(c, threads=2).csv_text()


def test_successes_reverify(tmp_path):
    c = cfg(deletion="random")
    rep = run_turan(c)
    rep.write(tmp_path)
    assert any(r.outcome == "success" for r in rep.rows)
    assert verify_report("turan", c, tmp_path) == []


def test_tampered_certificate_detected(tmp_path):
    c = cfg(deletion="none", t=[20])
    rep = run_turan(c)
    rep.write(tmp_path)
    row = next(r for r in rep.rows if r.outcome == "success")
    path = tmp_path / row.cert_path
    cert = json.loads(path.read_text())
    cert["cycle"] = cert["cycle"][::-1][1:] + cert["cycle"][:1]
    cert["cycle"][0], cert["cycle"][5] = cert["cycle"][5], cert["cycle"][0]
    path.write_text(json.dumps(cert))
    assert verify_report("turan", c, tmp_path)


def test_complete_host_without_deletion_always_succeeds():
    # lengths close to n are outside what the cluster method reaches; see the acceptance suite
    c = ExperimentConfig.from_dict(dict(model="complete", n=60, k=3, eps=0.05, deletion="none", trials=1,
                                        t_sweep={"start": 3, "stop": 40, "step": 1}))
    rep = run_turan(c)
    assert rep.success_rate() == 1.0


def test_bipartite_overlay_kills_odd_cycles():
    c = cfg(n=60, p=0.5, deletion="overlay", beta=0.0, t=[9, 11], trials=2)
    rep = run_turan(c)
    assert rep.success_rate() == 0.0


def test_robustness_zero_probability_fails():
    c = ExperimentConfig.from_dict(dict(n=60, p=0.0, scenario="a", t=[21], beta=0.1, k=4, trials=2))
    rep = run_robustness(c)
    assert rep.success_rate() == 0.0 and all(r.edges_kept == 0 for r in rep.rows)


def test_scenario_b_rejects_even_t():
    with pytest.raises(ConfigError):
        run_robustness(ExperimentConfig.from_dict(dict(n=60, p=0.5, scenario="b", t=[20], k=4)))


def test_scenario_c_failure_flag_is_sound():
    for p in (1.0, 0.9, 0.7, 0.5):
        c = ExperimentConfig.from_dict(dict(n=13, p=p, scenario="c", t_frac=[[0.8, "odd"]], k=2, trials=8,
                                            seed=3, t=[11]))
        rep = run_robustness(c)
        for r in rep.rows:
            assert "oracle_has_ct" in r.note
            if r.note["failure_expected"]:
                assert not r.note["oracle_has_ct"] and r.outcome != "success"
            if r.outcome == "success":
                assert r.note["oracle_has_ct"]


def test_ramsey_single_color_is_turan_without_deletion():
    c = cfg(r=1, t=[20], trials=1)
    a = run_ramsey(c)
    b = run_turan(cfg(deletion="none", t=[20], trials=1))
    assert a.csv_text() == b.csv_text()


def test_balanced_cut_on_k12_keeps_odd_cycles_short():
    G = complete_graph(12)
    col = pattern_coloring(G, 2, "balanced-cut")
    longest_odd = max(max([L for L in cycle_spectrum_exact(color_class(G, col, c)).present if L % 2], default=0)
                      for c in range(2))
    assert longest_odd <= 7
    c = ExperimentConfig.from_dict(dict(model="complete", n=12, r=2, coloring="balanced-cut", k=2, t=[5],
                                        trials=1))
    rep = run_ramsey(c)
    mono = [r for r in rep.rows if "mono-odd" in r.scenario]
    assert mono and all(r.t <= 7 for r in mono if r.outcome == "success")


def test_doubling_pattern_uses_all_colors():
    col = pattern_coloring(complete_graph(16), 3, "doubling")
    assert all(s > 0 for s in col.class_sizes())


@pytest.mark.parametrize("bad", [
    {"n": 2, "t": [3]},
    {"n": 50, "t": [51]},
    {"n": 50, "t": [10], "deletion": "maybe"},
    {"n": 50, "t": [10], "colour": "x"},
    {"n": 50, "t": [10], "p": 1.5},
    {"n": 50},
])
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        c = ExperimentConfig.from_dict(bad)
        c.t_values()


def test_unknown_experiment_kind():
    with pytest.raises(ConfigError):
        run_experiment("census", cfg())
