import csv
import json

import numpy as np
import pytest

from rumorcontain import cli
from rumorcontain.graphs import load_edge_list, load_graph

from oracles import is_connected

M1 = {
    "rumor_network": {"model": "named", "index": 1},
    "truth_network": {"model": "named", "index": 1},
    "beta1": 0.7, "beta2": 0.1, "delta": 0.1, "horizon": 35,
    "budget": 10, "c1": 8, "c2": 3,
}


def write_config(tmp_path, name="cfg.json", **overrides):
    path = tmp_path / name
    path.write_text(json.dumps(dict(M1, **overrides)))
    return str(path)


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_parse_values():
    assert cli.parse_values("0.1:0.9:0.1") == [round(0.1 * k, 12) for k in range(1, 10)]
    assert cli.parse_values("0.5:0.5:0.1") == [0.5]
    assert cli.parse_values("10:30:2")[-1] == 30
    assert cli.parse_values("1,2.5,4") == [1.0, 2.5, 4.0]
    for bad in ("1:2", "1:0:1", "0:1:0", "a,b"):
        with pytest.raises(cli.UsageError):
            cli.parse_values(bad)


def test_graph_gen_named(tmp_path):
    out = tmp_path / "g4.edges"
    assert cli.main(["graph", "gen", "--model", "named", "--index", "4", "--out", str(out)]) == 0
    g = load_edge_list(out)
    assert g.n == 4 and g.is_symmetric and g.num_arcs == 6


def test_graph_gen_ws_and_ba(tmp_path):
    ws, ba = tmp_path / "ws.edges", tmp_path / "ba.json"
    assert cli.main(["graph", "gen", "--model", "ws", "--n", "50", "--k", "4", "--p", "0.1",
                     "--seed", "1", "--out", str(ws)]) == 0
    g = load_edge_list(ws)
    assert g.n == 50 and len(g.undirected_edges()) == 100
    assert cli.main(["graph", "gen", "--model", "ba", "--n", "50", "--m", "2", "--out", str(ba)]) == 0
    assert is_connected(load_graph(ba).adj)


def test_graph_gen_missing_option(tmp_path, capsys):
    assert cli.main(["graph", "gen", "--model", "ws", "--out", str(tmp_path / "x")]) == 2
    assert "--n" in capsys.readouterr().err


def test_graph_convert_round_trip(tmp_path):
    src = tmp_path / "a.edges"
    src.write_text("# path\n0 1\n1 2\n")
    js, back = tmp_path / "a.json", tmp_path / "b.edges"
    assert cli.main(["graph", "convert", "--in", str(src), "--out", str(js), "--symmetric"]) == 0
    assert cli.main(["graph", "convert", "--in", str(js), "--out", str(back)]) == 0
    assert load_graph(js) == load_graph(back)
    assert load_graph(back).num_arcs == 4


def test_graph_convert_parse_error(tmp_path, capsys):
    src = tmp_path / "bad.edges"
    src.write_text("0 1\n0 x\n")
    assert cli.main(["graph", "convert", "--in", str(src), "--out", str(tmp_path / "o.json")]) == 2
    assert f"{src}:2" in capsys.readouterr().err


def test_simulate_columns_and_manifest(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "traj.csv"
    assert cli.main(["simulate", "--config", cfg, "--gamma1", "0", "--gamma2", str(10 / 3),
                     "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["t", "R_0", "R_1", "T_0", "T_1", "accU", "accR"]
    assert data.shape == (3501, 7)
    assert data[-1, 0] == 35.0
    assert np.all(data[:, 1:5] >= 0) and np.all(data[:, 1:3] + data[:, 3:5] <= 1 + 1e-9)
    manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
    assert manifest["gamma1"] == 0 and manifest["eU"] == 0
    assert manifest["config"]["initial_state"] == 0.1


def test_simulate_zero_initial_state(tmp_path):
    cfg = write_config(tmp_path, initial_state=0.0)
    out = tmp_path / "z.csv"
    assert cli.main(["simulate", "--config", cfg, "--gamma1", "0.5", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert np.all(data[:, 1:] == 0)


def test_simulate_dt_halving(tmp_path):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, dt in ((a, "0.01"), (b, "0.005")):
        assert cli.main(["simulate", "--config", cfg, "--gamma1", "0.5", "--dt", dt,
                         "--out", str(path)]) == 0
    fa, fb = read_csv(a)[1][-1], read_csv(b)[1][-1]
    assert np.max(np.abs(fa - fb)) <= 1e-8


def test_simulate_rejects_off_budget(tmp_path, capsys):
    cfg = write_config(tmp_path)
    args = ["simulate", "--config", cfg, "--gamma1", "1", "--gamma2", "1", "--out", str(tmp_path / "o.csv")]
    assert cli.main(args) == 2
    assert "free-strategy" in capsys.readouterr().err
    assert cli.main(args + ["--free-strategy"]) == 0


def test_simulate_gamma1_out_of_range(tmp_path):
    cfg = write_config(tmp_path)
    assert cli.main(["simulate", "--config", cfg, "--gamma1", "2", "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_numerical_failure_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, beta1=80.0, beta2=80.0, delta=80.0)
    assert cli.main(["simulate", "--config", cfg, "--gamma1", "0.5", "--dt", "0.5",
                     "--out", str(tmp_path / "o.csv")]) == 3
    assert "numerical" in capsys.readouterr().err


def test_optimize_budget_identity(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert cli.main(["optimize", "--config", cfg]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(8 * doc["gamma1"] + 3 * doc["gamma2"] - 10) <= 1e-12 * 10
    assert doc["meta"]["config"]["beta1"] == 0.7
    assert "gridProfile" not in doc


def test_optimize_matches_dense_grid(tmp_path, m1):
    from rumorcontain.objective import effectiveness_many

    out = tmp_path / "opt.json"
    assert cli.main(["optimize", "--config", write_config(tmp_path), "--out", str(out), "--profile"]) == 0
    doc = json.loads(out.read_text())
    dense = effectiveness_many(m1, np.linspace(0, m1.max_gamma1, 1001))[3].max()
    assert doc["eTotal"] >= dense - 1e-6 * abs(dense)
    assert len(doc["gridProfile"]) == 101


def test_optimize_zero_budget(tmp_path, capsys):
    assert cli.main(["optimize", "--config", write_config(tmp_path, budget=0)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["gamma1"], doc["gamma2"], doc["eTotal"], doc["costEffectiveness"]) == (0, 0, 0, 0)


def test_optimize_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"beta1": 0.7,\n "beta2" 0.1}')
    assert cli.main(["optimize", "--config", str(bad)]) == 2
    assert f"{bad}:2:" in capsys.readouterr().err
    assert cli.main(["optimize", "--config", str(tmp_path / "missing.json")]) == 2


def test_sweep_ranges(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", cfg, "--param", "beta1", "--values", "0.1:0.9:0.1",
                     "--out", str(out)]) == 0
    header, data = read_csv_rows(out)
    assert header == ["param", "value", "gamma1", "gamma2", "eTotal", "costEffectiveness"]
    assert len(data) == 9 and all(r[0] == "beta1" for r in data)
    manifest = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert manifest["values"] == cli.parse_values("0.1:0.9:0.1")
    assert cli.main(["sweep", "--config", cfg, "--param", "beta1", "--values", "0.5:0.5:0.1",
                     "--out", str(out)]) == 0
    assert len(read_csv_rows(out)[1]) == 1


def read_csv_rows(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_sweep_unknown_parameter(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert cli.main(["sweep", "--config", cfg, "--param", "gamma1", "--values", "1,2",
                     "--out", str(tmp_path / "s.csv")]) == 2
    err = capsys.readouterr().err
    assert "beta1" in err and "c2" in err


def test_sweep_row_error_exit_code(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", cfg, "--param", "c1", "--values", "0,8",
                     "--out", str(out)]) == 2
    _, rows = read_csv_rows(out)
    assert rows[0][2] == "nan" and rows[1][2] != "nan"


def test_sweep_budget_single_peaked(tmp_path):
    cfg = write_config(
        tmp_path,
        rumor_network={"model": "ws", "n": 50, "k": 4, "p": 0.1},
        truth_network={"model": "ba", "n": 50, "m": 2},
        beta1=0.4, beta2=0.2, delta=0.8, horizon=60, c1=7, c2=9, budget=2,
    )
    out = tmp_path / "b.csv"
    assert cli.main(["--threads", "1", "sweep", "--config", cfg, "--param", "budget",
                     "--values", "2:18:2", "--out", str(out)]) == 0
    ce = np.array([float(r[5]) for r in read_csv_rows(out)[1]])
    signs = np.sign(np.diff(ce))
    assert len(ce) == 9 and np.count_nonzero(np.diff(signs[signs != 0])) == 1
