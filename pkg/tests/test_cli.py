import json
import subprocess
import sys

import numpy as np
import pytest

from oscnet.cli import main
from oscnet.dynamics import parse_trajectory_csv, parse_trajectory_json
from oscnet.graph import build_graph, dump_graph, load_graph
from oscnet.matrixio import parse_matrix_csv, parse_pattern_grid


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def graphs(tmp_path, capsys):
    paths = {}
    for kind, extra in [
        ("complete", ["--n", 3]),
        ("path", ["--n", 4]),
        ("two-cluster", ["--sizes", "6,6", "--intra", 1.0, "--bridge", 0.1, "--bridges", 2, "--seed", 7]),
    ]:
        p = tmp_path / f"{kind}.json"
        assert run(capsys, "gen", kind, *extra, "--out", p)[0] == 0
        paths[kind] = p
    return paths


def test_gen_complete(capsys):
    code, out, _ = run(capsys, "gen", "complete", "--n", 5)
    assert code == 0
    assert len(json.loads(out)["edges"]) == 20


def test_gen_path_and_edgelist(tmp_path, capsys):
    p = tmp_path / "p4.txt"
    assert run(capsys, "gen", "path", "--n", 4, "--out", p)[0] == 0
    g = load_graph(p)
    assert g.n == 4 and g.num_edges == 6


def test_gen_deterministic(capsys):
    a = run(capsys, "gen", "random", "--n", 9, "--seed", 4)[1]
    b = run(capsys, "gen", "random", "--n", 9, "--seed", 4)[1]
    c = run(capsys, "gen", "random", "--n", 9, "--seed", 5)[1]
    assert a == b and a != c


def test_gen_invalid(capsys):
    code, _, err = run(capsys, "gen", "two-cluster", "--sizes", "2,6")
    assert code == 2 and "error" in err


def test_analyze_k3(graphs, capsys):
    code, out, _ = run(capsys, "analyze", graphs["complete"])
    rep = json.loads(out)
    assert code == 0
    np.testing.assert_allclose(rep["eigenvalues"], [0, 3, 3], atol=1e-12)
    assert rep["sqrt_pattern"] is True
    assert rep["hamiltonian_pattern_matches"] is True
    assert all(rep["algebra"].values())


def test_analyze_path(graphs, capsys):
    rep = json.loads(run(capsys, "analyze", graphs["path"])[1])
    assert rep["sqrt_pattern"] is False
    assert rep["hamiltonian_pattern_matches"] is True


def test_analyze_isolated_node(tmp_path, capsys):
    p = tmp_path / "iso.json"
    dump_graph(build_graph(3, [(0, 1, 1.0), (1, 0, 1.0)]), p)
    code, _, err = run(capsys, "analyze", p)
    assert code == 3
    assert "node 2" in err


def test_analyze_complex_spectrum(tmp_path, capsys):
    p = tmp_path / "cyc.json"
    dump_graph(build_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]), p)
    assert run(capsys, "analyze", p)[0] == 3


def test_missing_file_is_io_error(tmp_path, capsys):
    assert run(capsys, "analyze", tmp_path / "nope.json")[0] == 4


def test_simulate_bosonic_refused(graphs, tmp_path, capsys):
    code, _, err = run(capsys, "simulate", graphs["path"], "--solver", "bosonic", "--out", tmp_path / "b.csv")
    assert code == 3
    assert "sqrt_pattern=false" in err


def test_simulate_bosonic_forced(graphs, tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, text, _ = run(capsys, "simulate", graphs["path"], "--solver", "bosonic", "--force", "--out", out, "--t-max", 1)
    summary = json.loads(text)
    assert code == 0 and summary["admissible"] is False
    t, z = parse_trajectory_csv(out.read_text())
    assert len(t) == summary["samples"] and z.shape[1] == 4


def test_simulate_fermionic_vs_oracle(graphs, tmp_path, capsys):
    out = tmp_path / "f.json"
    code, text, _ = run(capsys, "simulate", graphs["complete"], "--solver", "fermionic", "--out", out)
    summary = json.loads(text)
    assert code == 0
    assert summary["oracle_max_rel_deviation"] <= 1e-6
    meta, t, z = parse_trajectory_json(out.read_text())
    assert meta["solver"] == "fermionic"


def test_simulate_fermionic_matches_oracle_output(graphs, tmp_path, capsys):
    a, b = tmp_path / "f.csv", tmp_path / "o.csv"
    run(capsys, "simulate", graphs["two-cluster"], "--solver", "fermionic", "--no-check", "--out", a)
    run(capsys, "simulate", graphs["two-cluster"], "--solver", "oracle", "--out", b)
    _, za = parse_trajectory_csv(a.read_text())
    _, zb = parse_trajectory_csv(b.read_text())
    assert np.max(np.abs(za - zb)) / np.max(np.abs(za)) <= 1e-6


def test_simulate_oracle_energy(graphs, tmp_path, capsys):
    summary = json.loads(run(capsys, "simulate", graphs["complete"], "--solver", "oracle", "--out", tmp_path / "o.csv")[1])
    assert summary["energy_max_drift"] <= 1e-6 * summary["energy_initial"]


def test_simulate_init_file(graphs, tmp_path, capsys):
    init = tmp_path / "x.json"
    init.write_text(json.dumps([[1, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0]]))
    out = tmp_path / "f.csv"
    code = run(capsys, "simulate", graphs["complete"], "--init-file", init, "--no-check", "--out", out, "--t-max", 0)[0]
    assert code == 0
    _, z = parse_trajectory_csv(out.read_text())
    np.testing.assert_allclose(z[0], [1, 0, 0], atol=1e-12)


def write_config(tmp_path, graph, theta, name="cfg.json"):
    cfg = {
        "graph": str(graph),
        "theta": theta,
        "clique_weight": 1.0,
        "potential": {"a": -1.0, "b": 1.0},
        "time": {"t_max": 2.0, "dt": 0.1},
        "init": {"seed": 3},
    }
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_polarize_two_clusters(graphs, tmp_path, capsys):
    cfg = write_config(tmp_path, graphs["two-cluster"], 0.5)
    out = tmp_path / "run"
    code, text, _ = run(capsys, "polarize", cfg, "--out-dir", out)
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert len(rep["components"]) == 2
    assert (rep["zero_modes_pre"], rep["zero_modes_post"]) == (1, 2)
    assert rep["sqrt_pattern_pre"] is False and rep["sqrt_pattern_post"] == [True, True]
    for name in ("pre.csv", "component_0.csv", "component_1.csv"):
        parse_trajectory_csv((out / name).read_text())


def test_polarize_theta_zero(graphs, tmp_path, capsys):
    cfg = write_config(tmp_path, graphs["two-cluster"], 0.0)
    out = tmp_path / "run0"
    assert run(capsys, "polarize", cfg, "--out-dir", out)[0] == 0
    rep = json.loads((out / "report.json").read_text())
    assert len(rep["components"]) == 1


def test_polarize_inline_generator(tmp_path, capsys):
    cfg = {"graph": {"generate": {"kind": "two-cluster", "sizes": [5, 5], "seed": 1}}, "theta": 0.5}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    out = tmp_path / "g"
    assert run(capsys, "polarize", p, "--out-dir", out)[0] == 0


def test_polarize_malformed(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "polarize", p)
    assert code == 2 and "error" in err


def test_export_roundtrip(graphs, tmp_path, capsys):
    out = tmp_path / "exp"
    assert run(capsys, "export", graphs["path"], "--out-dir", out)[0] == 0
    L = parse_matrix_csv((out / "L.csv").read_text())
    expected = [[1, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 1]]
    np.testing.assert_array_equal(L, expected)
    S = parse_matrix_csv((out / "sqrtL.csv").read_text())
    np.testing.assert_allclose(S @ S, L, atol=1e-12)
    assert parse_matrix_csv((out / "H_hat.csv").read_text()).shape == (8, 8)
    blocks = parse_pattern_grid((out / "H_hat_blocks.pbm").read_text())
    np.testing.assert_array_equal(blocks, L != 0)


def test_output_dir_env(graphs, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("OSCNET_OUTPUT_DIR", str(tmp_path / "envdir"))
    assert run(capsys, "simulate", graphs["complete"], "--no-check", "--t-max", 1)[0] == 0
    assert (tmp_path / "envdir" / "trajectory.csv").exists()


def test_module_entry_point(graphs):
    proc = subprocess.run([sys.executable, "-m", "oscnet", "analyze", str(graphs["complete"])], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["zero_mode_count"] == 1
