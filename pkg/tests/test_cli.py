import json
import subprocess
import sys

import pytest

from maxcutbench import formats
from maxcutbench.cli import main
from maxcutbench.exact import brute_force
from maxcutbench.graph import Graph, cut_value
from oracles import random_edges


@pytest.fixture
def instance(tmp_path, rng):
    g = Graph.from_edges(10, random_edges(rng, 10))
    p = tmp_path / "be10.1.mc"
    formats.write_edge_list(g, p)
    return g, p


def test_solve_exact(instance, capsys, tmp_path):
    g, p = instance
    assert main(["solve", str(p), "--solver", "exact", "--cut-out", str(tmp_path / "x.txt")]) == 0
    out = json.loads(capsys.readouterr().out)
    opt = brute_force(g).optimum
    assert out["cut"] == opt and out["value"] == -opt and out["optimal"]
    assert cut_value(g, formats.read_cut_vector(tmp_path / "x.txt")) == opt


def test_solve_sa_is_reproducible(instance, capsys):
    _, p = instance
    args = ["solve", str(p), "--preset", "sa1", "--seed", "3", "--restarts", "2",
            "--dataset", "custom"]
    main(args)
    a = json.loads(capsys.readouterr().out)
    main(args)
    b = json.loads(capsys.readouterr().out)
    a.pop("time_s"), b.pop("time_s")
    assert a == b and a["value"] == a["cut"]
    assert a["moves_attempted"] == 2 * 56_444


def test_solve_schedule_overrides(instance, capsys, tmp_path):
    _, p = instance
    cfg = tmp_path / "sched.json"
    cfg.write_text(json.dumps({"initial_temp": 10.0, "decrement": 0.5}))
    main(["solve", str(p), "--schedule-config", str(cfg), "--moves-per-temp", "3"])
    out = json.loads(capsys.readouterr().out)
    # 10 * 0.5^k >= 0.125 for k = 0..6
    assert out["moves_attempted"] == 7 * 3


def test_bad_schedule_exit_code(instance, capsys):
    _, p = instance
    assert main(["solve", str(p), "--decrement", "1.5"]) == 2
    assert "decrement" in capsys.readouterr().err


def test_parse_error_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.mc"
    p.write_text("3 2\n1 2 1\n2 x 1\n")
    assert main(["solve", str(p), "--solver", "exact"]) == 2
    assert ":3" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "none.mc")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_convert_and_back(instance, tmp_path, capsys):
    g, p = instance
    assert main(["convert", str(p), str(tmp_path / "L.txt"), "--to", "laplacian"]) == 0
    assert main(["convert", str(tmp_path / "L.txt"), str(tmp_path / "g.mc"),
                 "--from", "laplacian", "--to", "edge-list"]) == 0
    assert formats.read_edge_list(tmp_path / "g.mc") == g


def test_convert_qubo_prints_identity(tmp_path, capsys):
    (tmp_path / "q.txt").write_text("2 2\n1 1 -3\n1 2 2\n")
    assert main(["convert", str(tmp_path / "q.txt"), str(tmp_path / "q.mc"),
                 "--from", "qubo-sparse", "--to", "edge-list"]) == 0
    info = json.loads(capsys.readouterr().err)
    assert info["factor"] == -1 and info["offset"] == 0


def test_bench_outputs(instance, tmp_path, capsys):
    g, p = instance
    man = tmp_path / "m.json"
    man.write_text(json.dumps({
        "instances": [{"name": "be10.1", "path": p.name, "dataset": "be"}],
        "solvers": [{"id": "exact", "kind": "exact"}],
    }))
    ext = tmp_path / "ext.jsonl"
    ext.write_text(json.dumps({"instance": "be10.1", "solver": "X", "value": -1}) + "\n")
    rc = main(["bench", "--manifest", str(man), "--external", str(ext),
               "--solver", '{"id": "sa1", "kind": "sa", "preset": "sa1"}',
               "--output", str(tmp_path / "r.csv"), "--summary", str(tmp_path / "s.csv")])
    assert rc == 0
    rows = (tmp_path / "r.csv").read_bytes().split(b"\r\n")
    assert rows[0] == b"instance,dataset,solver,value,best_known,gap"
    assert len([r for r in rows if r]) == 4
    assert b"exact" in (tmp_path / "s.csv").read_bytes()
    main(["bench", "--manifest", str(man), "--out", "md", "--timings"])
    assert "time_s" in capsys.readouterr().out


def test_validate_exit_codes(instance, tmp_path, capsys):
    g, p = instance
    r = brute_force(g)
    d = tmp_path / "set"
    d.mkdir()
    formats.write_edge_list(g, d / "be10.1.mc")
    formats.write_cut_vector(r.witness, d / "be10.1_opt_cut.txt")
    formats.write_opt_value(-r.optimum, d / "be10.1_opt_value.txt")
    assert main(["validate", str(d)]) == 0
    assert "1/1" in capsys.readouterr().out
    formats.write_opt_value(-r.optimum + 1, d / "be10.1_opt_value.txt")
    assert main(["validate", str(d)]) == 1
    assert "FAIL be10.1" in capsys.readouterr().err


def test_module_entry_point(instance):
    _, p = instance
    proc = subprocess.run([sys.executable, "-m", "maxcutbench", "solve", str(p), "--solver", "bb"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["optimal"] is True
