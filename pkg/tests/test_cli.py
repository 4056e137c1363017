import json
import subprocess
import sys

import pytest

from pathfree.cli import main
from pathfree.graphcore import cycle_graph, save_edge_list
from pathfree.suites import ConfigError, ExperimentConfig, central_difference, run_suite


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "pathfree", *args], capture_output=True, text=True)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["gen", "gnp", "30", "0.2", "--seed", "7", "--out", str(a)]) == 0
    assert main(["gen", "gnp", "30", "0.2", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_on_c5(tmp_path, capsys):
    f = tmp_path / "c5.txt"
    save_edge_list(cycle_graph(5), f)
    assert main(["oracle", str(f), "p5free"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] is True


def test_ordered_oracle_needs_colors(tmp_path):
    f = tmp_path / "c5.txt"
    save_edge_list(cycle_graph(5), f)
    assert main(["oracle", str(f), "orderedp5"]) == 2


def test_parse_error_reports_line(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("3 2\n0 1\n1 q\n")
    assert main(["oracle", str(f), "connected"]) == 2
    assert "3" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    f = tmp_path / "c5.txt"
    save_edge_list(cycle_graph(5), f)
    r = run_cli("p5", str(f))
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["p5_free"] is True
    assert run_cli("nonsense").returncode == 2


@pytest.mark.parametrize("cmd", [["p4"], ["quantum-c4"], ["certify"]])
def test_commands_on_c5(tmp_path, capsys, cmd):
    f = tmp_path / "c5.txt"
    save_edge_list(cycle_graph(5), f)
    assert main([*cmd, str(f)]) in (0, 1)
    json.loads(capsys.readouterr().out)


def test_gadget_command(tmp_path, capsys):
    assert main(["gadget", "P11_d1", "--n", "2", "--x", "1000", "--y", "1000", "--check"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "pass" and out["cut"] == 4


def test_bad_config_is_usage_error(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"suite": "nope"})
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert main(["suite", "--config", str(cfg)]) == 2


def test_gadget_suite_exhaustive(tmp_path):
    rep = run_suite(ExperimentConfig("gadgets", params={"family": "P11_d1", "n": 2},
                                     out_dir=str(tmp_path)))
    assert len(rep.rows) == 256 and rep.passed
    first = (tmp_path / "gadgets.csv").read_bytes()
    run_suite(ExperimentConfig("gadgets", params={"family": "P11_d1", "n": 2},
                               out_dir=str(tmp_path)))
    assert (tmp_path / "gadgets.csv").read_bytes() == first


def test_p5_suite_small_corpus():
    rep = run_suite(ExperimentConfig("p5", params={"max_n": 6, "random": 4, "n_range": [10, 14]}))
    assert rep.passed
    assert all(r["agree"] for r in rep.rows)


def test_scaling_quantum_row():
    rep = run_suite(ExperimentConfig("scaling", params={"target": "quantum-c4",
                                                        "sizes": [256, 512, 1024, 2048]}))
    assert rep.rows and "exponent" in rep.summary


def test_central_difference_zero_without_hidden_edges():
    g = cycle_graph(5)
    assert central_difference(g, set()) == 0
