import json
import subprocess
import sys

import pytest

from cavity_engines.cli import main

JC_ARGS = [
    "cycle", "--model", "jc", "--cycle", "stirling", "--t-hot", "4", "--t-cold", "1",
    "--n", "3", "--omega-a", "3", "--omega-c", "1", "--g-start", "20", "--g-end", "0.1",
]

CONFIG = """\
model = "four-level"
cycle = "otto"
sweep = "g"
start = 0.5
stop = 2.0
count = 4
t_hot = 4.0
t_cold = 1.0
n = 1
g_fixed = 1.0
k = 1.0
J = 0.2
"""


def test_cycle_json(capsys):
    assert main(JC_ARGS) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["W"] == pytest.approx(1.759, rel=0.02)
    assert doc["parameters"]["g"] == 20 and doc["cycle"] == "stirling"


def test_cycle_null(capsys):
    args = list(JC_ARGS)
    args[args.index("20")] = "0.1"
    assert main(args) == 0
    assert json.loads(capsys.readouterr().out)["W"] == 0


def test_cycle_otto_null_eta(capsys):
    args = ["cycle", "--model", "jc", "--cycle", "otto", "--t-hot", "4", "--t-cold", "1", "--n", "3",
            "--omega-a", "3", "--omega-c", "0.5", "--g-hot", "3", "--g-cold", "0.1"]
    assert main(args) == 0
    assert json.loads(capsys.readouterr().out)["eta"] is None


@pytest.mark.parametrize(
    "edit, flag",
    [
        (("--t-cold", "5"), "--t-cold"),
        (("--n", "-1"), "--n"),
        (("--omega-a", "0"), "--omega-a"),
        (("--g-start", "-2"), "--g-start"),
    ],
)
def test_cycle_usage_errors(capsys, edit, flag):
    args = list(JC_ARGS)
    args[args.index(edit[0]) + 1] = edit[1]
    assert main(args) == 2
    assert flag in capsys.readouterr().err


def test_four_level_requires_k(capsys):
    args = ["cycle", "--model", "four-level", "--cycle", "otto", "--t-hot", "4", "--t-cold", "1",
            "--n", "1", "--J", "0.2", "--g-hot", "1.2", "--g-cold", "1"]
    assert main(args) == 2
    assert "--k" in capsys.readouterr().err


def test_sweep_to_file(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text(CONFIG)
    out = tmp_path / "s.csv"
    assert main(["sweep", str(cfg), "-o", str(out)]) == 0
    first = out.read_bytes()
    assert main(["sweep", str(cfg), "-o", str(out), "--workers", "3"]) == 0
    assert out.read_bytes() == first


def test_sweep_errors(tmp_path, capsys):
    assert main(["sweep", str(tmp_path / "missing.toml")]) == 1
    cfg = tmp_path / "bad.toml"
    cfg.write_text(CONFIG + "omega_a = 1.0\n")
    assert main(["sweep", str(cfg)]) == 2
    assert "omega_a" in capsys.readouterr().err
    cfg.write_text(CONFIG)
    assert main(["sweep", str(cfg), "-o", str(tmp_path / "no" / "dir.csv")]) == 1


def test_figures(tmp_path, capsys):
    assert main(["figures", "--which", "jc-otto", "--out", str(tmp_path), "--set", "grid_count=4"]) == 0
    assert (tmp_path / "jc-otto.csv").exists()
    assert main(["figures", "--which", "nonsense", "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "concurrence" in err and "jc-otto" in err
    assert main(["figures", "--which", "jc-otto", "--set", "grid_count"]) == 2


def test_validate_small(tmp_path):
    report = tmp_path / "r.json"
    assert main(["validate", "--grid", "20", "--report", str(report)]) == 0
    doc = json.loads(report.read_text())
    assert doc["overall"] is True and doc["seed"] == 42
    assert main(["validate", "--grid", "0"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cavity_engines", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "cavity-engines" in proc.stdout
