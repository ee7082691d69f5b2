import csv
import os

import pytest

from cavity_engines.recipes import RECIPES, UnknownRecipe, run_recipe, write_recipe


def test_every_recipe_runs_small():
    for name in RECIPES:
        cols, rows, meta = run_recipe(name, {"grid_count": 5})
        assert len(rows) == 5
        assert all(len(r) == len(cols) for r in rows)
        assert meta["recipe"] == name and len(meta["config_sha256"]) == 64


def test_overrides_change_hash():
    _, _, a = run_recipe("jc-otto", {"grid_count": 3})
    _, _, b = run_recipe("jc-otto", {"grid_count": 3, "t_hot": "5"})
    assert a["config_sha256"] != b["config_sha256"]
    assert b["params"]["t_hot"] == 5.0


def test_bad_override():
    with pytest.raises(ValueError, match="no parameter"):
        run_recipe("jc-otto", {"colour": "red"})
    with pytest.raises(ValueError, match="bad value"):
        run_recipe("jc-otto", {"t_hot": "warm"})


def test_unknown_recipe():
    with pytest.raises(UnknownRecipe):
        run_recipe("nope")


def test_photon_columns():
    cols, rows, _ = run_recipe("jc-stirling-photons", {"grid_count": 3, "photons": "0,2"})
    assert cols == ("g", "W_n0", "W_n2")


def test_write_is_deterministic(tmp_path):
    p1 = write_recipe("concurrence", tmp_path / "a", {"grid_count": 20})
    p2 = write_recipe("concurrence", tmp_path / "b", {"grid_count": 20})
    assert os.path.basename(p1) == "concurrence.csv"
    assert open(p1, "rb").read() == open(p2, "rb").read()
    with open(p1) as fh:
        body = [line for line in fh if not line.startswith("#")]
    rows = list(csv.reader(body))
    assert rows[0] == ["g", "C_hot", "C_cold", "delta_C", "W", "scaled_work"]
    assert len(rows) == 21
