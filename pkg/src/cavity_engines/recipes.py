"""Plot-ready coupling sweeps over reference parameter sets."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

from . import __version__
from .cycles import StirlingSpec
from .entanglement import correlation_work_profile
from .spectra import FourLevelParams
from .sweep import SweepConfig, format_table, grid_values, run_sweep

__all__ = ["RECIPES", "Recipe", "UnknownRecipe", "run_recipe", "write_recipe"]


class UnknownRecipe(KeyError):
    pass


@dataclass(frozen=True)
class Recipe:
    name: str
    model: str
    defaults: dict
    note: str = ""


_JC_STIRLING = dict(n=3, t_hot=4.0, t_cold=1.0, g_fixed=0.1, omega_a=3.0, omega_c=1.0)
_JC_OTTO = dict(n=3, t_hot=4.0, t_cold=1.0, g_fixed=0.1, omega_a=3.0, omega_c=0.5)
_FL_ENGINE = dict(n=1, t_hot=4.0, t_cold=1.0, g_fixed=1.0, k=1.0, J=0.2)
_FL_ROBUST = dict(n=3, t_hot=4.0, t_cold=1.0, g_fixed=1.0, k=0.1, J=1.0)


def _grid(start, stop, count):
    return dict(grid_start=start, grid_stop=stop, grid_count=count)


RECIPES = {
    r.name: r
    for r in (
        Recipe("jc-stirling", "jc", {**_JC_STIRLING, **_grid(0.1, 20.0, 399)},
               "g is the coupling at states A and D; g_fixed holds at B and C"),
        Recipe("jc-stirling-photons", "jc", {**_JC_STIRLING, **_grid(0.1, 20.0, 399), "photons": "1,3,10"},
               "work for several photon sectors"),
        Recipe("jc-otto", "jc", {**_JC_OTTO, **_grid(0.05, 5.0, 496)},
               "g is the hot-isochore coupling; g_fixed the cold one"),
        Recipe("jc-compare", "jc", {**_JC_OTTO, **_grid(0.1, 5.0, 491)},
               "omega_c = 0.5 here, 1.0 in jc-stirling"),
        Recipe("fourlevel-stirling", "four-level", {**_FL_ENGINE, **_grid(1.01, 5.0, 400)},
               "grid starts one step above g_fixed"),
        Recipe("fourlevel-otto", "four-level", {**_FL_ENGINE, **_grid(0.05, 5.0, 496)}, ""),
        Recipe("fourlevel-compare", "four-level", {**_FL_ROBUST, **_grid(0.1, 5.0, 491)}, ""),
        Recipe("concurrence", "four-level", {**_FL_ROBUST, **_grid(0.01, 3.0, 300)},
               "swept g binds to Stirling states B and C; g_fixed is the coupling at A and D; "
               "scaled_work = W / max|W| over the grid"),
    )
}


def _coerce(recipe: Recipe, overrides: dict) -> dict:
    params = dict(recipe.defaults)
    for key, raw in (overrides or {}).items():
        if key not in params:
            raise ValueError(
                f"recipe {recipe.name} has no parameter '{key}'; valid: {', '.join(sorted(params))}"
            )
        default = params[key]
        try:
            if isinstance(default, str):
                params[key] = str(raw)
            elif isinstance(default, int):
                params[key] = int(raw)
            else:
                params[key] = float(raw)
        except ValueError:
            raise ValueError(f"bad value for '{key}': {raw!r}") from None
    return params


def _config(model, cycle, params, n=None, orientation="standard") -> SweepConfig:
    keys = ("t_hot", "t_cold", "g_fixed") + (("omega_a", "omega_c") if model == "jc" else ("k", "J"))
    fixed = {k: params[k] for k in keys}
    fixed["n"] = params["n"] if n is None else n
    return SweepConfig(
        model=model,
        cycle=cycle,
        sweep="g",
        start=params["grid_start"],
        stop=params["grid_stop"],
        count=params["grid_count"],
        fixed=fixed,
        orientation=orientation,
    )


_STANDARD = ("g", "Q_h", "Q_c", "W", "eta", "eta_carnot")


def _standard(model, cycle, params):
    rows = run_sweep(_config(model, cycle, params))
    return _STANDARD, [r.as_tuple(("value",) + _STANDARD[1:]) for r in rows]


def _photons(params):
    ns = [int(x) for x in str(params["photons"]).split(",") if x.strip()]
    sweeps = [run_sweep(_config("jc", "stirling", params, n=n)) for n in ns]
    cols = ("g",) + tuple(f"W_n{n}" for n in ns)
    rows = [(sweeps[0][i].value,) + tuple(s[i].W for s in sweeps) for i in range(len(sweeps[0]))]
    return cols, rows


def _compare(model, params):
    st = run_sweep(_config(model, "stirling", params))
    ot = run_sweep(_config(model, "otto", params))
    cols = ("g", "W_stirling", "eta_stirling", "W_otto", "eta_otto")
    rows = [(a.value, a.W, a.eta, b.W, b.eta) for a, b in zip(st, ot)]
    return cols, rows


def _concurrence(params):
    grid = grid_values(params["grid_start"], params["grid_stop"], params["grid_count"])
    base = FourLevelParams(params["g_fixed"], params["k"], params["J"], params["n"])
    spec = StirlingSpec(params["t_hot"], params["t_cold"], params["g_fixed"], params["g_fixed"], base)
    points = correlation_work_profile(base, spec, grid)
    cols = ("g", "C_hot", "C_cold", "delta_C", "W", "scaled_work")
    rows = [(p.g, p.C_hot, p.C_cold, p.delta_C, p.work, p.scaled_work) for p in points]
    return cols, rows


def run_recipe(name: str, overrides: dict | None = None) -> tuple:
    """Evaluate a recipe; returns ``(columns, rows, metadata)``."""
    if name not in RECIPES:
        raise UnknownRecipe(name)
    recipe = RECIPES[name]
    params = _coerce(recipe, overrides)
    if name in ("jc-stirling", "fourlevel-stirling"):
        cols, rows = _standard(recipe.model, "stirling", params)
    elif name in ("jc-otto", "fourlevel-otto"):
        cols, rows = _standard(recipe.model, "otto", params)
    elif name in ("jc-compare", "fourlevel-compare"):
        cols, rows = _compare(recipe.model, params)
    elif name == "jc-stirling-photons":
        cols, rows = _photons(params)
    else:
        cols, rows = _concurrence(params)

    blob = json.dumps({"recipe": name, "params": params}, sort_keys=True, separators=(",", ":"))
    meta = {
        "tool": f"cavity-engines {__version__}",
        "recipe": name,
        "model": recipe.model,
        "params": params,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
    }
    if recipe.note:
        meta["note"] = recipe.note
    return cols, rows, meta


def write_recipe(name: str, out_dir, overrides: dict | None = None) -> str:
    cols, rows, meta = run_recipe(name, overrides)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name}.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_table(cols, rows, meta))
    return path
