"""Parameter sweeps over engine cycles and their CSV / JSON emission."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .cycles import OttoSpec, StirlingSpec, run_otto, run_stirling
from .entanglement import concurrence_x_state, reduced_thermal_state
from .parallel import ordered_map
from .spectra import FourLevelParams, JCParams

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "SweepConfig",
    "SweepRow",
    "load_config",
    "parse_config",
    "grid_values",
    "build_cycle",
    "run_sweep",
    "format_csv",
    "format_json",
    "BASE_COLUMNS",
    "ENTANGLEMENT_COLUMNS",
]

MODELS = ("jc", "four-level")
CYCLES = ("stirling", "otto")
SCALES = ("linear", "log")
ORIENTATIONS = ("standard", "swapped")
FORMATS = ("csv", "json")

PHYSICS_KEYS = {
    "jc": ("t_hot", "t_cold", "n", "g", "g_fixed", "omega_a", "omega_c"),
    "four-level": ("t_hot", "t_cold", "n", "g", "g_fixed", "k", "J"),
}
CONTROL_KEYS = (
    "model", "cycle", "sweep", "start", "stop", "count", "scale",
    "orientation", "format", "output", "concurrence",
)
ALL_KEYS = set(CONTROL_KEYS) | {k for keys in PHYSICS_KEYS.values() for k in keys}

BASE_COLUMNS = ("value", "Q_h", "Q_c", "W", "eta", "eta_carnot")
ENTANGLEMENT_COLUMNS = ("C_hot", "C_cold", "delta_C")


class ConfigError(ValueError):
    """Invalid sweep configuration; ``key`` and ``line`` locate the problem when known."""

    def __init__(self, message, key=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.message = message
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SweepConfig:
    """One swept parameter over a grid, everything else fixed.

    ``g`` is the swept-side coupling and ``g_fixed`` the other one.  With the
    standard orientation ``g`` binds to the Stirling ``g_start`` (states A, D)
    or the Otto ``g_hot``; ``orientation="swapped"`` exchanges the roles.
    """

    model: str
    cycle: str
    sweep: str
    start: float
    stop: float
    count: int
    fixed: dict
    scale: str = "linear"
    orientation: str = "standard"
    format: str = "csv"
    output: str | None = None
    concurrence: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"must be one of {', '.join(MODELS)}", "model")
        if self.cycle not in CYCLES:
            raise ConfigError(f"must be one of {', '.join(CYCLES)}", "cycle")
        if self.scale not in SCALES:
            raise ConfigError(f"must be one of {', '.join(SCALES)}", "scale")
        if self.orientation not in ORIENTATIONS:
            raise ConfigError(f"must be one of {', '.join(ORIENTATIONS)}", "orientation")
        if self.format not in FORMATS:
            raise ConfigError(f"must be one of {', '.join(FORMATS)}", "format")
        allowed = PHYSICS_KEYS[self.model]
        if self.sweep not in allowed:
            raise ConfigError(
                f"cannot sweep '{self.sweep}' for model {self.model}; choose from {', '.join(allowed)}",
                "sweep",
            )
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 1:
            raise ConfigError("must be an integer >= 1", "count")
        if self.count > 1 and not self.start < self.stop:
            raise ConfigError("start must be below stop when count > 1", "start")
        if self.scale == "log" and self.start <= 0:
            raise ConfigError("log scale requires start > 0", "start")
        if self.concurrence and self.model != "four-level":
            raise ConfigError("concurrence columns need the four-level model", "concurrence")
        for key in self.fixed:
            if key not in allowed:
                raise ConfigError(f"not a parameter of model {self.model}", key)
        if self.sweep in self.fixed:
            raise ConfigError("swept parameter must not also have a fixed value", self.sweep)
        missing = [k for k in allowed if k != self.sweep and k not in self.fixed]
        if missing:
            raise ConfigError(f"missing fixed parameters: {', '.join(missing)}")

    @property
    def columns(self) -> tuple:
        return BASE_COLUMNS + (ENTANGLEMENT_COLUMNS if self.concurrence else ())

    def canonical(self) -> dict:
        """Config content that determines the data (output location excluded)."""
        return {
            "model": self.model,
            "cycle": self.cycle,
            "sweep": self.sweep,
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "scale": self.scale,
            "orientation": self.orientation,
            "concurrence": self.concurrence,
            "fixed": dict(sorted(self.fixed.items())),
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class SweepRow:
    value: float
    Q_h: float
    Q_c: float
    W: float
    eta: float
    eta_carnot: float
    extra: dict = field(default_factory=dict)

    def as_tuple(self, columns) -> tuple:
        data = {
            "value": self.value,
            "Q_h": self.Q_h,
            "Q_c": self.Q_c,
            "W": self.W,
            "eta": self.eta,
            "eta_carnot": self.eta_carnot,
            **self.extra,
        }
        return tuple(data[c] for c in columns)


def _key_line(text: str, key: str):
    for i, line in enumerate(text.splitlines(), 1):
        if line.split("=", 1)[0].strip() == key:
            return i
    return None


def _number(data, key, text, kind=float):
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key, _key_line(text, key))
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"expected an integer, got {value!r}", key, _key_line(text, key))
        return int(value)
    return float(value)


def parse_config(text: str) -> SweepConfig:
    """Parse the flat ``key = value`` (TOML) sweep configuration."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None

    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError("nested tables are not supported; use flat keys", key, _key_line(text, key))
    for key, choices in (("model", MODELS), ("cycle", CYCLES)):
        if key in data and data[key] not in choices:
            raise ConfigError(f"must be one of {', '.join(choices)}", key, _key_line(text, key))
    for key in data:
        if key not in ALL_KEYS:
            raise ConfigError("unknown key", key, _key_line(text, key))

    for key in ("model", "cycle", "sweep", "start", "stop", "count"):
        if key not in data:
            raise ConfigError("required key is missing", key)

    model = data["model"]
    fixed = {}
    for key in PHYSICS_KEYS.get(model, ()):
        if key in data:
            fixed[key] = _number(data, key, text, int if key == "n" else float)
    stray = [k for k in data if k not in CONTROL_KEYS and k not in fixed]
    if stray:
        key = stray[0]
        raise ConfigError(f"not a parameter of model {model}", key, _key_line(text, key))

    try:
        return SweepConfig(
            model=model,
            cycle=data["cycle"],
            sweep=data["sweep"],
            start=_number(data, "start", text),
            stop=_number(data, "stop", text),
            count=_number(data, "count", text, int),
            fixed=fixed,
            scale=data.get("scale", "linear"),
            orientation=data.get("orientation", "standard"),
            format=data.get("format", "csv"),
            output=data.get("output"),
            concurrence=bool(data.get("concurrence", False)),
        )
    except ConfigError as exc:
        if exc.key is not None and exc.line is None:
            raise ConfigError(exc.message, exc.key, _key_line(text, exc.key)) from None
        raise


def load_config(path) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def grid_values(start, stop, count, scale="linear") -> np.ndarray:
    if count == 1:
        return np.array([float(start)])
    if scale == "log":
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _substance(model, params):
    if model == "jc":
        return JCParams(params["omega_a"], params["omega_c"], params["n"], params["g"])
    return FourLevelParams(params["g"], params["k"], params["J"], params["n"])


def build_cycle(model, cycle, params, orientation="standard"):
    """Return ``(spec, runner)`` for one fully bound parameter set."""
    sub = _substance(model, params)
    swept, other = params["g"], params["g_fixed"]
    if orientation == "swapped":
        swept, other = other, swept
    if cycle == "stirling":
        return StirlingSpec(params["t_hot"], params["t_cold"], swept, other, sub), run_stirling
    return OttoSpec(params["t_hot"], params["t_cold"], other, swept, sub), run_otto


def _evaluate(config: SweepConfig, value: float) -> SweepRow:
    params = dict(config.fixed)
    params[config.sweep] = int(round(value)) if config.sweep == "n" else float(value)
    spec, runner = build_cycle(config.model, config.cycle, params, config.orientation)
    r = runner(spec)
    extra = {}
    if config.concurrence:
        p = replace(spec.substance, g=params["g"])
        c_hot = concurrence_x_state(reduced_thermal_state(p, params["t_hot"]))
        c_cold = concurrence_x_state(reduced_thermal_state(p, params["t_cold"]))
        extra = {"C_hot": c_hot, "C_cold": c_cold, "delta_C": c_cold - c_hot}
    return SweepRow(float(value), r.Q_h, r.Q_c, r.W, r.eta, r.eta_carnot, extra)


def run_sweep(config: SweepConfig, workers=None) -> list:
    values = grid_values(config.start, config.stop, config.count, config.scale)
    if config.sweep == "n":
        values = np.unique(np.round(values))
    try:
        return ordered_map(lambda v: _evaluate(config, v), values, workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{x:.12g}"


def metadata_lines(meta: dict) -> list:
    return [f"# {key}: {json.dumps(value, sort_keys=True)}" for key, value in meta.items()]


def format_table(columns, rows, meta: dict) -> str:
    lines = metadata_lines(meta)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def sweep_metadata(config: SweepConfig) -> dict:
    return {
        "tool": f"cavity-engines {__version__}",
        "config_sha256": config.config_hash(),
        "config": config.canonical(),
    }


def format_csv(config: SweepConfig, rows) -> str:
    cols = config.columns
    return format_table(cols, [r.as_tuple(cols) for r in rows], sweep_metadata(config))


def format_json(config: SweepConfig, rows) -> str:
    cols = config.columns

    def clean(x):
        return None if isinstance(x, float) and math.isnan(x) else x

    doc = {
        "metadata": sweep_metadata(config),
        "columns": list(cols),
        "rows": [dict(zip(cols, map(clean, r.as_tuple(cols)))) for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"
