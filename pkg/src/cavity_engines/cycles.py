"""Quasi-static Stirling and Otto cycles with a per-stroke heat ledger.

Sign convention: ``Q`` is heat flowing into the working substance and ``W``
is work delivered by it, so ``W = Q_h + Q_c`` and an engine has ``W > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .spectra import SubstanceSpec, spectrum, with_coupling
from .thermo import ThermoPotentials, check_temperature, populations, thermo_potentials

__all__ = [
    "StirlingSpec",
    "OttoSpec",
    "Stroke",
    "StrokeLedger",
    "CycleResult",
    "carnot_efficiency",
    "run_stirling",
    "run_otto",
    "positive_work_window",
]

_EQUAL_T = 1e-15


def _check_bath_pair(T_h, T_c, validation):
    T_h = check_temperature(T_h, "T_h")
    T_c = check_temperature(T_c, "T_c")
    if T_h - T_c <= _EQUAL_T * max(T_h, 1.0):
        if not (validation and abs(T_h - T_c) <= _EQUAL_T * max(T_h, 1.0)):
            raise ValueError(f"hot bath must be hotter than cold bath: T_h={T_h}, T_c={T_c}")
    return T_h, T_c


def _check_coupling(name, g):
    g = float(g)
    if not (math.isfinite(g) and g >= 0):
        raise ValueError(f"{name} must be a non-negative finite coupling, got {g!r}")
    return g


@dataclass(frozen=True)
class StirlingSpec:
    """Stirling cycle A -> B -> C -> D -> A.

    A = (T_h, g_start), B = (T_h, g_end), C = (T_c, g_end), D = (T_c, g_start).
    The coupling stored on ``substance`` is ignored; each anchor overrides it.
    ``validation`` admits ``T_h == T_c`` for null-cycle checks.
    """

    T_h: float
    T_c: float
    g_start: float
    g_end: float
    substance: SubstanceSpec
    validation: bool = False

    def __post_init__(self):
        T_h, T_c = _check_bath_pair(self.T_h, self.T_c, self.validation)
        object.__setattr__(self, "T_h", T_h)
        object.__setattr__(self, "T_c", T_c)
        object.__setattr__(self, "g_start", _check_coupling("g_start", self.g_start))
        object.__setattr__(self, "g_end", _check_coupling("g_end", self.g_end))


@dataclass(frozen=True)
class OttoSpec:
    """Otto cycle: cold isochore at ``g_cold``, adiabat, hot isochore at ``g_hot``, adiabat."""

    T_h: float
    T_c: float
    g_cold: float
    g_hot: float
    substance: SubstanceSpec
    validation: bool = False

    def __post_init__(self):
        T_h, T_c = _check_bath_pair(self.T_h, self.T_c, self.validation)
        object.__setattr__(self, "T_h", T_h)
        object.__setattr__(self, "T_c", T_c)
        object.__setattr__(self, "g_cold", _check_coupling("g_cold", self.g_cold))
        object.__setattr__(self, "g_hot", _check_coupling("g_hot", self.g_hot))


@dataclass(frozen=True)
class Stroke:
    name: str
    kind: str
    Q: float
    W: float


@dataclass(frozen=True)
class StrokeLedger:
    strokes: tuple
    anchors: dict = field(default_factory=dict)

    def __getitem__(self, name) -> Stroke:
        for s in self.strokes:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def total_heat(self) -> float:
        return math.fsum(s.Q for s in self.strokes)

    @property
    def total_work(self) -> float:
        return math.fsum(s.W for s in self.strokes)


@dataclass(frozen=True)
class CycleResult:
    cycle: str
    Q_h: float
    Q_c: float
    W: float
    eta: float
    eta_carnot: float
    ledger: StrokeLedger

    @property
    def positive_work(self) -> bool:
        return bool(self.W > 0)

    def to_dict(self) -> dict:
        def num(x):
            return None if isinstance(x, float) and math.isnan(x) else x

        return {
            "cycle": self.cycle,
            "Q_h": self.Q_h,
            "Q_c": self.Q_c,
            "W": self.W,
            "eta": num(self.eta),
            "eta_carnot": self.eta_carnot,
            "positive_work": self.positive_work,
            "strokes": [
                {"name": s.name, "kind": s.kind, "Q": s.Q, "W": s.W} for s in self.ledger.strokes
            ],
            "anchors": {
                name: {"Z": p.Z, "U": p.U, "S": p.S, "F": p.F}
                for name, p in self.ledger.anchors.items()
            },
        }


def carnot_efficiency(T_h: float, T_c: float) -> float:
    T_h = check_temperature(T_h, "T_h")
    T_c = check_temperature(T_c, "T_c")
    if T_c > T_h:
        raise ValueError(f"T_c={T_c} exceeds T_h={T_h}")
    return 1.0 - T_c / T_h


def _result(cycle, Q_h, Q_c, T_h, T_c, ledger):
    W = Q_h + Q_c
    eta = W / Q_h if Q_h > 0 else math.nan
    return CycleResult(cycle, Q_h, Q_c, W, eta, carnot_efficiency(T_h, T_c), ledger)


def _isochore(energies, p_before, p_after) -> float:
    # populations sum to one on both sides, so shifting by the lowest level is
    # exact and drops the ground-level term that would otherwise round away
    # small heats
    energies = np.asarray(energies)
    return float(np.dot(energies - energies.min(), p_after - p_before))


def _isotherm(T, before: ThermoPotentials, after: ThermoPotentials):
    """Heat and work of a quasi-static isotherm.

    Q = T dS, which equals dU + T ln(Z_after/Z_before) but does not cancel
    two large energies when the ensemble is nearly frozen.  W = T d(ln Z).
    """
    work = T * (after.log_Z - before.log_Z)
    return T * (after.S - before.S), work


def run_stirling(spec: StirlingSpec) -> CycleResult:
    s_start = spectrum(with_coupling(spec.substance, spec.g_start))
    s_end = spectrum(with_coupling(spec.substance, spec.g_end))
    T_h, T_c = spec.T_h, spec.T_c

    pot = {
        "A": thermo_potentials(s_start, T_h),
        "B": thermo_potentials(s_end, T_h),
        "C": thermo_potentials(s_end, T_c),
        "D": thermo_potentials(s_start, T_c),
    }
    p = {
        "A": populations(s_start, T_h).populations,
        "B": populations(s_end, T_h).populations,
        "C": populations(s_end, T_c).populations,
        "D": populations(s_start, T_c).populations,
    }

    Q_ab, W_ab = _isotherm(T_h, pot["A"], pot["B"])
    Q_bc = _isochore(s_end.energies, p["B"], p["C"])
    Q_cd, W_cd = _isotherm(T_c, pot["C"], pot["D"])
    Q_da = _isochore(s_start.energies, p["D"], p["A"])

    ledger = StrokeLedger(
        (
            Stroke("AB", "isothermal", Q_ab, W_ab),
            Stroke("BC", "isochoric", Q_bc, 0.0),
            Stroke("CD", "isothermal", Q_cd, W_cd),
            Stroke("DA", "isochoric", Q_da, 0.0),
        ),
        pot,
    )
    return _result("stirling", Q_ab + Q_da, Q_bc + Q_cd, T_h, T_c, ledger)


def run_otto(spec: OttoSpec) -> CycleResult:
    s_cold = spectrum(with_coupling(spec.substance, spec.g_cold))
    s_hot = spectrum(with_coupling(spec.substance, spec.g_hot))
    cold = populations(s_cold, spec.T_c)
    hot = populations(s_hot, spec.T_h)

    # adiabats carry populations level-by-level, matched by label
    labels = s_hot.labels
    e_hot = s_hot.energies
    e_cold = s_cold.energies_for(labels)
    p_c = cold.populations_for(labels)
    p_h = hot.populations

    Q_h = _isochore(e_hot, p_c, p_h)
    Q_c = _isochore(e_cold, p_h, p_c)
    W_compress = -float(np.dot(e_hot - e_cold, p_c))
    W_expand = -float(np.dot(e_cold - e_hot, p_h))

    ledger = StrokeLedger(
        (
            Stroke("1-2", "adiabatic", 0.0, W_compress),
            Stroke("2-3", "isochoric-hot", Q_h, 0.0),
            Stroke("3-4", "adiabatic", 0.0, W_expand),
            Stroke("4-1", "isochoric-cold", Q_c, 0.0),
        ),
        {
            "1": thermo_potentials(s_cold, spec.T_c),
            "3": thermo_potentials(s_hot, spec.T_h),
        },
    )
    return _result("otto", Q_h, Q_c, spec.T_h, spec.T_c, ledger)


def positive_work_window(spec: OttoSpec, grid) -> list:
    """Maximal runs of ``grid`` (values of ``g_hot``) on which the Otto cycle yields W > 0.

    Returns a list of ``(first, last)`` grid values, one per run.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("coupling grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("coupling grid must be strictly ascending")

    windows = []
    start = last = None
    for g in grid:
        if run_otto(replace(spec, g_hot=g)).W > 0:
            if start is None:
                start = g
            last = g
        elif start is not None:
            windows.append((start, last))
            start = None
    if start is not None:
        windows.append((start, last))
    return windows
