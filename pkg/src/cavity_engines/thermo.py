"""Canonical-ensemble thermodynamics of a discrete spectrum (k_B = 1)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectra import Spectrum

__all__ = [
    "check_temperature",
    "ThermalEnsemble",
    "ThermoPotentials",
    "log_partition_function",
    "partition_function",
    "populations",
    "internal_energy",
    "entropy",
    "thermo_potentials",
]


def check_temperature(T, name="temperature") -> float:
    T = float(T)
    if not (math.isfinite(T) and T > 0):
        raise ValueError(f"{name} must be positive and finite, got {T!r}")
    return T


def _reduced(s: Spectrum, T: float):
    """Boltzmann weights relative to the ground level.

    Returns ``(x, z, ln z)`` with ``x = (E - E_min)/T`` and ``z = sum(exp(-x))``.
    Factoring out ``E_min`` keeps every exponent non-positive.  ``ln z`` is
    taken as ``ln n0 + log1p(r / n0)``, with ``n0`` ground-degenerate levels and
    ``r`` the excited weight, so a nearly frozen ensemble keeps its tiny entropy.
    """
    T = check_temperature(T)
    e = s.energies
    x = (e - e.min()) / T
    w = np.exp(-x)
    ground = x == 0
    n0 = int(ground.sum())
    r = float(w[~ground].sum())
    return x, n0 + r, math.log(n0) + math.log1p(r / n0)


@dataclass(frozen=True)
class ThermalEnsemble:
    spectrum: Spectrum
    temperature: float
    populations: np.ndarray

    @property
    def labels(self):
        return self.spectrum.labels

    def population(self, label: str) -> float:
        return float(self.populations[self.spectrum.labels.index(label)])

    def populations_for(self, labels) -> np.ndarray:
        """Populations re-ordered to follow ``labels``."""
        index = {lab: i for i, lab in enumerate(self.spectrum.labels)}
        return np.array([self.populations[index[lab]] for lab in labels])


@dataclass(frozen=True)
class ThermoPotentials:
    """Partition function, internal energy, entropy and free energy.

    ``log_Z`` is kept alongside ``Z`` since ``Z`` itself under- or overflows
    for large level energies at low temperature.
    """

    Z: float
    U: float
    S: float
    F: float
    log_Z: float


def log_partition_function(s: Spectrum, T: float) -> float:
    _, _, log_z = _reduced(s, T)
    return log_z - float(s.energies.min()) / T


def partition_function(s: Spectrum, T: float) -> float:
    """Z = sum_i exp(-E_i / T)."""
    return math.exp(log_partition_function(s, T))


def populations(s: Spectrum, T: float) -> ThermalEnsemble:
    x, z, _ = _reduced(s, T)
    p = np.exp(-x) / z
    p.setflags(write=False)
    return ThermalEnsemble(s, float(T), p)


def internal_energy(s: Spectrum, T: float) -> float:
    ens = populations(s, T)
    return float(np.dot(ens.populations, s.energies))


def entropy(s: Spectrum, T: float) -> float:
    """Gibbs entropy -sum p ln p of the Boltzmann populations."""
    x, z, log_z = _reduced(s, T)
    p = np.exp(-x) / z
    # -ln p_i = x_i + ln z exactly, so no log of an underflowed weight is taken
    return float(np.dot(p, x) + log_z)


def thermo_potentials(s: Spectrum, T: float) -> ThermoPotentials:
    T = check_temperature(T)
    x, z, log_z_reduced = _reduced(s, T)
    p = np.exp(-x) / z
    e_min = float(s.energies.min())
    log_z = log_z_reduced - e_min / T
    U = float(np.dot(p, s.energies))
    S = float(np.dot(p, x) + log_z_reduced)
    F = -T * log_z
    try:
        Z = math.exp(log_z)
    except OverflowError:
        Z = math.inf
    return ThermoPotentials(Z=Z, U=U, S=S, F=F, log_Z=log_z)
