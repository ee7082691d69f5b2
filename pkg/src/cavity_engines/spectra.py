"""Closed-form spectra and interaction-sector Hamiltonians of the working substances.

Two substances are supported:

* a single two-level atom in a cavity (Jaynes-Cummings), restricted to the
  two-state sector {|n+1, g>, |n, e>};
* two two-level atoms sharing one cavity mode with dipole-dipole (``k``) and
  Ising (``J``) couplings, restricted to the four-state sector
  {|n+1, gg>, |n, ge>, |n, eg>, |n-1, ee>}.

Units are hbar = k_B = 1 throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

__all__ = [
    "JCParams",
    "FourLevelParams",
    "SubstanceSpec",
    "Spectrum",
    "HermitianBlock",
    "jc_spectrum",
    "jc_block_hamiltonian",
    "four_level_alpha",
    "four_level_spectrum",
    "four_level_block_hamiltonian",
    "spectrum",
    "block_hamiltonian",
    "with_coupling",
]


def _finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class JCParams:
    """Single atom coupled to one cavity mode in a fixed excitation sector.

    Parameters
    ----------
    omega_a : float
        Atomic transition frequency.
    omega_c : float
        Cavity mode frequency.
    n : int
        Photon sector index; the sector is {|n+1, g>, |n, e>}.
    g : float
        Atom-field coupling.
    """

    omega_a: float
    omega_c: float
    n: int
    g: float

    def __post_init__(self):
        for name in ("omega_a", "omega_c", "g"):
            _finite(name, getattr(self, name))
        if self.omega_a <= 0:
            raise ValueError(f"omega_a must be positive, got {self.omega_a}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.g < 0:
            raise ValueError(f"coupling g must be non-negative, got {self.g}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"photon number n must be a non-negative integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def delta(self) -> float:
        """Detuning omega_a - omega_c."""
        return self.omega_a - self.omega_c

    @property
    def half_splitting(self) -> float:
        """Half the level splitting, 0.5*sqrt(delta**2 + 4 g**2 (n+1))."""
        return 0.5 * math.sqrt(self.delta**2 + 4.0 * self.g**2 * (self.n + 1))

    @property
    def mean_energy(self) -> float:
        return (self.n + 0.5) * self.omega_c


@dataclass(frozen=True)
class FourLevelParams:
    """Two atoms in a cavity with dipole-dipole and Ising couplings.

    ``n`` must be at least 1 because the sector contains |n-1, ee>.
    """

    g: float
    k: float
    J: float
    n: int

    def __post_init__(self):
        for name in ("g", "k", "J"):
            _finite(name, getattr(self, name))
        if self.g < 0:
            raise ValueError(f"coupling g must be non-negative, got {self.g}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"photon number n must be an integer >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


SubstanceSpec = Union[JCParams, FourLevelParams]


@dataclass(frozen=True)
class Spectrum:
    """Labelled energy levels in ascending order.

    Degenerate levels keep the order in which they were supplied, so the
    canonical label order breaks ties.
    """

    levels: tuple

    def __post_init__(self):
        levels = tuple((str(lab), float(e)) for lab, e in self.levels)
        labels = [lab for lab, _ in levels]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate level labels: {labels}")
        for lab, e in levels:
            _finite(f"energy {lab}", e)
        levels = tuple(sorted(levels, key=lambda item: item[1]))
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_energies(cls, energies, labels=None) -> "Spectrum":
        energies = list(energies)
        if labels is None:
            labels = [f"L{i}" for i in range(len(energies))]
        return cls(tuple(zip(labels, energies)))

    @property
    def count(self) -> int:
        return len(self.levels)

    @property
    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for _, e in self.levels], dtype=float)

    def energy(self, label: str) -> float:
        for lab, e in self.levels:
            if lab == label:
                return e
        raise KeyError(label)

    def energies_for(self, labels) -> np.ndarray:
        """Energies re-ordered to follow ``labels``."""
        lookup = dict(self.levels)
        return np.array([lookup[lab] for lab in labels], dtype=float)

    def shifted(self, offset: float) -> "Spectrum":
        return Spectrum(tuple((lab, e + offset) for lab, e in self.levels))


@dataclass(frozen=True)
class HermitianBlock:
    """Real symmetric matrix of one invariant sector, with its basis kets."""

    entries: np.ndarray
    basis_labels: tuple = field(default=())

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"block must be square, got shape {m.shape}")
        if self.basis_labels and len(self.basis_labels) != m.shape[0]:
            raise ValueError("basis_labels length does not match matrix dimension")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


JC_BASIS = ("|n+1,g>", "|n,e>")
FOUR_LEVEL_BASIS = ("|n+1,gg>", "|n,ge>", "|n,eg>", "|n-1,ee>")


def jc_spectrum(p: JCParams) -> Spectrum:
    """Dressed-state energies (n + 1/2) omega_c -/+ k of the JC sector."""
    a, k = p.mean_energy, p.half_splitting
    return Spectrum((("E-", a - k), ("E+", a + k)))


def jc_block_hamiltonian(p: JCParams) -> HermitianBlock:
    off = p.g * math.sqrt(p.n + 1)
    m = np.array(
        [
            [p.omega_c * (p.n + 1) - 0.5 * p.omega_a, off],
            [off, p.omega_c * p.n + 0.5 * p.omega_a],
        ]
    )
    return HermitianBlock(m, JC_BASIS)


def four_level_alpha(p: FourLevelParams) -> float:
    """sqrt(2 g^2 (2n+1) + (J-k)^2)."""
    # hypot keeps tiny or huge arguments from under/overflowing in the squares
    return math.hypot(p.g * math.sqrt(2.0 * (2 * p.n + 1)), p.J - p.k)


def four_level_spectrum(p: FourLevelParams) -> Spectrum:
    alpha = four_level_alpha(p)
    return Spectrum(
        (
            ("E1", p.J),
            ("E2", -(p.J + 2.0 * p.k)),
            ("E3", p.k + alpha),
            ("E4", p.k - alpha),
        )
    )


def four_level_block_hamiltonian(p: FourLevelParams) -> HermitianBlock:
    up = p.g * math.sqrt(p.n + 1)
    down = p.g * math.sqrt(p.n)
    dd = 2.0 * p.k
    J = p.J
    m = np.array(
        [
            [J, up, up, 0.0],
            [up, -J, dd, down],
            [up, dd, -J, down],
            [0.0, down, down, J],
        ]
    )
    return HermitianBlock(m, FOUR_LEVEL_BASIS)


def spectrum(p: SubstanceSpec) -> Spectrum:
    if isinstance(p, JCParams):
        return jc_spectrum(p)
    if isinstance(p, FourLevelParams):
        return four_level_spectrum(p)
    raise TypeError(f"unsupported substance {type(p).__name__}")


def block_hamiltonian(p: SubstanceSpec) -> HermitianBlock:
    if isinstance(p, JCParams):
        return jc_block_hamiltonian(p)
    if isinstance(p, FourLevelParams):
        return four_level_block_hamiltonian(p)
    raise TypeError(f"unsupported substance {type(p).__name__}")


def with_coupling(p: SubstanceSpec, g: float) -> SubstanceSpec:
    return replace(p, g=g)
