"""Atom-atom entanglement of the two-atom working substance.

The reduced state is obtained by brute force: diagonalise the sector block,
Boltzmann-weight its eigenvectors, embed them in (field) x (atoms) and trace
the field out.  Concurrence is available through the X-state shortcut and
through the general Wootters construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .cycles import StirlingSpec, run_stirling
from .density import ATOM_BASIS, TwoQubitDensity
from .oracle import boltzmann_weights, eigh_symmetric, partial_trace_field
from .parallel import ordered_map
from .spectra import FourLevelParams, four_level_block_hamiltonian

__all__ = [
    "TwoQubitDensity",
    "ATOM_BASIS",
    "NotXStateError",
    "CorrelationPoint",
    "sector_amplitudes",
    "reduced_thermal_state",
    "spin_flip",
    "concurrence_x_state",
    "concurrence_wootters",
    "correlation_work_profile",
]

# sector ket -> (field index over n+1, n, n-1 ; atom index over gg, ge, eg, ee)
_EMBEDDING = ((0, 0), (1, 1), (1, 2), (2, 3))

_SIGMA_YY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


class NotXStateError(ValueError):
    """The density matrix has weight outside its diagonal and anti-diagonal."""


@dataclass(frozen=True)
class CorrelationPoint:
    g: float
    C_hot: float
    C_cold: float
    delta_C: float
    work: float
    scaled_work: float


def sector_amplitudes(vectors) -> np.ndarray:
    """Embed sector-basis column vectors into an (m, 3, 4) field x atom array."""
    vectors = np.asarray(vectors)
    amps = np.zeros((vectors.shape[1], 3, 4), dtype=vectors.dtype)
    for row, (f, a) in enumerate(_EMBEDDING):
        amps[:, f, a] = vectors[row, :]
    return amps


def reduced_thermal_state(p: FourLevelParams, T: float) -> TwoQubitDensity:
    dec = eigh_symmetric(four_level_block_hamiltonian(p))
    weights = boltzmann_weights(dec.values, T)
    return partial_trace_field(sector_amplitudes(dec.vectors), weights, source="oracle")


def _matrix(rho) -> np.ndarray:
    return rho.entries if isinstance(rho, TwoQubitDensity) else np.asarray(rho)


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    m = _matrix(rho)
    return _SIGMA_YY @ m.conj() @ _SIGMA_YY


def concurrence_x_state(rho, tol: float = 1e-10) -> float:
    """Concurrence of an X-shaped two-qubit state.

    ``2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))``
    (1-based indices in the gg, ge, eg, ee basis).
    """
    if not isinstance(rho, TwoQubitDensity):
        rho = TwoQubitDensity(rho)
    off = rho.off_x_magnitude()
    if off > tol:
        raise NotXStateError(
            f"state is not X-shaped (off-X magnitude {off:.3e}); use concurrence_wootters"
        )
    m = rho.entries
    diag = np.clip(np.real(np.diag(m)), 0.0, None)
    inner = abs(m[1, 2]) - math.sqrt(diag[0] * diag[3])
    outer = abs(m[0, 3]) - math.sqrt(diag[1] * diag[2])
    return float(2.0 * max(0.0, inner, outer))


def concurrence_wootters(rho) -> float:
    """Wootters concurrence max(0, s1 - s2 - s3 - s4).

    The ``s_i`` are the square roots of the eigenvalues of rho * spin_flip(rho),
    in descending order.  They are computed as the singular values of
    ``A^T Y A`` with ``rho = A A^dagger`` and ``Y = sigma_y x sigma_y``, which
    equals the eigenvalue route but avoids square roots of rounding noise.
    """
    m = _matrix(rho)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    a = v * np.sqrt(np.clip(w, 0.0, None))
    s = np.linalg.svd(a.T @ _SIGMA_YY @ a, compute_uv=False)
    s = np.sort(s)[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def correlation_work_profile(
    base: FourLevelParams, stirling: StirlingSpec, grid, workers=None
) -> list:
    """Concurrence at both baths and Stirling work along a coupling sweep.

    The swept coupling is bound to states B and C of the Stirling cycle
    (``g_end``), where the substance thermalises with the hot and then the
    cold bath; ``stirling.g_start`` stays fixed.  ``scaled_work`` is the work
    divided by the largest |W| on the grid.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("coupling grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("coupling grid must be strictly ascending")

    def point(g):
        p = replace(base, g=g)
        c_hot = concurrence_x_state(reduced_thermal_state(p, stirling.T_h))
        c_cold = concurrence_x_state(reduced_thermal_state(p, stirling.T_c))
        w = run_stirling(replace(stirling, substance=base, g_end=g)).W
        return g, c_hot, c_cold, w

    raw = ordered_map(point, grid, workers)
    w_max = max(abs(r[3]) for r in raw)
    return [
        CorrelationPoint(
            g=g,
            C_hot=c_hot,
            C_cold=c_cold,
            delta_C=c_cold - c_hot,
            work=w,
            scaled_work=(w / w_max) if w_max > 0 else 0.0,
        )
        for g, c_hot, c_cold, w in raw
    ]
