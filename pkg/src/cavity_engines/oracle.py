"""Brute-force reference path: dense Jacobi diagonalisation and thermal states.

Nothing here uses the closed-form spectra; the routines work on explicit
matrices so they can be used to check those formulas independently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import TwoQubitDensity
from .spectra import HermitianBlock
from .thermo import check_temperature

__all__ = [
    "EigenDecomposition",
    "ConvergenceError",
    "eigh_symmetric",
    "thermal_density_from_hamiltonian",
    "partial_trace_field",
]

MAX_DIM = 16
MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12
ROTATION_TOL = 1e-14


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def _as_matrix(M) -> np.ndarray:
    if isinstance(M, HermitianBlock):
        M = M.entries
    a = np.array(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds the oracle limit of {MAX_DIM}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(a))):
        raise ValueError(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")
    return 0.5 * (a + a.T)


def eigh_symmetric(M) -> EigenDecomposition:
    """Cyclic Jacobi eigensolver for small real symmetric matrices.

    Every off-diagonal pair above ``ROTATION_TOL`` times the largest
    diagonal magnitude is annihilated by a plane rotation, sweeping the
    upper triangle row by row until no pair qualifies.
    """
    a = _as_matrix(M)
    d = a.shape[0]
    v = np.eye(d)
    sweeps = 0
    while True:
        threshold = ROTATION_TOL * (np.max(np.abs(np.diag(a))) if d else 0.0)
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                rotated = True
                h = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            break
        sweeps += 1
        if sweeps > MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]
    # deterministic sign: largest-magnitude component of each vector positive
    for j in range(d):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0:
            v[:, j] = -v[:, j]
    return EigenDecomposition(values, v, sweeps)


def boltzmann_weights(values, T) -> np.ndarray:
    T = check_temperature(T)
    values = np.asarray(values, dtype=float)
    w = np.exp(-(values - values.min()) / T)
    return w / w.sum()


def thermal_density_from_hamiltonian(M, T: float) -> np.ndarray:
    """exp(-M/T) / tr exp(-M/T), built from the Jacobi eigenbasis."""
    dec = eigh_symmetric(M)
    w = boltzmann_weights(dec.values, T)
    rho = (dec.vectors * w) @ dec.vectors.T
    return 0.5 * (rho + rho.T)


def partial_trace_field(amplitudes, weights, source: str = "oracle") -> TwoQubitDensity:
    """Trace the cavity field out of a mixture of field-atom pure states.

    Parameters
    ----------
    amplitudes : array_like, shape (m, F, 4)
        ``amplitudes[j, f, a]`` is the coefficient of |field f> |atoms a> in
        the j-th pure state; the atom index runs over gg, ge, eg, ee.
    weights : array_like, shape (m,)
        Mixture probabilities.
    """
    amps = np.asarray(amplitudes)
    w = np.asarray(weights, dtype=float)
    if amps.ndim != 3 or amps.shape[2] != 4:
        raise ValueError(f"amplitudes must have shape (m, F, 4), got {amps.shape}")
    if w.shape != (amps.shape[0],):
        raise ValueError("one weight per pure state is required")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must be a probability vector (sum={w.sum()!r})")
    norms = np.sum(np.abs(amps) ** 2, axis=(1, 2))
    if np.any(np.abs(norms - 1.0) > 1e-10):
        raise ValueError(f"pure states are not normalised: norms {norms}")

    # rho_atoms[a, b] = sum_j w_j sum_f psi_j[f, a] conj(psi_j[f, b])
    rho = np.einsum("j,jfa,jfb->ab", w, amps, amps.conj())
    rho = 0.5 * (rho + rho.conj().T)
    if not np.iscomplexobj(amps):
        rho = rho.real
    return TwoQubitDensity(rho, source)
