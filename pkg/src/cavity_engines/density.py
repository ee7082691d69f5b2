from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TwoQubitDensity", "ATOM_BASIS"]

ATOM_BASIS = ("gg", "ge", "eg", "ee")

TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class TwoQubitDensity:
    """Two-atom density matrix in the product basis gg, ge, eg, ee.

    Construction checks unit trace, hermiticity and positivity.
    ``source`` records how the state was obtained (``"oracle"``,
    ``"closed-form"`` or ``"input"``).
    """

    entries: np.ndarray
    source: str = "input"

    def __post_init__(self):
        rho = np.array(self.entries)
        if not np.iscomplexobj(rho):
            rho = rho.astype(float)
        if rho.shape != (4, 4):
            raise ValueError(f"two-qubit density must be 4x4, got {rho.shape}")
        tr = np.trace(rho)
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"trace is {tr}, expected 1")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
        if lam_min < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    def __getitem__(self, idx):
        return self.entries[idx]

    def off_x_magnitude(self) -> float:
        """Largest entry outside the diagonal and anti-diagonal."""
        mask = np.ones((4, 4), dtype=bool)
        idx = np.arange(4)
        mask[idx, idx] = False
        mask[idx, 3 - idx] = False
        return float(np.max(np.abs(self.entries[mask])))

    def is_x_state(self, tol: float = 1e-10) -> bool:
        return self.off_x_magnitude() <= tol
