"""Systematic comparison of closed forms against the brute-force oracle.

Two kinds of check appear in a report:

* implementation checks, which must pass for the library to be trusted;
* printed-form checks, which evaluate formulas exactly as typeset in the
  source literature.  Those are known to disagree with the oracle; the check
  passes when the disagreement is reproduced and its note starts with
  ``"documented discrepancy"``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cycles import OttoSpec, StirlingSpec, run_otto, run_stirling
from .entanglement import (
    concurrence_wootters,
    concurrence_x_state,
    reduced_thermal_state,
    spin_flip,
)
from .oracle import eigh_symmetric, thermal_density_from_hamiltonian
from .spectra import (
    FourLevelParams,
    JCParams,
    four_level_alpha,
    four_level_block_hamiltonian,
    four_level_spectrum,
    jc_block_hamiltonian,
    jc_spectrum,
)
from .thermo import populations, thermo_potentials

__all__ = ["Check", "ValidationReport", "GridSpec", "validate_closed_forms"]

DISCREPANCY = "documented discrepancy"


@dataclass(frozen=True)
class Check:
    name: str
    max_abs_error: float
    tolerance: float
    passed: bool
    note: str

    def to_dict(self):
        return {
            "name": self.name,
            "max_abs_error": _json_float(self.max_abs_error),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "note": self.note,
        }


def _json_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class GridSpec:
    """Random parameter draws used by the validation run."""

    size: int
    g_max: float = 10.0
    kJ_range: tuple = (-2.0, 2.0)
    n_range: tuple = (1, 10)
    omega_max: float = 5.0
    T_range: tuple = (0.1, 10.0)

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise ValueError(f"grid size must be a positive integer, got {self.size!r}")


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def implementation_failures(self) -> list:
        return [c for c in self.checks if not c.passed and not c.note.startswith(DISCREPANCY)]

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "grid": self.grid,
            "seed": self.seed,
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _agree(name, err, tol, note=""):
    err = float(err)
    return Check(name, err, tol, bool(err <= tol), note)


def _disagree(name, err, tol, what):
    """Printed-form check: passes when the printed formula is off by more than ``tol``."""
    err = float(err)
    ok = math.isnan(err) or err > tol
    return Check(name, err, tol, bool(ok), f"{DISCREPANCY}: {what}")


def _draws(grid: GridSpec, rng):
    m = grid.size
    return {
        "omega_a": rng.uniform(1e-3, grid.omega_max, m),
        "omega_c": rng.uniform(1e-3, grid.omega_max, m),
        "g": rng.uniform(0.0, grid.g_max, m),
        "g2": rng.uniform(0.0, grid.g_max, m),
        "k": rng.uniform(*grid.kJ_range, m),
        "J": rng.uniform(*grid.kJ_range, m),
        "n": rng.integers(grid.n_range[0], grid.n_range[1] + 1, m),
        "T": rng.uniform(*grid.T_range, m),
        "T2": rng.uniform(*grid.T_range, m),
    }


def _jc(d, i, g=None):
    return JCParams(d["omega_a"][i], d["omega_c"][i], int(d["n"][i]), d["g"][i] if g is None else g)


def _fl(d, i, g=None):
    return FourLevelParams(d["g"][i] if g is None else g, d["k"][i], d["J"][i], int(d["n"][i]))


# printed formulas, transcribed as typeset ------------------------------------------------


def _printed_jc_levels(p: JCParams):
    root = math.sqrt(p.delta**2 + (2 * p.g) ** 2 * (p.n + 1))
    a = (p.n + 0.5) * p.omega_c
    return np.array([a - root, a + root])


def _printed_alpha_literal(p: FourLevelParams):
    arg = (2 * p.n + 1) * 2 * p.g**2 + (p.J - p.k) * 2
    return math.sqrt(arg) if arg >= 0 else math.nan


def _printed_jc_energy(p: JCParams, T):
    a, k = p.mean_energy, p.half_splitting
    Z = 2 * math.exp(-a / T) * math.cosh(k / T)
    return 2 / Z * math.exp(a / T) * (a * math.cosh(k / T) - k * math.sinh(k / T))


def _printed_four_level_Z(p: FourLevelParams, T):
    al = four_level_alpha(p)
    return math.exp(-p.J / T) + math.exp((p.J + 2 * p.k) / T) + 2 * math.exp(-p.k / T) * math.cosh(al / T)


def _printed_four_level_energy(p: FourLevelParams, T):
    al, J, k = four_level_alpha(p), p.J, p.k
    return (
        J * math.exp(-J / T)
        - (J + 2 * k) * math.exp((J + 2 * k) / T)
        + 2 * math.exp(-k / T) * (k * math.cosh(al / T) - al * math.sinh(al / T))
    )


def _printed_four_level_energy_otto(p: FourLevelParams, T):
    al, J, k = four_level_alpha(p), p.J, p.k
    b = 1.0 / T
    Z = _printed_four_level_Z(p, T)
    return (
        math.exp(-b * J)
        + math.exp(b * (J + 2 * k))
        + math.exp(-b * k) * (k * math.cosh(b * al) - al * math.sinh(b * al))
    ) / Z


def _printed_rho_ab(p: FourLevelParams, T):
    n, J, k = p.n, p.J, p.k
    al = four_level_alpha(p)
    b = 1.0 / T
    ratio = (k - J) / al
    ch, sh = math.cosh(b * al), math.sinh(b * al)
    rho = np.zeros((4, 4))
    rho[0, 0] = math.exp(-b * J) / (2 * n + 1) + (n + 1) / (2 * n + 1) * math.exp(-b * k) * (ch + ratio * sh)
    mid = 0.5 * (math.exp(b * (J + 2 * k)) + math.exp(-b * k) * (ch - ratio * sh))
    rho[1, 1] = rho[2, 2] = mid
    rho[1, 2] = rho[2, 1] = -mid
    rho[3, 3] = math.exp(-b * J) / (2 * n + 1) + n / (2 * n + 1) * math.exp(-b * k) * (ch + ratio * sh)
    return rho / _printed_four_level_Z(p, T)


def _printed_eigenvectors(p: FourLevelParams):
    """Columns psi1..psi4 in the sector basis |n+1,gg>, |n,ge>, |n,eg>, |n-1,ee>."""
    n, g, J, k = p.n, p.g, p.J, p.k
    al = four_level_alpha(p)
    psi = np.zeros((4, 4))
    psi[:, 0] = np.array([-math.sqrt(n), 0, 0, math.sqrt(n + 1)]) / math.sqrt(2 * n + 1)
    # |n,01> is |n,ge>, |n,10> is |n,eg>
    psi[:, 1] = np.array([0, -1, 1, 0]) / math.sqrt(2)
    if g == 0:
        return psi
    for col, sgn in ((2, 1.0), (3, -1.0)):
        c = al + sgn * (k - J)
        pref = 1.0 / (2 * math.sqrt(al * c))
        psi[:, col] = pref * np.array(
            [-2 * g * math.sqrt(n + 1), c, c, 2 * g * math.sqrt(n)]
        )
    return psi


# -----------------------------------------------------------------------------------------

_SCALE_NOTE = "relative to the largest |U|, |F| or |Q| entering the ledger"


def _ledger_scale(r) -> float:
    terms = [abs(r.Q_h), abs(r.Q_c)]
    for pot in r.ledger.anchors.values():
        terms += [abs(pot.U), abs(pot.F)]
    return max(max(terms), 1e-300)


def validate_closed_forms(grid: GridSpec | int, seed: int = 42) -> ValidationReport:
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    rng = np.random.default_rng(seed)
    d = _draws(grid, rng)
    m = grid.size
    checks = []

    # spectra ------------------------------------------------------------------------------
    err_jc = err_fl = err_printed_jc = err_alpha_lit = 0.0
    for i in range(m):
        jc = _jc(d, i)
        oracle = eigh_symmetric(jc_block_hamiltonian(jc)).values
        err_jc = max(err_jc, np.max(np.abs(jc_spectrum(jc).energies - oracle)))
        err_printed_jc = max(err_printed_jc, np.max(np.abs(_printed_jc_levels(jc) - oracle)))

        fl = _fl(d, i)
        oracle = eigh_symmetric(four_level_block_hamiltonian(fl)).values
        err_fl = max(err_fl, np.max(np.abs(four_level_spectrum(fl).energies - oracle)))
        lit = _printed_alpha_literal(fl)
        if math.isnan(lit):
            err_alpha_lit = math.inf
        else:
            printed = np.sort([fl.J, -(fl.J + 2 * fl.k), fl.k + lit, fl.k - lit])
            err_alpha_lit = max(err_alpha_lit, np.max(np.abs(printed - oracle)))

    checks.append(_agree("jc_spectrum_vs_oracle", err_jc, 1e-10))
    checks.append(_agree("four_level_spectrum_vs_oracle", err_fl, 1e-10,
                         "alpha = sqrt(2 g^2 (2n+1) + (J-k)^2)"))
    checks.append(_disagree("printed_jc_eigenvalues_vs_oracle", err_printed_jc, 1e-6,
                            "square root printed without the factor 1/2"))
    checks.append(_disagree("printed_alpha_literal_reading_vs_oracle", err_alpha_lit, 1e-6,
                            "'(J-k)2' read literally as 2(J-k) instead of (J-k)^2"))

    # thermodynamics -----------------------------------------------------------------------
    e_norm = e_ent = e_free = e_jcU = e_jcZ = e_flZ = 0.0
    e_pr_jcU = e_pr_flU = e_pr_flU_otto = 0.0
    for i in range(m):
        T = d["T"][i]
        jc = _jc(d, i)
        fl = _fl(d, i)
        for s in (jc_spectrum(jc), four_level_spectrum(fl)):
            ens = populations(s, T)
            pot = thermo_potentials(s, T)
            e_norm = max(e_norm, abs(ens.populations.sum() - 1.0))
            e_ent = max(e_ent, abs(pot.S - (pot.U / T + pot.log_Z)))
            e_free = max(e_free, abs(pot.F + T * pot.log_Z))

        pot = thermo_potentials(jc_spectrum(jc), T)
        a, k = jc.mean_energy, jc.half_splitting
        e_jcU = max(e_jcU, abs(pot.U - (a - k * math.tanh(k / T))))
        log_z_closed = math.log(2.0) - a / T + math.log(math.cosh(k / T)) if k / T < 700 else math.nan
        if not math.isnan(log_z_closed):
            e_jcZ = max(e_jcZ, abs(pot.log_Z - log_z_closed))
        # overflow-safe region for the printed formulas
        if (a + k) / T < 300:
            e_pr_jcU = max(e_pr_jcU, abs(_printed_jc_energy(jc, T) - pot.U))

        pot = thermo_potentials(four_level_spectrum(fl), T)
        scale = max(abs(fl.J), abs(fl.k), four_level_alpha(fl))
        if 3 * scale / T < 300:
            Zp = _printed_four_level_Z(fl, T)
            e_flZ = max(e_flZ, abs(Zp - pot.Z) / pot.Z)
            e_pr_flU = max(e_pr_flU, abs(_printed_four_level_energy(fl, T) - pot.U))
            e_pr_flU_otto = max(e_pr_flU_otto, abs(_printed_four_level_energy_otto(fl, T) - pot.U))

    checks.append(_agree("populations_normalised", e_norm, 1e-12))
    checks.append(_agree("entropy_identity_S_eq_U_over_T_plus_lnZ", e_ent, 1e-10))
    checks.append(_agree("free_energy_identity_F_eq_minus_T_lnZ", e_free, 1e-10))
    checks.append(_agree("jc_energy_closed_form_A_minus_k_tanh", e_jcU, 1e-10))
    checks.append(_agree("jc_partition_function_closed_form", e_jcZ, 1e-10, "compared as ln Z"))
    checks.append(_agree("four_level_partition_function_printed", e_flZ, 1e-10, "relative error"))
    checks.append(_disagree("printed_jc_internal_energy", e_pr_jcU, 1e-6,
                            "exp(+A/T) where normalisation requires exp(-A/T)"))
    checks.append(_disagree("printed_four_level_internal_energy", e_pr_flU, 1e-6,
                            "missing 1/Z normalisation"))
    checks.append(_disagree("printed_four_level_internal_energy_otto_form", e_pr_flU_otto, 1e-6,
                            "level-energy prefactors missing on the first two Boltzmann terms"))

    # cycles -------------------------------------------------------------------------------
    e_cons = e_strokes = e_closed = e_iso = e_adiabat = 0.0
    violation = 0.0
    e_null = 0.0
    clausius = 0.0
    n_engine = 0
    for i in range(m):
        T_a, T_b = d["T"][i], d["T2"][i]
        if abs(T_a - T_b) < 1e-9:
            continue
        T_h, T_c = max(T_a, T_b), min(T_a, T_b)
        g1, g2 = d["g"][i], d["g2"][i]
        for sub in (_jc(d, i), _fl(d, i)):
            st = run_stirling(StirlingSpec(T_h, T_c, g1, g2, sub))
            ot = run_otto(OttoSpec(T_h, T_c, g1, g2, sub))
            for r in (st, ot):
                scale = _ledger_scale(r)
                e_cons = max(e_cons, abs(r.W - (r.Q_h + r.Q_c)) / scale)
                e_strokes = max(e_strokes, abs(r.W - r.ledger.total_heat) / scale,
                                abs(r.W - r.ledger.total_work) / scale)
                if r.W > 0 and r.Q_h > 0:
                    n_engine += 1
                    violation = max(violation, r.eta - r.eta_carnot)
                clausius = max(clausius, (r.Q_h / T_h + r.Q_c / T_c) * T_c / scale)
            a, b, c, dd = (st.ledger.anchors[x] for x in "ABCD")
            closed = T_h * (b.log_Z - a.log_Z) + T_c * (dd.log_Z - c.log_Z)
            e_closed = max(e_closed, abs(st.W - closed) / _ledger_scale(st))
            # ledger heat is T dS; compare with the dU + T d(ln Z) form
            e_iso = max(e_iso, abs(st.ledger["AB"].Q - (b.U - a.U + T_h * (b.log_Z - a.log_Z))),
                        abs(st.ledger["CD"].Q - (dd.U - c.U + T_c * (dd.log_Z - c.log_Z))))
            e_adiabat = max(e_adiabat, abs(ot.ledger["1-2"].Q), abs(ot.ledger["3-4"].Q))
            e_null = max(e_null,
                         abs(run_stirling(StirlingSpec(T_h, T_c, g1, g1, sub)).W),
                         abs(run_otto(OttoSpec(T_h, T_c, g1, g1, sub)).W))

    checks.append(_agree("ledger_W_eq_Qh_plus_Qc", e_cons, 1e-12, _SCALE_NOTE))
    checks.append(_agree("ledger_stroke_sums", e_strokes, 1e-12, _SCALE_NOTE))
    checks.append(_agree("stirling_work_closed_form", e_closed, 1e-12,
                         "W = T_h ln(Z_B/Z_A) + T_c ln(Z_D/Z_C); " + _SCALE_NOTE))
    checks.append(_agree("stirling_isotherm_T_dS_eq_dU_plus_T_dlnZ", e_iso, 1e-10))
    checks.append(_agree("otto_adiabats_carry_no_heat", e_adiabat, 0.0))
    checks.append(_agree("second_law_eta_le_carnot", max(violation, 0.0), 1e-9,
                         f"{n_engine} cycles with W > 0 and Q_h > 0"))
    checks.append(_agree("second_law_clausius", clausius, 1e-12,
                         "Q_h/T_h + Q_c/T_c <= 0, in units of scale/T_c"))
    checks.append(_agree("null_cycle_zero_work", e_null, 1e-12))

    # entanglement -------------------------------------------------------------------------
    e_trace = e_herm = e_psd = e_x = e_conc = e_flip = e_printed_rho = 0.0
    e_psi12 = e_psi34 = 0.0
    e_thermal = 0.0
    for i in range(m):
        fl = _fl(d, i)
        T = d["T"][i]
        rho = reduced_thermal_state(fl, T)
        r = rho.entries
        e_trace = max(e_trace, abs(np.trace(r) - 1.0))
        e_herm = max(e_herm, np.max(np.abs(r - r.conj().T)))
        e_psd = max(e_psd, max(0.0, -np.linalg.eigvalsh(r).min()))
        e_x = max(e_x, rho.off_x_magnitude())
        e_conc = max(e_conc, abs(concurrence_wootters(rho) - concurrence_x_state(rho)))
        e_flip = max(e_flip, np.max(np.abs(spin_flip(spin_flip(r)) - r)))

        H = four_level_block_hamiltonian(fl).entries
        full = thermal_density_from_hamiltonian(H, T)
        dec = eigh_symmetric(H)
        w = np.exp(-(dec.values - dec.values.min()) / T)
        w /= w.sum()
        e_thermal = max(e_thermal, np.max(np.abs(np.sort(np.linalg.eigvalsh(full)) - np.sort(w))),
                        np.max(np.abs(full @ H - H @ full)))

        if fl.g > 0 and 4 * max(abs(fl.J), abs(fl.k), four_level_alpha(fl)) / T < 300:
            e_printed_rho = max(e_printed_rho, np.max(np.abs(_printed_rho_ab(fl, T) - r)))

        psi = _printed_eigenvectors(fl)
        levels = dict(four_level_spectrum(fl).levels)
        res = [np.linalg.norm(H @ psi[:, j] - levels[f"E{j + 1}"] * psi[:, j]) for j in range(4)]
        e_psi12 = max(e_psi12, res[0], res[1])
        if fl.g > 0:
            e_psi34 = max(e_psi34, res[2], res[3])

    checks.append(_agree("reduced_state_trace", e_trace, 1e-10))
    checks.append(_agree("reduced_state_hermitian", e_herm, 1e-12))
    checks.append(_agree("reduced_state_psd", e_psd, 1e-10, "largest negative eigenvalue"))
    checks.append(_agree("reduced_state_x_structure", e_x, 1e-10))
    checks.append(_agree("concurrence_wootters_vs_x_formula", e_conc, 1e-10))
    checks.append(_agree("spin_flip_involution", e_flip, 1e-12))
    checks.append(_agree("thermal_density_weights_and_commutator", e_thermal, 1e-9))
    checks.append(_agree("printed_eigenvectors_psi1_psi2", e_psi12, 1e-10, "residual |H psi - E psi|"))
    checks.append(_disagree("printed_eigenvectors_psi3_psi4", e_psi34, 1e-6,
                            "gg/ee relative sign and normalisation inconsistent with the block"))
    checks.append(_disagree("printed_rho_ab_vs_oracle", e_printed_rho, 1e-6,
                            "printed reduced-state elements are not trace-consistent with Z"))

    grid_desc = {
        "draws": grid.size,
        "g": [0.0, grid.g_max],
        "k": list(grid.kJ_range),
        "J": list(grid.kJ_range),
        "n": list(grid.n_range),
        "omega": [1e-3, grid.omega_max],
        "T": list(grid.T_range),
    }
    return ValidationReport(checks, grid_desc, int(seed))
