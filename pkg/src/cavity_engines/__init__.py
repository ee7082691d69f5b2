"""Quantum Otto and Stirling engines with cavity-QED working substances."""

__version__ = "0.1.0"

from .cycles import (  # noqa: E402
    CycleResult,
    OttoSpec,
    StirlingSpec,
    carnot_efficiency,
    positive_work_window,
    run_otto,
    run_stirling,
)
from .entanglement import (  # noqa: E402
    concurrence_wootters,
    concurrence_x_state,
    correlation_work_profile,
    reduced_thermal_state,
)
from .spectra import (  # noqa: E402
    FourLevelParams,
    JCParams,
    Spectrum,
    four_level_spectrum,
    jc_spectrum,
)
from .thermo import thermo_potentials  # noqa: E402

__all__ = [
    "CycleResult",
    "FourLevelParams",
    "JCParams",
    "OttoSpec",
    "Spectrum",
    "StirlingSpec",
    "carnot_efficiency",
    "concurrence_wootters",
    "concurrence_x_state",
    "correlation_work_profile",
    "four_level_spectrum",
    "jc_spectrum",
    "positive_work_window",
    "reduced_thermal_state",
    "run_otto",
    "run_stirling",
    "thermo_potentials",
]
