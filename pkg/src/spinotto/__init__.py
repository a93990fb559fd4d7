"""Quantum Otto cycle for a spin-1/2 exchange-coupled to an arbitrary spin.

The working medium is a pair: a spin-1/2 (A) and a spin s (B) with isotropic
exchange J in a shared field B. The cycle compresses the field from B1 to B2
between a hot bath T1 and a cold bath T2. `otto_cycle` handles the global
energetics, `local_thermo` splits them into per-spin books and effective
temperatures, `coop_work` isolates the correlation part of the work, and
`sweep_cli` drives parameter scans from the command line.
"""

from .coop_work import (
    CoopResult,
    GeneralizedConfig,
    MeanFieldSplit,
    cooperativity_ratio,
    mean_field_split,
    run_generalized_cycle,
)
from .local_thermo import (
    LocalResult,
    TemperatureAssessment,
    adiabatic_temperature_map,
    effective_temperature,
    local_analysis,
    local_efficiency,
)
from .otto_cycle import (
    CycleResult,
    EngineConfig,
    StrongCouplingLimits,
    classify_mode,
    critical_coupling,
    cycle_from_energies,
    efficiency_bound,
    run_cycle,
    strong_coupling_limits,
)
from .spin_algebra import (
    DiagonalizationError,
    Level,
    PairHamiltonian,
    Spectrum,
    Spin,
    analytic_spectrum,
    build_hamiltonian,
    diagonalize,
    jacobi_eigh,
    level_energies,
    level_labels,
    match_levels,
    spin_operators,
)
from .sweep_cli import SweepRow, SweepSpec, emit_plot_script, rows_to_csv, run_sweep
from .thermal import (
    ReducedState,
    ThermalState,
    boltzmann_weights,
    equilibrium,
    gibbs_state,
    partial_trace,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Spin", "PairHamiltonian", "Spectrum", "Level", "DiagonalizationError",
    "spin_operators", "build_hamiltonian", "level_labels", "level_energies",
    "analytic_spectrum", "jacobi_eigh", "diagonalize", "match_levels",
    "ThermalState", "ReducedState", "boltzmann_weights", "gibbs_state",
    "equilibrium", "partial_trace",
    "EngineConfig", "CycleResult", "StrongCouplingLimits", "classify_mode",
    "run_cycle", "cycle_from_energies", "efficiency_bound",
    "strong_coupling_limits", "critical_coupling",
    "LocalResult", "TemperatureAssessment", "local_analysis",
    "local_efficiency", "effective_temperature", "adiabatic_temperature_map",
    "GeneralizedConfig", "MeanFieldSplit", "CoopResult", "mean_field_split",
    "run_generalized_cycle", "cooperativity_ratio",
    "SweepSpec", "SweepRow", "run_sweep", "rows_to_csv", "emit_plot_script",
]
