"""Finite-time quantum Otto engine simulator for a driven spin-1/2
working medium operating between a positive-temperature reservoir and a
population-inverted (effective negative temperature) reservoir.

Planck's constant is set to 1 throughout: frequencies in Hz, inverse
temperatures in 1/Hz, energies in h*Hz.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .analysis import (
    FidelityPair,
    FidelityReport,
    ReferenceCheck,
    SweepTable,
    fidelity,
    find_crossing_population,
    load_reference_data,
    region_map,
    sweep_efficiency_vs_population,
    sweep_efficiency_vs_ratio,
    sweep_xi_vs_tau,
    tomography_reference_check,
)
from .errors import (
    AccuracyError,
    DegeneracyError,
    DomainError,
    InfiniteTemperatureError,
    RegimeError,
)
from .otto import (
    CyclePoint,
    CycleResult,
    CycleStates,
    EngineCondition,
    Regime,
    adiabatic_work,
    closed_form_cycle,
    cycle_from_protocol,
    efficiency,
    efficiency_ratio_form,
    engine_condition,
    eta_otto,
    evolve_cycle_states,
    heat_cold,
    heat_hot,
    inner_friction,
    net_work,
    regime,
    thermal_weights,
    trace_cycle,
)
from .propagator import (
    DEFAULT_STEPS,
    Propagator,
    RampProtocol,
    TransitionSymmetry,
    propagate,
    suggested_steps,
    transition_probability,
    transition_symmetry,
)
from .qspin import (
    DensityMatrix,
    Eigenbasis,
    ReservoirSpec,
    beta_from_population,
    eigenbasis,
    gibbs_state,
    pauli,
    population_from_beta,
    ramp_hamiltonian,
    stroke_hamiltonian,
)

__all__ = [
    "AccuracyError",
    "CyclePoint",
    "CycleResult",
    "CycleStates",
    "DEFAULT_STEPS",
    "DegeneracyError",
    "DensityMatrix",
    "DomainError",
    "Eigenbasis",
    "EngineCondition",
    "FidelityPair",
    "FidelityReport",
    "InfiniteTemperatureError",
    "KERNEL_BACKEND",
    "Propagator",
    "RampProtocol",
    "ReferenceCheck",
    "Regime",
    "RegimeError",
    "ReservoirSpec",
    "SweepTable",
    "TransitionSymmetry",
    "adiabatic_work",
    "beta_from_population",
    "closed_form_cycle",
    "cycle_from_protocol",
    "efficiency",
    "efficiency_ratio_form",
    "eigenbasis",
    "engine_condition",
    "eta_otto",
    "evolve_cycle_states",
    "fidelity",
    "find_crossing_population",
    "gibbs_state",
    "heat_cold",
    "heat_hot",
    "inner_friction",
    "load_reference_data",
    "net_work",
    "pauli",
    "population_from_beta",
    "propagate",
    "ramp_hamiltonian",
    "regime",
    "region_map",
    "stroke_hamiltonian",
    "suggested_steps",
    "sweep_efficiency_vs_population",
    "sweep_efficiency_vs_ratio",
    "sweep_xi_vs_tau",
    "thermal_weights",
    "tomography_reference_check",
    "trace_cycle",
    "transition_probability",
    "transition_symmetry",
]
