"""Thermodynamics of a damped charged oscillator in a magnetic field.

Equilibrium quantities come from closed Gamma-function forms of the
partition function (:mod:`ericsson.gibbs`), the magnetic Ericsson cycle
from four-corner free energies (:mod:`ericsson.cycle`), and an independent
time-domain route from the quantum Langevin equations
(:mod:`ericsson.langevin`).
"""
from .cycle import CycleResult, CycleSpec, cycle_heat, cycle_work, efficiency, leg_heats, sweep
from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    EricssonError,
    PoleError,
    StabilityError,
    StepSizeError,
)
from .gibbs import (
    ThermoState,
    entropy,
    free_energy_free_limit,
    free_energy_gamma,
    free_energy_matsubara,
    internal_energy,
    magnetization,
    thermo_state,
)
from .model import DEFAULT_PARAMS, RegimeWarning, SystemParams, fock_darwin, make_params

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CycleResult",
    "CycleSpec",
    "cycle_heat",
    "cycle_work",
    "efficiency",
    "leg_heats",
    "sweep",
    "ConsistencyError",
    "ConvergenceError",
    "DomainError",
    "EricssonError",
    "PoleError",
    "StabilityError",
    "StepSizeError",
    "ThermoState",
    "entropy",
    "free_energy_free_limit",
    "free_energy_gamma",
    "free_energy_matsubara",
    "internal_energy",
    "magnetization",
    "thermo_state",
    "DEFAULT_PARAMS",
    "RegimeWarning",
    "SystemParams",
    "fock_darwin",
    "make_params",
]
