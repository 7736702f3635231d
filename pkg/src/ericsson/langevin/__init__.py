"""Quantum Langevin dynamics: drift, noise, stationary moments, trajectories."""
from .drift import NOISE_INPUT, STATE_LABELS, DriftMatrix, build_drift, drude_drift
from .moments import StationaryMoments, stationary_covariance, stationary_moments
from .noise import NoiseModel, NoiseSynthesisError, colored_noise, symmetrized_noise_psd, two_sided_psd
from .trajectory import (
    EnsembleSummary,
    Protocol,
    TrajectoryRecord,
    magnetic_moment,
    max_time_step,
    quasiclassical_trajectory,
    run_ensemble,
)

__all__ = [
    "NOISE_INPUT",
    "STATE_LABELS",
    "DriftMatrix",
    "build_drift",
    "drude_drift",
    "StationaryMoments",
    "stationary_covariance",
    "stationary_moments",
    "NoiseModel",
    "NoiseSynthesisError",
    "colored_noise",
    "symmetrized_noise_psd",
    "two_sided_psd",
    "EnsembleSummary",
    "Protocol",
    "TrajectoryRecord",
    "magnetic_moment",
    "max_time_step",
    "quasiclassical_trajectory",
    "run_ensemble",
]
