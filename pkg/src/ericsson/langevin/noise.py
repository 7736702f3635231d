"""Symmetrised quantum noise of the Drude-cut Ohmic bath and its sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, EricssonError
from ..model import SystemParams

__all__ = [
    "NoiseModel",
    "symmetrized_noise_psd",
    "two_sided_psd",
    "colored_noise",
    "NoiseSynthesisError",
]


class NoiseSynthesisError(EricssonError, ArithmeticError):
    """The target spectrum cannot be realised as a Gaussian process."""


@dataclass(frozen=True)
class NoiseModel:
    gamma: float
    beta: float
    cutoff: float

    def __post_init__(self):
        if not self.gamma >= 0:
            raise DomainError("gamma", "must be >= 0")
        if not self.beta > 0:
            raise DomainError("beta", "must be > 0")
        if not self.cutoff > 0:
            raise DomainError("cutoff", "must be > 0")

    @classmethod
    def from_params(cls, p: SystemParams) -> NoiseModel:
        return cls(p.gamma, p.beta, p.omegaD)


def _omega_coth(omega, beta):
    # omega coth(beta omega / 2), finite at omega = 0
    omega = np.abs(np.asarray(omega, dtype=float))
    x = 0.5 * beta * omega
    small = x < 1e-4
    out = np.empty_like(omega)
    out[small] = (2.0 / beta) * (1.0 + x[small] ** 2 / 3.0)
    xs = x[~small]
    out[~small] = omega[~small] / np.tanh(xs)
    return out


def symmetrized_noise_psd(n: NoiseModel, omega):
    """One-sided spectrum ``S(w)`` of the anticommutator noise correlation.

    ``<{f(t), f(0)}> = int_0^inf S(w) cos(w t) dw`` with
    ``S(w) = (2 gamma / pi) w coth(beta w / 2) * cutoff**2 / (cutoff**2 + w**2)``.
    At ``w = 0`` the value is the limit ``4 gamma / (pi beta)``.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("omega", "must be >= 0")
    lorentz = n.cutoff**2 / (n.cutoff**2 + omega**2)
    out = (2.0 * n.gamma / math.pi) * _omega_coth(omega, n.beta) * lorentz
    return float(out) if out.ndim == 0 else out


def two_sided_psd(n: NoiseModel, omega):
    """Two-sided density ``G(w)`` with ``<{f,f}>(t)/2 = int G(w) e^{-iwt} dw / 2 pi``.

    ``G = (pi/2) S`` and equals ``w coth(beta w/2) Re gamma_hat(w)``, the
    fluctuation-dissipation partner of the Drude friction kernel.
    """
    omega = np.abs(np.asarray(omega, dtype=float))
    lorentz = n.cutoff**2 / (n.cutoff**2 + omega**2)
    return n.gamma * _omega_coth(omega, n.beta) * lorentz


def colored_noise(psd, n_samples: int, dt: float, rng: np.random.Generator, n_channels: int = 2, oversample: int = 2):
    """Stationary Gaussian series with two-sided density ``psd(w)``.

    Frequency-domain synthesis on a periodic grid of ``oversample *
    n_samples`` points; only the first ``n_samples`` are returned so that
    correlations shorter than ``(oversample - 1) n_samples dt`` are not wrapped.
    Each sample is the value held over one step ``dt``: the spectrum is
    represented up to the Nyquist frequency ``pi / dt``.

    Returns an array of shape ``(n_samples, n_channels)``; channels are
    independent.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    m = oversample * n_samples
    m += m % 2
    omega = 2.0 * math.pi * np.fft.rfftfreq(m, d=dt)
    g = np.asarray(psd(omega), dtype=float)
    if np.any(~np.isfinite(g)) or np.any(g < 0):
        raise NoiseSynthesisError("power spectral density must be finite and non-negative")
    amp = np.sqrt(m * g / dt)
    shape = (n_channels, omega.size)
    coeff = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (amp / math.sqrt(2.0))
    # zero and Nyquist bins of a real series are real with the full variance
    coeff[:, 0] = rng.standard_normal(n_channels) * amp[0]
    coeff[:, -1] = rng.standard_normal(n_channels) * amp[-1]
    series = np.fft.irfft(coeff, n=m, axis=1)[:, :n_samples]
    return series.T
