"""Physical parameters, unit conventions and derived frequencies.

Natural units throughout: hbar = k_B = m = |e| = c = 1. In these units the
magnetic field and the cyclotron frequency coincide, so every module reads
the field through ``omegac`` and the magnetisation is ``-dF/d(omegac)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError
from .specfun import CubicCoefficients

__all__ = [
    "SystemParams",
    "RegimeWarning",
    "make_params",
    "matsubara_frequency",
    "FockDarwinFrequencies",
    "fock_darwin",
    "cubic_coefficients",
    "DEFAULT_PARAMS",
]


class RegimeWarning(UserWarning):
    """Parameters are valid but outside the high-cutoff Drude regime."""


@dataclass(frozen=True)
class SystemParams:
    """Trap frequency, field, Ohmic damping, Drude cutoff and inverse temperature.

    Use :func:`make_params` for validated construction.
    """

    omega0: float
    omegac: float
    gamma: float
    omegaD: float
    beta: float

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta

    @property
    def field(self) -> float:
        return self.omegac

    def replace(self, **changes) -> SystemParams:
        """Validated copy with some fields changed."""
        fields = {k: getattr(self, k) for k in ("omega0", "omegac", "gamma", "omegaD", "beta")}
        fields.update(changes)
        return make_params(**fields, warn=False)

    def as_dict(self) -> dict:
        return {
            "omega0": self.omega0,
            "omegac": self.omegac,
            "gamma": self.gamma,
            "omegaD": self.omegaD,
            "beta": self.beta,
        }


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(name, f"must be finite, got {value!r}")
    return value


def make_params(omega0, omegac, gamma, omegaD, beta, *, warn=True) -> SystemParams:
    """Validate and build a :class:`SystemParams`.

    ``omega0``, ``omegaD`` and ``beta`` must be strictly positive; ``omegac``
    and ``gamma`` may be zero. A :class:`RegimeWarning` is issued when the
    Drude cutoff does not exceed the other frequencies.

    Raises
    ------
    DomainError
        Naming the first offending field.
    """
    omega0 = _finite("omega0", omega0)
    omegac = _finite("omegac", omegac)
    gamma = _finite("gamma", gamma)
    omegaD = _finite("omegaD", omegaD)
    beta = _finite("beta", beta)
    for name, value in (("omega0", omega0), ("omegaD", omegaD), ("beta", beta)):
        if value <= 0:
            raise DomainError(name, f"must be > 0, got {value!r}")
    for name, value in (("omegac", omegac), ("gamma", gamma)):
        if value < 0:
            raise DomainError(name, f"must be >= 0, got {value!r}")
    if warn and omegaD <= max(omega0, omegac, gamma):
        warnings.warn(
            f"Drude cutoff omegaD={omegaD:g} does not exceed "
            f"max(omega0, omegac, gamma)={max(omega0, omegac, gamma):g}",
            RegimeWarning,
            stacklevel=2,
        )
    return SystemParams(omega0, omegac, gamma, omegaD, beta)


DEFAULT_PARAMS = SystemParams(omega0=1.0, omegac=0.5, gamma=0.2, omegaD=100.0, beta=1.0)


def matsubara_frequency(beta: float) -> float:
    """First bosonic Matsubara frequency ``2 pi / beta``."""
    if beta <= 0:
        raise DomainError("beta", f"must be > 0, got {beta!r}")
    return 2.0 * math.pi / beta


@dataclass(frozen=True)
class FockDarwinFrequencies:
    """Normal-mode frequencies of the undamped trap in a perpendicular field."""

    omega_plus: float
    omega_minus: float

    @property
    def zero_point_energy(self) -> float:
        return 0.5 * (self.omega_plus + self.omega_minus)


def _fock_darwin(omega0, omegac):
    root = math.hypot(omega0, 0.5 * omegac)
    wp = root + 0.5 * abs(omegac)
    # omega0**2 / wp avoids cancellation in root - |omegac|/2 at strong field
    wm = omega0 * omega0 / wp
    return wp, wm


def fock_darwin(p: SystemParams) -> FockDarwinFrequencies:
    """``omega_pm = sqrt(omega0**2 + omegac**2/4) +- omegac/2``."""
    return FockDarwinFrequencies(*_fock_darwin(p.omega0, p.omegac))


def _cubic_coefficients(omega0, omegac, gamma, omegaD):
    return CubicCoefficients(
        e1=complex(omegaD, omegac),
        e2=complex(omega0 * omega0 + gamma * omegaD, omegac * omegaD),
        e3=complex(omega0 * omega0 * omegaD, 0.0),
    )


def cubic_coefficients(p: SystemParams) -> CubicCoefficients:
    """Symmetric functions of the damped-mode roots.

    The cubic ``(s + omegaD)(s**2 + i omegac s + omega0**2) + gamma omegaD s``
    factorises as ``prod_j (s + lam_j)``; its coefficients are returned.
    """
    return _cubic_coefficients(p.omega0, p.omegac, p.gamma, p.omegaD)

