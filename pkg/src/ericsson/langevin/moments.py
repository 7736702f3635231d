"""Stationary symmetrised second moments from the fluctuation-dissipation route."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..errors import ConvergenceError, DomainError, StabilityError
from ..model import SystemParams
from .drift import NOISE_INPUT, drude_drift
from .noise import NoiseModel, two_sided_psd

__all__ = ["StationaryMoments", "stationary_covariance", "stationary_moments"]

QUAD_EPSABS = 1e-9


def _breakpoints(a):
    rates = np.abs(np.linalg.eigvals(a))
    slow = float(np.min(rates[rates > 0])) if np.any(rates > 0) else 1.0
    fast = float(np.max(rates))
    ringing = float(np.abs(np.linalg.eigvals(a).imag).max())
    return sorted({0.0, 4.0 * max(ringing, slow), 10.0 * fast})


def stationary_covariance(p: SystemParams, epsabs: float = QUAD_EPSABS) -> np.ndarray:
    """Symmetrised 6x6 covariance of ``(x, y, v_x, v_y, u_x, u_y)``.

    ``C = (1/pi) int_0^inf G(w) Re[R R^dagger] dw`` with
    ``R = (i w - A)^-1 B`` the state response to the two noise channels
    and ``G`` the two-sided noise density.

    Raises
    ------
    DomainError
        For ``gamma == 0`` (no stationary state is approached).
    StabilityError
        If the drift has a non-decaying mode.
    ConvergenceError
        If adaptive quadrature misses ``epsabs``.
    """
    if p.gamma <= 0:
        raise DomainError("gamma", "stationary moments need gamma > 0")
    a = drude_drift(p)
    if np.max(np.linalg.eigvals(a).real) >= 0:
        raise StabilityError("drift has an eigenvalue with non-negative real part")
    noise = NoiseModel.from_params(p)
    eye = np.eye(6)

    def integrand(w):
        r = np.linalg.solve(1j * w * eye - a, NOISE_INPUT)
        return (two_sided_psd(noise, w) / math.pi) * (r @ r.conj().T).real

    edges = _breakpoints(a) + [np.inf]
    total = np.zeros((6, 6))
    for lo, hi in zip(edges[:-1], edges[1:]):
        res, err, info = integrate.quad_vec(
            integrand, lo, hi, epsabs=epsabs / len(edges), epsrel=1e-10, limit=2000, full_output=True
        )
        if not info.success or err > epsabs:
            raise ConvergenceError(f"spectral integral on [{lo:g}, {hi:g}] err={err:.2e}")
        total += res
    return 0.5 * (total + total.T)


@dataclass(frozen=True)
class StationaryMoments:
    """Equal-time symmetrised moments of position and kinetic velocity.

    ``energy`` is the mean trap Hamiltonian ``<v^2>/2 + omega0^2 <r^2>/2`` and
    ``magnetization`` the mean moment ``(<y v_x> - <x v_y>)/2``.
    """

    xx: float
    yy: float
    xy: float
    vxvx: float
    vyvy: float
    vxvy: float
    xvx: float
    yvy: float
    xvy: float
    yvx: float
    energy: float
    magnetization: float
    covariance: np.ndarray


def stationary_moments(p: SystemParams, epsabs: float = QUAD_EPSABS) -> StationaryMoments:
    """Stationary moments and mean system energy at parameters ``p``."""
    c = stationary_covariance(p, epsabs)
    x, y, vx, vy = range(4)
    energy = 0.5 * (c[vx, vx] + c[vy, vy]) + 0.5 * p.omega0**2 * (c[x, x] + c[y, y])
    return StationaryMoments(
        xx=c[x, x],
        yy=c[y, y],
        xy=c[x, y],
        vxvx=c[vx, vx],
        vyvy=c[vy, vy],
        vxvy=c[vx, vy],
        xvx=c[x, vx],
        yvy=c[y, vy],
        xvy=c[x, vy],
        yvx=c[y, vx],
        energy=float(energy),
        magnetization=float(0.5 * (c[y, vx] - c[x, vy])),
        covariance=c,
    )
