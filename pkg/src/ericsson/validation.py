"""Cross-route invariant suite behind ``ericsson validate``.

Every check returns a :class:`Check` with the measured value, the tolerance
it is held to and a status: ``pass``, ``fail``, ``report`` (measured but not
asserted) or ``skip`` (not applicable at these parameters).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .cycle import CycleSpec, efficiency
from .gibbs import (
    _f_free,
    _f_gamma,
    entropy,
    entropy_fd,
    free_energy_gamma,
    free_energy_matsubara,
    internal_energy,
    internal_energy_fd,
    magnetization,
    magnetization_fd,
)
from .model import SystemParams, cubic_coefficients, fock_darwin
from .specfun import cubic_residuals, solve_cubic

__all__ = ["Check", "run_checks", "noise_psd_error", "low_temperature_entropy_slope", "REFERENCE_CYCLE"]

# b1, b2, t_cold, t_hot
REFERENCE_CYCLE = (0.5, 2.0, 0.5, 1.0)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    status: str


def _le(name, value, tol):
    return Check(name, float(value), tol, "pass" if value <= tol else "fail")


def low_temperature_entropy_slope(p: SystemParams) -> float:
    """``lim_{T->0} S/T = 2 pi gamma / (3 omega0**2)`` for Ohmic damping.

    Each of the two trap directions contributes the one-dimensional damped
    oscillator value ``pi gamma / (3 omega0**2)``, independent of the field.
    """
    return 2.0 * math.pi * p.gamma / (3.0 * p.omega0**2)


def noise_psd_error(p: SystemParams, n_samples=2**20, dt=0.05, seed=0, band=(0.1, 10.0), n_bands=5) -> float:
    """Worst band-averaged relative error of the sampled noise spectrum.

    Both channels of a series from
    :func:`~ericsson.langevin.noise.colored_noise` are analysed with Welch's
    method and averaged; the one-sided per-Hz density of the process is
    ``2 G(w)``. The comparison averages over ``n_bands`` log-spaced bands of
    ``band * omega0``.
    """
    from .langevin.noise import NoiseModel, colored_noise, two_sided_psd

    n = NoiseModel.from_params(p)
    rng = np.random.default_rng(seed)
    x = colored_noise(lambda w: two_sided_psd(n, w), n_samples, dt, rng)
    f, pxx = signal.welch(x, fs=1.0 / dt, nperseg=min(2**12, n_samples), axis=0)
    pxx = pxx.mean(axis=1)
    omega = 2.0 * math.pi * f
    target = 2.0 * two_sided_psd(n, omega)
    edges = np.geomspace(band[0] * p.omega0, band[1] * p.omega0, n_bands + 1)
    worst = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (omega >= lo) & (omega < hi)
        worst = max(worst, abs(pxx[sel].mean() / target[sel].mean() - 1.0))
    return worst


def _gibbs_checks(p):
    out = []
    f = free_energy_gamma(p)
    fm = free_energy_matsubara(p)
    out.append(_le("gamma_form_vs_matsubara", abs(f - fm) / max(1.0, abs(f)), 1e-7))
    f_lim = _f_gamma(p.omega0, p.omegac, 1e-10, 1e6, p.beta)
    out.append(_le("weak_damping_limit", abs(f_lim - _f_free(p.omega0, p.omegac, p.beta)), 1e-5))
    eps, s, m = internal_energy(p), entropy(p), magnetization(p)
    out.append(_le("legendre_identity", abs(f - (eps - s / p.beta)) / max(1.0, abs(f)), 1e-8))
    for name, exact, fd in (
        ("internal_energy_fd", eps, internal_energy_fd(p)),
        ("entropy_fd", s, entropy_fd(p)),
        ("magnetization_fd", m, magnetization_fd(p)),
    ):
        out.append(_le(name, abs(exact - fd) / max(1.0, abs(exact)), 1e-6))
    c = cubic_coefficients(p)
    out.append(_le("cubic_vieta", max(cubic_residuals(solve_cubic(c).lam, c)), 1e-10))
    return out


def _third_law_checks(p):
    betas = (10.0, 20.0, 50.0)
    s = [entropy(p.replace(beta=b)) for b in betas]
    ratio = max(s[1] / s[0], s[2] / s[1]) if s[0] > 0 else 0.0
    out = [Check("third_law_monotone", ratio, 1.0, "pass" if all(np.diff(s) < 0) else "fail")]
    slope = low_temperature_entropy_slope(p)
    beta_lo = 2000.0 / p.omega0
    measured = entropy(p.replace(beta=beta_lo)) * beta_lo
    if slope > 0:
        out.append(_le("third_law_linear_slope", abs(measured / slope - 1.0), 1e-3))
    else:
        out.append(_le("third_law_linear_slope", abs(measured), 1e-6))
    return out


def _cycle_checks(p):
    b1, b2, tc, th = REFERENCE_CYCLE
    r = efficiency(CycleSpec(b1, b2, tc, th, p))
    out = []
    if r.eta is None:
        out.append(Check("second_law", float("nan"), 1e-9, "skip"))
    else:
        ok = 0 < r.eta <= r.eta_carnot + 1e-9
        out.append(Check("second_law", r.eta - r.eta_carnot, 1e-9, "pass" if ok else "fail"))
    if p.gamma < 1e-6 or r.eta is None:
        out.append(Check("damping_dependence", float("nan"), 1e-6, "skip"))
    else:
        r0 = efficiency(CycleSpec(b1, b2, tc, th, p.replace(gamma=1e-10)))
        gap = abs(r.eta - r0.eta) if r0.eta is not None else float("nan")
        out.append(Check("damping_dependence", gap, 1e-6, "pass" if gap > 1e-6 else "fail"))
    return out


def _langevin_checks(p):
    from .langevin.drift import build_drift, drude_drift
    from .langevin.moments import stationary_moments
    from .langevin.trajectory import Protocol, max_time_step, quasiclassical_trajectory

    out = []
    fd = fock_darwin(p)
    ev = np.sort_complex(build_drift(p.replace(gamma=0.0)).eigenvalues)
    expected = np.sort_complex(np.array([1j, -1j, 1j, -1j]) * np.repeat([fd.omega_plus, fd.omega_minus], 2))
    out.append(_le("free_drift_modes", np.max(np.abs(ev - expected)) / fd.omega_plus, 1e-10))

    lam = solve_cubic(cubic_coefficients(p)).lam
    target = np.concatenate([-lam, -np.conj(lam)])
    ev6 = np.linalg.eigvals(drude_drift(p))
    gap = max(np.min(np.abs(ev6 - t)) for t in target) / max(np.abs(target))
    out.append(_le("drude_drift_roots", gap, 1e-10))

    if p.gamma <= 0:
        for name in ("magnetization_cross_route", "isotropy", "energy_cross_route"):
            out.append(Check(name, float("nan"), 0.0, "skip"))
    else:
        m = stationary_moments(p)
        mg = magnetization(p)
        out.append(_le("magnetization_cross_route", abs(m.magnetization - mg) / max(1.0, abs(mg)), 1e-6))
        iso = max(abs(m.xx - m.yy), abs(m.vxvx - m.vyvy)) / max(m.xx, m.vxvx)
        out.append(_le("isotropy", iso, 1e-8))
        eps = internal_energy(p)
        out.append(Check("energy_cross_route", abs(m.energy - eps) / abs(eps), 0.01, "report"))

    q = p.replace(gamma=max(p.gamma, 0.1))
    protocol = Protocol.linear(p.omegac, p.omegac + 1.0, 5.0)
    dt = max_time_step(q, protocol)
    r = quasiclassical_trajectory(q, protocol, seed=0, dt=dt, t_end=min(5.0, 2000 * dt))
    out.append(_le("first_law_per_step", float(r.relative_residual.max()), 1e-12))
    out.append(_le("noise_spectrum", noise_psd_error(q), 0.05))
    return out


def run_checks(p: SystemParams) -> list[Check]:
    """Run the full invariant suite at parameters ``p``."""
    return _gibbs_checks(p) + _third_law_checks(p) + _cycle_checks(p) + _langevin_checks(p)
