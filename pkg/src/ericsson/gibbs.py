"""Equilibrium thermodynamics from the reduced partition function.

For Ohmic damping with a Drude cutoff the partition function is a product
over bosonic Matsubara frequencies ``nu_n = 2 pi n / beta``::

    Z = (beta omega0)**-2 * prod_{n>=1} nu_n**4 / |D(nu_n)|**2,
    D(nu) = nu**2 + nu gamma omegaD / (nu + omegaD) + omega0**2 + i omegac nu.

Multiplying through by ``(nu + omegaD)`` turns ``D`` into the cubic
``prod_j (nu + lam_j)`` (see :func:`ericsson.model.cubic_coefficients`) and the
infinite product collapses onto Gamma functions::

    beta F = -2 log(beta omega0 / (4 pi**2))
             - sum_j [log G(lam_j/nu) + log G(conj(lam_j)/nu)]
             + 2 log G(omegaD/nu),                       nu = 2 pi / beta.

The ``4 pi**2`` inside the leading logarithm is what remains of
``(beta omega0)**-2`` after the identity ``G(1 + z) = z G(z)`` has been used
to move the ``n = 0`` factors out of the Gamma functions:
``(beta omega0)**-2 (omega0/nu)**4 = (beta omega0 / 4 pi**2)**2``.
:func:`free_energy_matsubara` evaluates the product directly (from ``D``, not
from the roots) and is the independent check on this bookkeeping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConsistencyError, ConvergenceError
from .model import SystemParams, _cubic_coefficients, _fock_darwin
from .specfun import digamma, digamma_shift, log_gamma, log_gamma_shift, solve_cubic

__all__ = [
    "free_energy_gamma",
    "free_energy_matsubara",
    "matsubara_partial_sum",
    "free_energy_free_limit",
    "internal_energy",
    "internal_energy_fd",
    "magnetization",
    "magnetization_fd",
    "entropy",
    "entropy_fd",
    "ThermoState",
    "thermo_state",
]

TWO_PI = 2.0 * math.pi
IMAG_RTOL = 1e-9
FD_RSTEP = 1e-4


# --- closed forms on raw floats ----------------------------------------------
# These accept a signed omegac so that finite differences through zero field
# and the evenness property can be evaluated.

def _log_2sinh(x):
    # log(2 sinh x) without overflow at large x
    if x > 20.0:
        return x + math.log1p(-math.exp(-2.0 * x))
    return math.log(2.0 * math.sinh(x))


def _coth(x):
    if x > 20.0:
        return 1.0 + 2.0 * math.exp(-2.0 * x)
    return 1.0 / math.tanh(x)


def _free_modes(omega0, omegac):
    wp, wm = _fock_darwin(omega0, omegac)
    return (wp, wm) if omegac >= 0 else (wm, wp)


def _f_free(omega0, omegac, beta):
    return sum(_log_2sinh(0.5 * beta * w) for w in _fock_darwin(omega0, omegac)) / beta


def _eps_free(omega0, omegac, beta):
    return sum(0.5 * w * _coth(0.5 * beta * w) for w in _fock_darwin(omega0, omegac))


def _m_free(omega0, omegac, beta):
    # modes R +- omegac/2 with signed omegac; d(omega_pm)/d(omegac) = omegac/4R +- 1/2
    wp, wm = _free_modes(omega0, omegac)
    r = math.hypot(omega0, 0.5 * omegac)
    dwp = 0.25 * omegac / r + 0.5
    dwm = 0.25 * omegac / r - 0.5
    return -0.5 * (_coth(0.5 * beta * wp) * dwp + _coth(0.5 * beta * wm) * dwm)


def _roots(omega0, omegac, gamma, omegaD):
    return solve_cubic(_cubic_coefficients(omega0, omegac, gamma, omegaD))


def _real(value, scale, what):
    if abs(value.imag) > IMAG_RTOL * max(1.0, abs(scale)):
        raise ConsistencyError(
            f"{what}: imaginary residue {value.imag:.3e} exceeds "
            f"{IMAG_RTOL:g} relative (real part {value.real:.6e})"
        )
    return float(value.real)


def _drude_split(omega0, omegac, gamma, omegaD):
    """Roots with the cutoff-tracking one replaced by its offset from omegaD.

    Returns ``(roots, others, delta)``: the two roots not near ``omegaD`` and
    ``delta = lam_D - omegaD`` refined on the shifted cubic, whose constant
    term ``gamma omegaD**2`` is exact, so ``delta`` keeps full relative
    precision however large the cutoff.
    """
    roots = _roots(omega0, omegac, gamma, omegaD)
    lam = roots.lam
    j = int(np.argmin(np.abs(lam - omegaD)))
    c2 = complex(2.0 * omegaD, -omegac)
    c1 = complex(omegaD * omegaD + omega0 * omega0 + gamma * omegaD, -omegac * omegaD)
    c0 = gamma * omegaD * omegaD
    d = lam[j] - omegaD
    for _ in range(6):
        q = ((d + c2) * d + c1) * d + c0
        dq = (3.0 * d + 2.0 * c2) * d + c1
        step = q / dq
        d -= step
        if abs(step) <= 1e-16 * abs(d):
            break
    return roots, np.delete(lam, j), complex(d)


def _f_gamma(omega0, omegac, gamma, omegaD, beta):
    if gamma == 0.0:
        return _f_free(omega0, omegac, beta)
    nu = TWO_PI / beta
    _, others, delta = _drude_split(omega0, omegac, gamma, omegaD)
    lg = log_gamma(others / nu).sum() + log_gamma(np.conj(others) / nu).sum()
    lg_real = _real(lg, lg.real, "Gamma-product")
    # log G(lam_D/nu) + log G(conj lam_D/nu) - 2 log G(omegaD/nu)
    shift = 2.0 * log_gamma_shift(omegaD / nu, delta / nu).real
    return (-2.0 * math.log(beta * omega0 / (4.0 * math.pi**2)) - lg_real - shift) / beta


def _eps_gamma(omega0, omegac, gamma, omegaD, beta):
    if gamma == 0.0:
        return _eps_free(omega0, omegac, beta)
    nu = TWO_PI / beta
    _, others, delta = _drude_split(omega0, omegac, gamma, omegaD)
    a = omegaD / nu
    # d/dbeta of log G(lam beta / 2 pi) is psi(lam/nu) lam / 2 pi; conjugates double the real part
    s = np.sum(others * digamma(others / nu)).real
    # lam_D psi(lam_D/nu) - omegaD psi(omegaD/nu), split to avoid cancellation
    s += (omegaD * digamma_shift(a, delta / nu) + delta * digamma(a + delta / nu)).real
    return -2.0 / beta - s / math.pi


def _m_gamma(omega0, omegac, gamma, omegaD, beta):
    if gamma == 0.0:
        return _m_free(omega0, omegac, beta)
    nu = TWO_PI / beta
    roots = _roots(omega0, omegac, gamma, omegaD)
    lam = roots.lam
    # implicit differentiation of the cubic: dp/domegac = -i lam**2 + i omegaD lam
    dlam = 1j * lam * (lam - omegaD) / roots.coefficients.derivative(lam)
    return float(np.sum(digamma(lam / nu) * dlam).real / math.pi)


def _richardson(fn, x, h):
    d1 = (fn(x + h) - fn(x - h)) / (2.0 * h)
    d2 = (fn(x + 0.5 * h) - fn(x - 0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


# --- public operations --------------------------------------------------------

def free_energy_gamma(p: SystemParams) -> float:
    """Helmholtz free energy from the Gamma-function closed form.

    ``gamma == 0`` is routed to :func:`free_energy_free_limit`, which is the
    exact value of the closed form there for any cutoff.
    """
    return _f_gamma(p.omega0, p.omegac, p.gamma, p.omegaD, p.beta)


def free_energy_free_limit(p: SystemParams) -> float:
    """Two decoupled oscillators at the Fock-Darwin frequencies.

    ``F0 = (1/beta) [log 2 sinh(beta w+/2) + log 2 sinh(beta w-/2)]``; damping
    and cutoff are ignored.
    """
    return _f_free(p.omega0, p.omegac, p.beta)


def _matsubara_summand(n, beta, omega0, omegac, gamma, omegaD):
    """``log(|D(nu_n)|**2 / nu_n**4)`` written to stay accurate as it decays."""
    nu = TWO_PI * n / beta
    q = gamma * omegaD / (nu * (nu + omegaD)) + (omega0 / nu) ** 2
    return np.log1p(2.0 * q + q * q + (omegac / nu) ** 2)


def _euler_maclaurin_tail(n_max, args):
    """``sum_{n > n_max} f(n)`` via integral plus endpoint corrections."""
    f = lambda x: _matsubara_summand(x, *args)
    # substitute x = n_max / t so the infinite range maps onto (0, 1]
    g = lambda t: f(n_max / t) * n_max / (t * t)
    integral, err = integrate.quad(g, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=400)
    h = 1e-20 * n_max
    fprime = f(complex(n_max, h)).imag / h
    return integral - 0.5 * f(float(n_max)) - fprime / 12.0, err


def matsubara_partial_sum(p: SystemParams, n_max: int, use_acceleration: bool = True) -> float:
    """Free energy from the first ``n_max`` Matsubara factors.

    With ``use_acceleration`` the remainder of the series is added through an
    Euler-Maclaurin estimate (integral of the summand plus the first two
    endpoint corrections).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    args = (p.beta, p.omega0, p.omegac, p.gamma, p.omegaD)
    n = np.arange(1, n_max + 1, dtype=float)
    total = math.fsum(_matsubara_summand(n, *args))
    if use_acceleration:
        tail, _ = _euler_maclaurin_tail(n_max, args)
        total += tail
    return (2.0 * math.log(p.beta * p.omega0) + total) / p.beta


def free_energy_matsubara(
    p: SystemParams,
    n_max: int = 100_000,
    use_acceleration: bool = True,
    tol: float = 1e-9,
) -> float:
    """Independent free energy by direct evaluation of the Matsubara product.

    The series is evaluated at ``n_max`` and ``2 n_max``; the second value is
    returned once the two agree to ``tol * max(1, |F|)``.

    Raises
    ------
    ConvergenceError
        If the doubling test fails.
    """
    f1 = matsubara_partial_sum(p, n_max, use_acceleration)
    f2 = matsubara_partial_sum(p, 2 * n_max, use_acceleration)
    if abs(f1 - f2) > tol * max(1.0, abs(f2)):
        raise ConvergenceError(
            f"Matsubara series not converged at n_max={n_max}: "
            f"|F(n_max) - F(2 n_max)| = {abs(f1 - f2):.3e}"
        )
    return f2


def internal_energy(p: SystemParams) -> float:
    """``d(beta F)/d beta`` evaluated analytically through digamma functions."""
    return _eps_gamma(p.omega0, p.omegac, p.gamma, p.omegaD, p.beta)


def internal_energy_fd(p: SystemParams, rel_step: float = FD_RSTEP) -> float:
    """Richardson-extrapolated central difference of ``beta F`` in ``beta``."""
    a = (p.omega0, p.omegac, p.gamma, p.omegaD)
    return _richardson(lambda b: b * _f_gamma(*a, b), p.beta, rel_step * p.beta)


def magnetization(p: SystemParams) -> float:
    """``M = -dF/d(omegac)`` from implicit differentiation of the roots."""
    return _m_gamma(p.omega0, p.omegac, p.gamma, p.omegaD, p.beta)


def magnetization_fd(p: SystemParams, rel_step: float = FD_RSTEP) -> float:
    """Richardson central difference of ``-F`` in ``omegac``."""
    h = rel_step * max(p.omega0, abs(p.omegac))
    f = lambda oc: _f_gamma(p.omega0, oc, p.gamma, p.omegaD, p.beta)
    return -_richardson(f, p.omegac, h)


def entropy(p: SystemParams) -> float:
    """``S = beta (epsilon - F)`` in units of k_B."""
    return p.beta * (internal_energy(p) - free_energy_gamma(p))


def entropy_fd(p: SystemParams, rel_step: float = FD_RSTEP) -> float:
    """``S = beta**2 dF/d beta`` by Richardson central differences."""
    a = (p.omega0, p.omegac, p.gamma, p.omegaD)
    return p.beta**2 * _richardson(lambda b: _f_gamma(*a, b), p.beta, rel_step * p.beta)


@dataclass(frozen=True)
class ThermoState:
    """Free energy, internal energy, entropy and magnetisation at one (B, T)."""

    free_energy: float
    internal_energy: float
    entropy: float
    magnetization: float
    params: SystemParams
    diagnostics: dict = field(default_factory=dict, compare=False)


def thermo_state(p: SystemParams, check: bool = True, rtol: float = 1e-6) -> ThermoState:
    """Bundle F, epsilon, S, M and verify their mutual consistency.

    With ``check`` set, ``F = epsilon - T S`` must hold to ``1e-8`` relative
    and every analytic derivative must match its finite-difference twin to
    ``rtol * max(1, |value|)``.

    Raises
    ------
    ConsistencyError
        Naming the identity that failed and by how much.
    """
    f = free_energy_gamma(p)
    eps = internal_energy(p)
    s = p.beta * (eps - f)
    m = magnetization(p)
    diag = {}
    if check:
        legendre = abs(f - (eps - s / p.beta)) / max(1.0, abs(f))
        diag["legendre_residual"] = legendre
        if legendre > 1e-8:
            raise ConsistencyError(f"F = eps - T S violated by {legendre:.3e} relative")
        pairs = (
            ("internal_energy", eps, internal_energy_fd(p)),
            ("entropy", s, entropy_fd(p)),
            ("magnetization", m, magnetization_fd(p)),
        )
        for name, exact, fd in pairs:
            err = abs(exact - fd) / max(1.0, abs(exact))
            diag[f"{name}_fd"] = fd
            diag[f"{name}_fd_error"] = err
            if err > rtol:
                raise ConsistencyError(
                    f"{name}: analytic {exact:.12g} vs finite-difference {fd:.12g} "
                    f"(relative gap {err:.3e} > {rtol:g})"
                )
    return ThermoState(f, eps, s, m, p, diag)
