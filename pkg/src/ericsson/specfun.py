"""Complex special functions and the characteristic-cubic root solver.

The Gamma-family kernels are thin guards around :mod:`scipy.special`
(principal branch, reflection handled there); this module adds pole and
overflow signalling and accepts scalars or arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, PoleError

__all__ = [
    "log_gamma",
    "digamma",
    "log_gamma_shift",
    "digamma_shift",
    "CubicCoefficients",
    "CubicRoots",
    "solve_cubic",
    "cubic_residuals",
]

VIETA_RTOL = 1e-10


def _check_poles(z):
    on_axis = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(on_axis):
        bad = z[on_axis].ravel()[0]
        raise PoleError(f"pole of Gamma at non-positive integer z={bad.real:g}")


def _finish(out, scalar, name):
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"{name} result not representable in double precision")
    return complex(out) if scalar else out


def log_gamma(z):
    """Principal-branch ``log Gamma(z)`` for complex ``z`` (scalar or array).

    Raises
    ------
    PoleError
        If any ``z`` is a non-positive integer.
    OverflowError
        If the result is not finite.
    """
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    return _finish(special.loggamma(z), scalar, "log_gamma")


def digamma(z):
    """Digamma ``psi(z) = d/dz log Gamma(z)`` for complex ``z``."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    return _finish(special.psi(z), scalar, "digamma")


def _polygamma_series(a, d, first_order):
    # sum_k psi^(first_order + k - 1)(a) d^k / k!, valid for |d| < a
    total = 0j
    term_pow = 1.0 + 0j
    fact = 1.0
    for k in range(1, 60):
        term_pow = term_pow * d
        fact *= k
        term = special.polygamma(first_order + k - 1, a) * term_pow / fact
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300):
            return total
    raise ArithmeticError("polygamma series did not converge")


def _check_shift(a, d):
    if not a > 0:
        raise ValueError("shift expansions need a real base a > 0")


def log_gamma_shift(a: float, d: complex) -> complex:
    """``log Gamma(a + d) - log Gamma(a)`` for real ``a > 0`` and complex ``d``.

    Uses a polygamma Taylor series when ``|d| <= a/4`` so that the result keeps
    full relative accuracy even when both logarithms are huge.
    """
    _check_shift(a, d)
    if abs(d) <= 0.25 * a:
        return _polygamma_series(a, d, 0)
    return log_gamma(a + d) - log_gamma(complex(a))


def digamma_shift(a: float, d: complex) -> complex:
    """``psi(a + d) - psi(a)`` with the same accuracy strategy as :func:`log_gamma_shift`."""
    _check_shift(a, d)
    if abs(d) <= 0.25 * a:
        return _polygamma_series(a, d, 1)
    return digamma(a + d) - digamma(complex(a))


@dataclass(frozen=True)
class CubicCoefficients:
    """Elementary symmetric functions of the three roots.

    The monic cubic is ``lam**3 - e1*lam**2 + e2*lam - e3``.
    """

    e1: complex
    e2: complex
    e3: complex

    def __call__(self, lam):
        return ((lam - self.e1) * lam + self.e2) * lam - self.e3

    def derivative(self, lam):
        return (3.0 * lam - 2.0 * self.e1) * lam + self.e2

    def conjugate(self) -> CubicCoefficients:
        return CubicCoefficients(
            np.conj(self.e1), np.conj(self.e2), np.conj(self.e3)
        )

    @property
    def scale(self) -> float:
        return max(abs(self.e1) ** 3, abs(self.e2) ** 1.5, abs(self.e3))


@dataclass(frozen=True)
class CubicRoots:
    """Roots of the characteristic cubic and their conjugate partners.

    ``lam`` is sorted by descending real part, ties broken by ascending
    imaginary part. ``lam_prime[j]`` is ``conj(lam[j])``.
    """

    lam: np.ndarray
    lam_prime: np.ndarray
    coefficients: CubicCoefficients

    @property
    def stable(self) -> bool:
        # Re(lam) >= 0 means every Matsubara factor (nu + lam) is nonzero
        tol = 1e-12 * max(1.0, float(np.max(np.abs(self.lam))))
        return bool(np.all(self.lam.real >= -tol))


def cubic_residuals(roots: np.ndarray, c: CubicCoefficients) -> tuple[float, float, float]:
    """Relative Vieta residuals ``(sum, pair-sum, product)`` of ``roots``."""
    l1, l2, l3 = roots
    r1 = abs(l1 + l2 + l3 - c.e1) / max(abs(c.e1), 1e-300)
    r2 = abs(l1 * l2 + l2 * l3 + l3 * l1 - c.e2) / max(abs(c.e2), 1e-300)
    r3 = abs(l1 * l2 * l3 - c.e3) / max(abs(c.e3), 1e-300)
    return r1, r2, r3


def _polish(lam, c, n_iter=4):
    lam = lam.copy()
    for j in range(3):
        z = lam[j]
        pz = abs(c(z))
        for _ in range(n_iter):
            dp = c.derivative(z)
            if dp == 0:
                break
            trial = z - c(z) / dp
            pt = abs(c(trial))
            if not pt < pz:
                break
            z, pz = trial, pt
        lam[j] = z
    return lam


def _sort_roots(lam, scale):
    # quantise real parts so exact ties (e.g. +-i omega) order by imag part
    q = 1e-12 * scale
    key = np.lexsort((lam.imag, -np.round(lam.real / q) * q))
    return lam[key]


def solve_cubic(c: CubicCoefficients) -> CubicRoots:
    """Roots of ``lam**3 - e1 lam**2 + e2 lam - e3`` with residual verification.

    Companion-matrix eigenvalues are refined by guarded Newton steps; the
    result must satisfy the Vieta relations to a relative ``1e-10``.

    Raises
    ------
    ConvergenceError
        If the polished roots miss the residual tolerance.
    """
    coeffs = np.array([c.e1, c.e2, c.e3], dtype=complex)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("cubic coefficients must be finite")
    companion = np.array(
        [[c.e1, -c.e2, c.e3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], dtype=complex
    )
    lam = _polish(np.linalg.eigvals(companion), c)

    tol = VIETA_RTOL
    worst_poly = max(abs(c(z)) for z in lam) / c.scale
    vieta = cubic_residuals(lam, c)
    if worst_poly > tol or max(vieta) > tol:
        raise ConvergenceError(
            f"cubic roots missed tolerance: poly residual {worst_poly:.3e}, "
            f"Vieta residuals {vieta}"
        )
    lam = _sort_roots(lam, max(1.0, float(np.max(np.abs(lam)))))
    return CubicRoots(lam=lam, lam_prime=np.conj(lam), coefficients=c)
