import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ericsson.errors import PoleError
from ericsson.model import _cubic_coefficients, fock_darwin, make_params
from ericsson.specfun import (
    CubicCoefficients,
    cubic_residuals,
    digamma,
    digamma_shift,
    log_gamma,
    log_gamma_shift,
    solve_cubic,
)

EULER = 0.5772156649015329

# frozen from mpmath.loggamma(2+3j) at 25 digits
LOG_GAMMA_2_3I = complex(-2.0928517530927333496, 2.3023965434668676262)


def test_log_gamma_known_values():
    assert abs(log_gamma(1.0)) < 1e-15
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    assert abs(log_gamma(2 + 3j) - LOG_GAMMA_2_3I) < 1e-13


def test_log_gamma_matches_mpmath_off_axis():
    for z in (0.1 + 0.1j, 3.5 - 7j, 40 + 200j, 1e3 + 1e-3j, 0.01 + 50j):
        ref = complex(oracles.log_gamma(z))
        assert abs(log_gamma(z) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_digamma_known_values():
    assert digamma(1.0).real == pytest.approx(-EULER, abs=1e-14)
    assert digamma(0.5).real == pytest.approx(-EULER - 2 * math.log(2), abs=1e-14)
    for z in (2 + 3j, 0.3 + 4j, 70 - 1j):
        assert abs(digamma(z) - complex(oracles.digamma(z))) < 1e-13 * max(1.0, abs(z))


@given(st.complex_numbers(min_magnitude=0.5, max_magnitude=50, allow_nan=False, allow_infinity=False))
@settings(max_examples=60, deadline=None)
def test_log_gamma_recurrence(z):
    # ln Gamma(z+1) = ln Gamma(z) + ln z modulo 2 pi i on the principal branch
    if z.real <= 0 and abs(z.imag) < 0.5:
        return
    d = log_gamma(z + 1) - log_gamma(z) - cmath.log(z)
    k = round(d.imag / (2 * math.pi))
    assert abs(d - 2j * math.pi * k) < 1e-11 * max(1.0, abs(log_gamma(z)))


@given(st.complex_numbers(min_magnitude=0.5, max_magnitude=30, allow_nan=False, allow_infinity=False))
@settings(max_examples=40, deadline=None)
def test_digamma_is_derivative_of_log_gamma(z):
    if z.real < 0.5:
        z = complex(abs(z.real) + 0.5, z.imag)
    h = 1e-5 * max(1.0, abs(z))
    fd = (log_gamma(z + h) - log_gamma(z - h)) / (2 * h)
    assert abs(fd - digamma(z)) < 1e-7 * max(1.0, abs(digamma(z)))


def test_conjugation_symmetry():
    z = np.array([0.3 + 2j, 5 - 1j, 12 + 40j])
    assert np.allclose(log_gamma(np.conj(z)), np.conj(log_gamma(z)), rtol=1e-15, atol=0)
    assert np.allclose(digamma(np.conj(z)), np.conj(digamma(z)), rtol=1e-15, atol=0)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0, -3 + 0j])
def test_poles_raise(z):
    with pytest.raises(PoleError):
        log_gamma(z)
    with pytest.raises(PoleError):
        digamma(z)


def test_overflow_raises():
    with pytest.raises(OverflowError):
        log_gamma(np.inf)


def test_shift_forms_keep_precision():
    a = 1.5e4
    for d in (1e-3 + 2e-3j, -0.7 + 0.2j, 3 - 40j):
        ref = oracles.log_gamma(oracles.mp.mpf(a) + oracles.mp.mpc(d)) - oracles.log_gamma(a)
        assert abs(log_gamma_shift(a, d) - complex(ref)) < 1e-14 * max(1.0, abs(complex(ref)))
        ref_psi = oracles.digamma(oracles.mp.mpf(a) + oracles.mp.mpc(d)) - oracles.digamma(a)
        assert abs(digamma_shift(a, d) - complex(ref_psi)) < 1e-14 * max(1e-10, abs(complex(ref_psi)))


def _same_roots(a, b):
    return np.allclose(np.sort_complex(np.round(a, 12)), np.sort_complex(np.asarray(b, dtype=complex)), atol=1e-12)


def test_cubic_factorises_at_zero_damping():
    r = solve_cubic(_cubic_coefficients(1.0, 0.0, 0.0, 10.0))
    assert _same_roots(r.lam, [10, 1j, -1j])
    # ties in real part are ordered by imaginary part
    assert np.allclose(r.lam, [10, -1j, 1j], atol=1e-12)
    fd = fock_darwin(make_params(1, 1, 0, 10, 1))
    r = solve_cubic(_cubic_coefficients(1.0, 1.0, 0.0, 10.0))
    assert _same_roots(r.lam, [10, 1j * fd.omega_plus, -1j * fd.omega_minus])
    assert np.array_equal(r.lam_prime, np.conj(r.lam))


def test_cubic_residual_and_sorting():
    c = _cubic_coefficients(1.0, 0.5, 0.3, 50.0)
    r = solve_cubic(c)
    assert max(abs(c(z)) for z in r.lam) <= 1e-10 * c.scale
    assert max(cubic_residuals(r.lam, c)) <= 1e-10
    assert all(np.diff(r.lam.real) <= 1e-12)
    assert r.stable


@given(
    st.floats(0.1, 10), st.floats(0, 10), st.floats(0, 5), st.floats(20, 1e5),
)
@settings(max_examples=80, deadline=None)
def test_cubic_vieta_property(w0, wc, g, wd):
    c = _cubic_coefficients(w0, wc, g, wd)
    r = solve_cubic(c)
    assert max(cubic_residuals(r.lam, c)) <= 1e-10
    assert np.all(r.lam.real >= -1e-9 * max(1, abs(r.lam).max()))


def test_cutoff_root_tracks_omegaD():
    for w0, wc, g in ((1, 0.5, 0.2), (2, 3, 1), (0.5, 0, 4)):
        wd = 1e4 * max(w0, wc, g)
        lam = solve_cubic(_cubic_coefficients(w0, wc, g, wd)).lam
        assert np.min(np.abs(lam - wd)) <= 0.01 * wd


def test_cubic_coefficients_callable():
    c = CubicCoefficients(1 + 1j, 2.0, 3j)
    z = 0.7 - 0.2j
    assert c(z) == pytest.approx(z**3 - (1 + 1j) * z**2 + 2 * z - 3j)
    assert c.derivative(z) == pytest.approx(3 * z**2 - 2 * (1 + 1j) * z + 2)
    assert c.conjugate().e3 == -3j
