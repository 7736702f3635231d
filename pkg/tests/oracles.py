"""Independent high-precision references used by the tests.

Nothing here imports the package; every value is rebuilt from the
defining expressions with mpmath.
"""
import mpmath as mp

mp.mp.dps = 25


def matsubara_free_energy(omega0, omegac, gamma, omegaD, beta, n_head=400):
    """``F = (1/beta)[2 ln(beta omega0) + sum_n ln(|D(nu_n)|^2 / nu_n^4)]``.

    ``D(nu) = nu^2 + nu gamma omegaD / (nu + omegaD) + omega0^2 + i omegac nu``
    and ``nu_n = 2 pi n / beta``. The first ``n_head`` terms are summed
    directly; the rest by Euler-Maclaurin with terms through ``f'''``.
    """
    w0, wc, g, wd, b = (mp.mpf(v) for v in (omega0, omegac, gamma, omegaD, beta))

    def term(n):
        nu = 2 * mp.pi * n / b
        q = g * wd / (nu * (nu + wd)) + (w0 / nu) ** 2
        return mp.log1p(2 * q + q * q + (wc / nu) ** 2)

    head = mp.fsum(term(n) for n in range(1, n_head + 1))
    n = n_head
    # split the integral at the cutoff crossover so quad sees both scales
    cross = max(mp.mpf(n), b * wd / (2 * mp.pi))
    pts = [n, cross, 10 * cross, mp.inf] if cross > n else [n, 10 * n, mp.inf]
    tail = mp.quad(term, pts) - term(n) / 2 - mp.diff(term, n) / 12 + mp.diff(term, n, 3) / 720
    return (2 * mp.log(b * w0) + head + tail) / b


def free_oscillators(omega0, omegac, beta):
    """Two undamped Fock-Darwin modes: ``(1/beta) sum ln 2 sinh(beta w/2)``."""
    w0, wc, b = (mp.mpf(v) for v in (omega0, omegac, beta))
    r = mp.sqrt(w0**2 + wc**2 / 4)
    return sum(mp.log(2 * mp.sinh(b * w / 2)) for w in (r + wc / 2, r - wc / 2)) / b


def log_gamma(z):
    return mp.loggamma(mp.mpc(z))


def digamma(z):
    return mp.digamma(mp.mpc(z))
