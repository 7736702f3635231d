"""Acceptance criteria A1-A9.

Each test records a PASS/FAIL line (shown in the terminal summary) and then
asserts the same verdict.
"""
import itertools
import time

import numpy as np
import pytest

from ericsson.cycle import CycleSpec, efficiency, sweep
from ericsson.gibbs import (
    _f_free,
    entropy,
    entropy_fd,
    free_energy_gamma,
    free_energy_matsubara,
    internal_energy,
    internal_energy_fd,
    magnetization,
    magnetization_fd,
)
from ericsson.langevin import Protocol, build_drift, max_time_step, quasiclassical_trajectory, run_ensemble
from ericsson.langevin import stationary_moments
from ericsson.model import fock_darwin, make_params
from ericsson.validation import noise_psd_error

GRID = list(itertools.product((1e-10, 0.1, 0.5, 2.0), (0.0, 0.5, 2.0), (0.1, 1.0, 10.0), (1e2, 1e4)))


def P(*args):
    return make_params(*args, warn=False)


def test_A1_gamma_form_vs_matsubara(report):
    t0 = time.perf_counter()
    worst = 0.0
    for g, wc, beta, wd in GRID:
        p = P(1.0, wc, g, wd, beta)
        f = free_energy_gamma(p)
        worst = max(worst, abs(f - free_energy_matsubara(p)) / max(1.0, abs(f)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-7 and dt <= 60
    report("A1", ok, f"max |F_gamma - F_matsubara|/max(1,|F|) = {worst:.2e} (tol 1e-7) over {len(GRID)} points, {dt:.1f}s")
    assert ok


def test_A2_weak_damping_limit(report):
    worst = 0.0
    for wc, beta in itertools.product((0.0, 1.0, 3.0), (0.5, 5.0)):
        worst = max(worst, abs(free_energy_gamma(P(1.0, wc, 1e-10, 1e6, beta)) - _f_free(1.0, wc, beta)))
    ok = worst <= 1e-5
    report("A2", ok, f"max |F_gamma - F_0| = {worst:.2e} (tol 1e-5)")
    assert ok


def test_A3_thermodynamic_identities(report):
    t0 = time.perf_counter()
    legendre = deriv = 0.0
    for g, wc, beta, wd in GRID:
        p = P(1.0, wc, g, wd, beta)
        f, eps, s, m = free_energy_gamma(p), internal_energy(p), entropy(p), magnetization(p)
        legendre = max(legendre, abs(f - (eps - s / beta)) / max(1.0, abs(f)))
        for exact, fd in ((eps, internal_energy_fd(p)), (s, entropy_fd(p)), (m, magnetization_fd(p))):
            deriv = max(deriv, abs(exact - fd) / max(1.0, abs(exact)))
    dt = time.perf_counter() - t0
    ok = legendre <= 1e-8 and deriv <= 1e-6 and dt <= 60
    report("A3", ok, f"Legendre residual {legendre:.2e} (tol 1e-8), analytic vs FD {deriv:.2e} (tol 1e-6), {dt:.1f}s")
    assert ok


def test_A4_gibbs_langevin_energy(report):
    worst, worst_at = 0.0, None
    for g, wc, beta in itertools.product((0.1, 0.5), (0.0, 0.8), (5.0, 10.0, 20.0)):
        p = P(1.0, wc, g, 100.0, beta)
        eps = internal_energy(p)
        dev = abs(stationary_moments(p).energy - eps) / abs(eps)
        if dev > worst:
            worst, worst_at = dev, (g, wc, beta)
    hot = P(1.0, 0.8, 0.5, 100.0, 0.1)
    hot_dev = abs(stationary_moments(hot).energy / internal_energy(hot) - 1.0)
    ok = worst <= 0.01
    report(
        "A4", ok,
        f"max relative gap {worst:.3%} at (gamma, omegac, beta)={worst_at} (tol 1%); "
        f"reported beta=0.1 gap {hot_dev:.3%}",
    )
    assert ok


def test_A5_second_law(report):
    base = P(1.0, 0.5, 0.3, 100.0, 1.0)
    b2 = np.linspace(0.5, 4.0, 6)[1:]
    th = np.linspace(0.5, 2.0, 6)[1:]
    rows = sweep(base, b1=0.5, b2=b2, t_cold=0.5, t_hot=th, gamma=[1e-10, 0.3, 1.0])
    engine = [r for r in rows if r.result is not None and r.result.engine]
    bad = [r for r in engine if not (0 < r.result.eta <= r.result.eta_carnot + 1e-9)]
    errors = [r for r in rows if r.error]
    top = max(r.result.eta / r.result.eta_carnot for r in engine)
    ok = not bad and not errors
    report("A5", ok, f"{len(engine)}/{len(rows)} engine cells, {len(bad)} violations, max eta/eta_C = {top:.3f}")
    assert ok


def test_A6_damping_dependence(report):
    eta = {g: efficiency(CycleSpec(0.5, 2.0, 0.5, 1.0, P(1.0, 0.5, g, 100.0, 1.0))).eta for g in (0.5, 1e-10)}
    gap = abs(eta[0.5] - eta[1e-10])
    ok = gap > 1e-6
    report("A6", ok, f"eta(0.5) = {eta[0.5]:.6f}, eta(1e-10) = {eta[1e-10]:.6f}, gap {gap:.2e} (> 1e-6)")
    assert ok


def test_A7_third_law(report):
    values, monotone = {}, True
    for wc, g in itertools.product((0.0, 1.0), (1e-10, 0.5)):
        values[(wc, g)] = entropy(P(1.0, wc, g, 100.0, 50.0))
        s = [entropy(P(1.0, wc, g, 100.0, b)) for b in (10.0, 20.0, 50.0)]
        monotone &= bool(np.all(np.diff(s) < 0))
    small = {k: v <= 1e-3 for k, v in values.items()}
    ok = all(small.values()) and monotone
    text = ", ".join(f"S(wc={k[0]:g}, g={k[1]:g})={v:.2e}" for k, v in values.items())
    report("A7", ok, f"{text} (tol 1e-3); monotone in beta: {monotone}")
    assert ok


@pytest.mark.slow
def test_A8_trajectory_bookkeeping(report):
    t0 = time.perf_counter()
    p = P(1.0, 0.5, 0.5, 10.0, 0.05)
    T = 1.0 / p.beta

    # per-step first law on a 1e4-step ramp
    ramp = Protocol.linear(0.5, 2.0, 50.0)
    dt = max_time_step(p, ramp)
    rec = quasiclassical_trajectory(p, ramp, seed=1, dt=dt, t_end=10_000 * dt)
    residual = float(rec.relative_residual.max())

    # classical equipartition from a constant-field ensemble
    ens = run_ensemble(p, n_traj=10_000, seed=2, dt=0.005, t_end=20.0, t_burn=5.0)
    e_mean, e_sem = ens.energy_estimate()
    e_ok = abs(e_mean - 2 * T) <= 3 * e_sem

    # classical quasi-static work: the classical free energy is field independent
    ramp = Protocol.linear(0.5, 2.0, 100.0)
    work = run_ensemble(p, ramp, n_traj=2000, seed=3, dt=0.005, t_end=100.0, t_burn=5.0)
    w_mean, w_sem = work.work_estimate()
    w_ok = abs(w_mean) <= 0.05 * T

    # same ramp in the quantum regime, where the Gibbs route gives a nonzero dF
    q = P(1.0, 0.5, 0.5, 10.0, 5.0)
    qwork = run_ensemble(q, ramp, n_traj=512, seed=4, dt=0.005, t_end=100.0, t_burn=5.0)
    qw_mean, qw_sem = qwork.work_estimate()
    d_f = free_energy_gamma(q.replace(omegac=2.0)) - free_energy_gamma(q.replace(omegac=0.5))
    qw_ok = abs(qw_mean + d_f) <= 0.05 * abs(d_f)
    dt_run = time.perf_counter() - t0

    worst = max(residual, ens.max_first_law_residual, work.max_first_law_residual, qwork.max_first_law_residual)
    ok = worst <= 1e-12 and e_ok and w_ok and qw_ok and dt_run <= 600
    report(
        "A8", ok,
        f"max step residual {worst:.1e} (tol 1e-12); "
        f"<E> = {e_mean:.3f} +- {e_sem:.3f} vs 2T = {2 * T:g}; "
        f"classical <W> = {w_mean:.3f} +- {w_sem:.3f} vs -dF_cl = 0 (tol {0.05 * T:g}); "
        f"quantum <W> = {qw_mean:.4f} +- {qw_sem:.4f} vs -dF = {-d_f:.4f} (tol 5%); {dt_run:.0f}s",
    )
    assert ok


def test_A9_langevin_structure(report):
    worst = 0.0
    for wc in (0.0, 0.5, 2.0):
        p = P(1.0, wc, 0.0, 100.0, 1.0)
        fd = fock_darwin(p)
        ev = list(build_drift(p).eigenvalues)
        for t in np.array([1, -1, 1, -1]) * 1j * np.repeat([fd.omega_plus, fd.omega_minus], 2):
            j = int(np.argmin(np.abs(np.array(ev) - t)))
            worst = max(worst, abs(ev.pop(j) - t))
    psd = max(noise_psd_error(P(1.0, 0.5, 0.2, 100.0, beta)) for beta in (0.2, 1.0, 10.0))
    ok = worst <= 1e-10 and psd <= 0.05
    report("A9", ok, f"drift eigenvalue error {worst:.1e} (tol 1e-10); noise PSD error {psd:.2%} (tol 5%)")
    assert ok
