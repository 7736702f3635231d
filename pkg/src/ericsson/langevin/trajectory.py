"""Quasiclassical trajectories with first-law bookkeeping.

Each trajectory is a c-number path of the linear Langevin system driven by a
Gaussian force whose spectrum is the symmetrised quantum noise. Steps use the
implicit midpoint (Crank-Nicolson) rule on the Drude state
``(x, y, v_x, v_y, u_x, u_y)``, for which

    d_eps = dQ - M_mid dB

holds identically per step when

* ``d_eps`` is the change of ``v^2/2 + omega0^2 r^2/2``,
* ``dQ = (f - u_mid) . dr`` is the heat delivered by the bath force,
* ``M_mid`` is the magnetic moment ``(y v_x - x v_y)/2`` at the step midpoint.

Work is recorded as ``dW = M_mid dB``, the work done *by* the particle, so
that the first law reads ``dQ = d_eps + dW``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import StepSizeError
from ..model import SystemParams, _fock_darwin
from .drift import drude_drift
from .moments import stationary_covariance
from .noise import NoiseModel, colored_noise, two_sided_psd

__all__ = [
    "Protocol",
    "magnetic_moment",
    "TrajectoryRecord",
    "quasiclassical_trajectory",
    "EnsembleSummary",
    "run_ensemble",
    "max_time_step",
]

DT_SAFETY = 0.05


@dataclass(frozen=True)
class Protocol:
    """Field schedule ``B(t)``, held constant outside its defined range."""

    times: tuple
    values: tuple
    name: str = "table"

    @classmethod
    def constant(cls, b: float) -> Protocol:
        return cls((0.0,), (float(b),), "constant")

    @classmethod
    def linear(cls, b_start: float, b_end: float, t_ramp: float, t_start: float = 0.0) -> Protocol:
        if t_ramp <= 0:
            raise ValueError("t_ramp must be > 0")
        return cls((t_start, t_start + t_ramp), (float(b_start), float(b_end)), "linear")

    @classmethod
    def table(cls, times, values) -> Protocol:
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ValueError("protocol table needs matching 1-d time and field columns")
        if np.any(np.diff(times) <= 0):
            raise ValueError("protocol times must be strictly increasing")
        return cls(tuple(times), tuple(values), "table")

    def __call__(self, t):
        return np.interp(t, self.times, self.values)

    @property
    def max_abs_field(self) -> float:
        return float(np.max(np.abs(self.values)))


def magnetic_moment(state) -> np.ndarray | float:
    """``(y v_x - x v_y)/2`` for states laid out as ``(x, y, v_x, v_y, ...)``."""
    s = np.asarray(state, dtype=float)
    m = 0.5 * (s[..., 1] * s[..., 2] - s[..., 0] * s[..., 3])
    return float(m) if m.ndim == 0 else m


def max_time_step(p: SystemParams, protocol: Protocol) -> float:
    """Largest step resolving trap, damping and cutoff scales."""
    wp, _ = _fock_darwin(p.omega0, protocol.max_abs_field)
    return DT_SAFETY / max(wp, p.gamma, p.omegaD)


def _energy(w, omega0):
    return 0.5 * (w[..., 2] ** 2 + w[..., 3] ** 2) + 0.5 * omega0**2 * (w[..., 0] ** 2 + w[..., 1] ** 2)


def _step_operators(p, b, dt):
    """Crank-Nicolson matrices ``(L, R, L^-1, L^-1 R)`` per distinct step.

    A step solves ``L w' = R w + dt B f``; ``inverse`` maps step to entry.
    """
    b_mid = 0.5 * (b[1:] + b[:-1])
    bdot = np.diff(b) / dt
    keys = np.stack([b_mid, bdot], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    eye = np.eye(6)
    ops = np.empty((4, len(uniq), 6, 6))
    for i, (bm, bd) in enumerate(uniq):
        a = drude_drift(p, omegac=bm, bdot=bd)
        lhs = eye - 0.5 * dt * a
        inv = np.linalg.inv(lhs)
        ops[:, i] = lhs, eye + 0.5 * dt * a, inv, inv @ (eye + 0.5 * dt * a)
    return ops, inverse.ravel()


def _initial_states(p, b0, rngs, initial):
    if initial == "rest":
        return np.zeros((len(rngs), 6))
    if initial != "stationary":
        raise ValueError(f"unknown initial condition {initial!r}")
    cov = stationary_covariance(p.replace(omegac=abs(b0)))
    evals, evecs = np.linalg.eigh(cov)
    root = evecs * np.sqrt(np.clip(evals, 0.0, None))
    return np.stack([root @ rng.standard_normal(6) for rng in rngs])


def _seed_sequences(seed, n):
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(n)


@dataclass
class _Accumulator:
    """Running per-trajectory totals over the recorded window."""

    n: int

    def __post_init__(self):
        self.work = np.zeros(self.n)
        self.heat = np.zeros(self.n)
        self.d_energy = np.zeros(self.n)
        self.energy_sum = np.zeros(self.n)
        self.samples = 0
        self.max_residual = 0.0


def _step_scale(mid, dr, dv, f, d_w, w2):
    # state differences carry absolute error ~ eps * |w|, so the yardstick is
    # the midpoint energy plus the magnitude of every product in the balance
    terms = np.abs(mid[:, 2:4] * dv).sum(1) + w2 * np.abs(mid[:, :2] * dr).sum(1)
    terms += np.abs(f * dr).sum(1) + np.abs(mid[:, 4:6] * dr).sum(1) + np.abs(d_w)
    return np.maximum(terms + _energy(mid, np.sqrt(w2)), np.finfo(float).tiny)


def _integrate(p, b, dt, w0, force, n_burn, acc=None, record=False):
    """March ``w0`` through ``len(b) - 1`` steps of the field schedule ``b``.

    The first ``n_burn`` steps are discarded from the bookkeeping.
    """
    ops, index = _step_operators(p, b, dt)
    w = w0.copy()
    n_steps = len(b) - 1
    w2 = p.omega0**2
    if record:
        n_rec = n_steps - n_burn
        states = np.empty((n_rec + 1, w.shape[0], 6))
        incs = np.empty((3, n_rec, w.shape[0]))
        scales = np.empty((n_rec, w.shape[0]))
    for k in range(n_steps):
        if k == n_burn:
            if record:
                states[0] = w
            if acc is not None:
                acc.energy_sum += _energy(w, p.omega0)
                acc.samples += 1
        f = force[:, k, :]
        lhs, rhs, inv, prop = ops[:, index[k]]
        src = w @ rhs.T
        src[:, 2:4] += dt * f
        w_new = w @ prop.T
        w_new[:, :] += (dt * f) @ inv[:, 2:4].T
        # one pass of iterative refinement keeps the midpoint identity at roundoff
        w_new += (src - w_new @ lhs.T) @ inv.T
        if k >= n_burn:
            mid = 0.5 * (w + w_new)
            dr = w_new[:, :2] - w[:, :2]
            dv = w_new[:, 2:4] - w[:, 2:4]
            d_eps = np.einsum("ij,ij->i", mid[:, 2:4], dv) + w2 * np.einsum("ij,ij->i", mid[:, :2], dr)
            d_w = magnetic_moment(mid) * (b[k + 1] - b[k])
            d_q = np.einsum("ij,ij->i", f - mid[:, 4:6], dr)
            res = d_q - d_eps - d_w
            scale = _step_scale(mid, dr, dv, f, d_w, w2)
            if acc is not None:
                acc.work += d_w
                acc.heat += d_q
                acc.d_energy += d_eps
                acc.energy_sum += _energy(w_new, p.omega0)
                acc.samples += 1
                acc.max_residual = max(acc.max_residual, float(np.max(np.abs(res) / scale)))
            if record:
                j = k - n_burn
                states[j + 1] = w_new
                incs[:, j, :] = d_w, d_eps, d_q
                scales[j] = scale
        w = w_new
    if record:
        return w, states, incs, scales
    return w


@dataclass(frozen=True)
class TrajectoryRecord:
    """One trajectory after burn-in.

    ``states`` has shape ``(n + 1, 4)`` over ``(x, y, v_x, v_y)``;
    ``d_work``, ``d_energy`` and ``d_heat`` are the ``n`` per-step increments;
    ``field`` holds ``B`` on the time grid. ``step_scale`` is the energy
    scale of each step (midpoint energy plus the magnitudes of all products
    entering the balance), the yardstick for roundoff in
    :attr:`first_law_residual`.
    """

    time: np.ndarray
    states: np.ndarray
    field: np.ndarray
    d_work: np.ndarray
    d_energy: np.ndarray
    d_heat: np.ndarray
    aux: np.ndarray
    step_scale: np.ndarray
    omega0: float
    seed: object

    @property
    def energy(self) -> np.ndarray:
        """System energy ``v^2/2 + omega0^2 r^2/2`` on the time grid."""
        return _energy(self.states, self.omega0)

    @property
    def first_law_residual(self) -> np.ndarray:
        """``dQ - d_eps - dW`` per step."""
        return self.d_heat - self.d_energy - self.d_work

    @property
    def relative_residual(self) -> np.ndarray:
        return np.abs(self.first_law_residual) / self.step_scale

    @property
    def magnetic_moment(self) -> np.ndarray:
        return magnetic_moment(self.states)


def _prepare(p, protocol, dt, t_end, t_burn):
    if protocol is None:
        protocol = Protocol.constant(p.omegac)
    if dt <= 0 or t_end <= 0 or t_burn < 0:
        raise ValueError("dt and t_end must be > 0, t_burn >= 0")
    limit = max_time_step(p, protocol)
    if dt > limit * (1 + 1e-12):
        raise StepSizeError(f"dt={dt:g} exceeds {limit:g} = {DT_SAFETY}/fastest rate")
    n_burn = int(round(t_burn / dt))
    n_run = int(round(t_end / dt))
    t_run = dt * np.arange(n_run + 1)
    b = np.concatenate([np.full(n_burn, protocol(0.0)), protocol(t_run)])
    return protocol, n_burn, n_run, t_run, b


def _forces(p, rngs, n_steps, dt):
    noise = NoiseModel.from_params(p)
    psd = lambda w: two_sided_psd(noise, w)
    return np.stack([colored_noise(psd, n_steps, dt, rng) for rng in rngs])


def quasiclassical_trajectory(
    p: SystemParams,
    protocol: Protocol | None = None,
    seed=0,
    dt: float = 1e-3,
    t_end: float = 10.0,
    t_burn: float = 0.0,
    initial: str = "stationary",
) -> TrajectoryRecord:
    """Integrate one quasiclassical trajectory under the field ``protocol``.

    ``p.omegac`` is only used when ``protocol`` is ``None`` (constant field).
    The trajectory is fully determined by ``(seed, dt, protocol)``. During
    ``t_burn`` the field is held at ``protocol(0)`` and nothing is recorded.

    Raises
    ------
    StepSizeError
        If ``dt`` exceeds :func:`max_time_step`.
    """
    protocol, n_burn, n_run, t_run, b = _prepare(p, protocol, dt, t_end, t_burn)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)
    w0 = _initial_states(p, b[0], [rng], initial)
    force = _forces(p, [rng], n_burn + n_run, dt)
    _, states, incs, scales = _integrate(p, b, dt, w0, force, n_burn, record=True)
    rec = TrajectoryRecord(
        time=t_run,
        states=states[:, 0, :4],
        field=b[n_burn:],
        d_work=incs[0, :, 0],
        d_energy=incs[1, :, 0],
        d_heat=incs[2, :, 0],
        aux=states[:, 0, 4:],
        step_scale=scales[:, 0],
        omega0=p.omega0,
        seed=ss,
    )
    return rec


@dataclass(frozen=True)
class EnsembleSummary:
    """Per-trajectory totals for an ensemble run.

    ``mean_energy`` is each trajectory's time average of the system energy
    over the recorded window.
    """

    mean_energy: np.ndarray
    work: np.ndarray
    heat: np.ndarray
    d_energy: np.ndarray
    max_first_law_residual: float
    n_steps: int

    @property
    def n_traj(self) -> int:
        return self.mean_energy.size

    @staticmethod
    def _mean_sem(a):
        return float(a.mean()), float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else math.inf

    def energy_estimate(self) -> tuple[float, float]:
        """Ensemble mean of the time-averaged energy and its standard error."""
        return self._mean_sem(self.mean_energy)

    def work_estimate(self) -> tuple[float, float]:
        return self._mean_sem(self.work)


def run_ensemble(
    p: SystemParams,
    protocol: Protocol | None = None,
    n_traj: int = 100,
    seed=0,
    dt: float = 1e-3,
    t_end: float = 10.0,
    t_burn: float = 0.0,
    initial: str = "stationary",
    batch_size: int = 500,
) -> EnsembleSummary:
    """Integrate ``n_traj`` independent trajectories and collect their totals.

    Trajectory ``i`` uses the ``i``-th child of ``SeedSequence(seed)``, so it
    reproduces :func:`quasiclassical_trajectory` called with that child,
    whatever the batch size.
    """
    protocol, n_burn, n_run, _, b = _prepare(p, protocol, dt, t_end, t_burn)
    children = _seed_sequences(seed, n_traj)
    acc = _Accumulator(n_traj)
    for start in range(0, n_traj, batch_size):
        stop = min(start + batch_size, n_traj)
        rngs = [np.random.default_rng(ss) for ss in children[start:stop]]
        w0 = _initial_states(p, b[0], rngs, initial)
        force = _forces(p, rngs, n_burn + n_run, dt)
        sub = _Accumulator(stop - start)
        _integrate(p, b, dt, w0, force, n_burn, acc=sub)
        acc.work[start:stop] = sub.work
        acc.heat[start:stop] = sub.heat
        acc.d_energy[start:stop] = sub.d_energy
        acc.energy_sum[start:stop] = sub.energy_sum
        acc.samples = sub.samples
        acc.max_residual = max(acc.max_residual, sub.max_residual)
    return EnsembleSummary(
        mean_energy=acc.energy_sum / acc.samples,
        work=acc.work,
        heat=acc.heat,
        d_energy=acc.d_energy,
        max_first_law_residual=acc.max_residual,
        n_steps=n_run,
    )
