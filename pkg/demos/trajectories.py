"""
Heat and work along quasiclassical trajectories
===============================================

A field ramp is applied while the particle is kicked by colored thermal
noise. Each step books energy change, work and heat so that the first law
holds to rounding. Slow ramps reproduce the free-energy difference on
average.
"""
import numpy as np

from ericsson import free_energy_gamma, make_params
from ericsson.langevin import Protocol, max_time_step, quasiclassical_trajectory, run_ensemble

p = make_params(omega0=1.0, omegac=0.5, gamma=0.5, omegaD=10.0, beta=5.0)
ramp = Protocol.linear(0.5, 2.0, t_ramp=100.0)
dt = max_time_step(p, ramp)
print("time step:", dt)

rec = quasiclassical_trajectory(p, ramp, seed=0, dt=dt, t_end=100.0, t_burn=5.0)
print("steps:", rec.d_work.size)
print("max |dQ - deps - dW| / scale:", rec.relative_residual.max())
print("W, Q, delta eps:", rec.d_work.sum(), rec.d_heat.sum(), rec.energy[-1] - rec.energy[0])

# Thin the record to a few rows
for k in np.linspace(0, rec.time.size - 1, 6).astype(int):
    print(f"t={rec.time[k]:6.1f}  B={rec.field[k]:.3f}  E={rec.energy[k]:.4f}  M={rec.magnetic_moment[k]:+.4f}")

ens = run_ensemble(p, ramp, n_traj=256, seed=1, dt=dt, t_end=100.0, t_burn=5.0)
w, se = ens.work_estimate()
d_f = free_energy_gamma(p.replace(omegac=2.0)) - free_energy_gamma(p.replace(omegac=0.5))
print(f"\n<W> = {w:.4f} +- {se:.4f}   -dF = {-d_f:.4f}")
