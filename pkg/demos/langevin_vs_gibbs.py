"""
Stationary Langevin moments against the partition function
==========================================================

The quantum Langevin equation with Drude memory is solved in the stationary
state through the fluctuation-dissipation spectral integral. The magnetic
moment agrees with -dF/dB to quadrature accuracy. The mean trap energy does
not coincide with the thermodynamic energy dF(beta)/dbeta once gamma > 0;
the gap is shown as a function of temperature.
"""
from ericsson import internal_energy, magnetization, make_params
from ericsson.langevin import stationary_moments

p = make_params(omega0=1.0, omegac=0.8, gamma=0.5, omegaD=100.0, beta=1.0)

print(" beta    <M> Langevin    M Gibbs      <H_S>       eps       gap")
for beta in (0.1, 0.5, 1.0, 5.0, 10.0, 20.0):
    q = p.replace(beta=beta)
    m = stationary_moments(q)
    eps = internal_energy(q)
    print(f"{beta:5.1f}  {m.magnetization:12.8f}  {magnetization(q):12.8f}  {m.energy:9.5f}  {eps:9.5f}  {m.energy / eps - 1:+.2%}")

# Weak coupling restores the equality
for g in (0.5, 0.1, 0.01):
    q = p.replace(gamma=g, beta=10.0)
    print(f"gamma={g:<5g} <H_S>={stationary_moments(q).energy:.6f}  eps={internal_energy(q):.6f}")

m = stationary_moments(p)
print("\nisotropy: <x^2>, <y^2> =", m.xx, m.yy)
