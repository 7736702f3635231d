"""
Equilibrium thermodynamics of a damped charge in a trap and a field
===================================================================

The free energy comes from the cubic-root (log-Gamma) closed form and is
checked here against the direct Matsubara sum. Energy, entropy and
magnetization follow by analytic differentiation.
"""
import math

import numpy as np

from ericsson import entropy, free_energy_gamma, internal_energy, magnetization, make_params
from ericsson.gibbs import free_energy_matsubara

p = make_params(omega0=1.0, omegac=0.8, gamma=0.5, omegaD=100.0, beta=2.0)
print("F closed form :", free_energy_gamma(p))
print("F Matsubara   :", free_energy_matsubara(p))

# Temperature scan at fixed field
print("\n   T        F          eps        S          M")
for T in (0.05, 0.1, 0.5, 1.0, 2.0, 5.0):
    q = p.replace(beta=1.0 / T)
    print(f"{T:5.2f}  {free_energy_gamma(q):9.5f}  {internal_energy(q):9.5f}  {entropy(q):9.5f}  {magnetization(q):9.5f}")

# Entropy vanishes linearly as T -> 0 with slope 2 pi gamma / (3 omega0^2)
# for Ohmic damping, whatever the field
print("\nlow-T entropy slope S/T")
for g in (0.1, 0.5):
    q = p.replace(gamma=g, beta=4000.0)
    print(f"  gamma={g}: S/T = {entropy(q) * q.beta:.5f}   2 pi gamma/3 = {2 * math.pi * g / 3:.5f}")

# The magnetization is diamagnetic and vanishes at zero field
fields = np.linspace(0.0, 3.0, 7)
m = [magnetization(p.replace(omegac=b)) for b in fields]
print("\nM(B) at T=0.5:", np.round(m, 5))

# Damping raises the free energy logarithmically with the cutoff; field
# differences of F are cutoff independent
for wd in (1e2, 1e3, 1e4):
    f1 = free_energy_gamma(p.replace(omegaD=wd))
    f2 = free_energy_gamma(p.replace(omegaD=wd, omegac=2.0))
    print(f"omegaD={wd:8.0f}: F={f1:.6f}  F(B=2)-F(B=0.8)={f2 - f1:.8f}")
