"""
Gibbs-damped diagonal maps at high temperature
==============================================

diag(exp(-beta e_n)) as beta goes to zero.  For e_n = n the sum of the
weights is exp(-beta)/(1 - exp(-beta)), which grows like 1/beta.
"""

import math

import nucleus as nc
from nucleus.gibbs import geometric_betas

spec = nc.EnergySpectrum.linear(1.0)
betas = geometric_betas(5.0, 0.05, 12)
table = nc.beta_sweep(spec, betas, p=1)
print(table.to_csv())

# The local slope of log rho_1 against log(1/beta) is beta/(1 - exp(-beta)),
# about 1 + beta/2, so it approaches 1 only slowly.
for b in (0.5, 0.1, 0.05, 0.01):
    print(f"beta={b}: exact slope {b / -math.expm1(-b):.5f}")

# Faster-growing energies damp harder
for gamma in (0.5, 1, 2):
    t = nc.beta_sweep(nc.EnergySpectrum.power(1.0, gamma), [1.0, 0.1], p=1)
    print(f"gamma={gamma}: rho_1 {t.rows[0].rho_p:.4f} -> {t.rows[1].rho_p:.4f}")

# The truncation budget is checked up front
try:
    nc.beta_sweep(spec, [1.0, 1e-4], p=1, dim=10_000)
except nc.ComputationError as exc:
    print("error:", exc)
