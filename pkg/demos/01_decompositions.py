"""
Approximation numbers and nuclear decompositions
================================================

Approximation numbers of a matrix, the two ways of writing it as a sum of
rank-one terms, and what each way costs.
"""

import numpy as np

import nucleus as nc

rng = np.random.default_rng(0)
m = rng.standard_normal((6, 4))

# alpha_k is the distance to the nearest rank-k matrix.  For Euclidean
# norms that is the (k+1)-th singular value.
alpha = nc.approximation_numbers(m)
print("alpha_k:", np.round(alpha, 4))

for p in (0.5, 1, 2):
    print(f"rho_{p} = {nc.rho_p(m, p):.6f}")

# The spectral route: one term per singular triple.  Its cost at any p is
# exactly rho_p.
spec = nc.spectral_decompose(m)
print("spectral terms:", spec.n_stored, " cost at p=1:", nc.phys_cost(spec, 1))

# The dyadic route builds blocks from rank 2^n - 2 truncations.  It is
# never cheaper than the spectral one, but it comes with a guaranteed
# bound 2^(2+3/p) rho_p.
for p in (0.4, 1, 3):
    d = nc.pietsch_decompose(m, p)
    print(f"p={p}: dyadic cost {nc.phys_cost(d, p):.4f} <= bound {nc.pietsch_bound(m, p):.4f}")

# Both represent the same matrix
err = np.abs(nc.reconstruct(nc.pietsch_decompose(m, 1)).matrix - m).max()
print("reconstruction error:", err)

# At p=2 the spectral cost squared is the trace of M M^T
print("nu2:", nc.nu2_trace(m), " cost^2:", nc.phys_cost(spec, 2) ** 2)

# The split functional uses the conjugate exponent.  For p* = 4 the mixed
# norm is only bracketed.
r = nc.math_cost(spec, 4 / 3)
print("math cost at p=4/3:", r.bound_kind, (r.math_lower, r.math_upper))
