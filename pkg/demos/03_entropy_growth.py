"""
Epsilon-entropy and growth orders from eigenvalue decay
=======================================================
"""

import numpy as np

import nucleus as nc

k = nc.EigenvalueModel.power_law(C=1.0, a=2.0)

# m(K, eps) counts eigenvalues strictly above eps.  lambda_10 = 0.01 is
# not counted at eps = 0.01.
print("m(K, 0.01) =", nc.m_of_eps(k, 0.01))

for eps in (0.1, 0.01, 0.001):
    b = nc.entropy_bounds(k, eps)
    print(f"eps={eps}: {b.lower:.2f} <= log2 N <= {b.upper:.2f}  (n*={b.n_star})")

# Growth orders.  Parametric models have closed forms.
print(nc.growth_orders(k))
print(nc.growth_orders(nc.EigenvalueModel.exponential(1.0, 0.5)))

# An explicit list goes through the sliding-window regression
n = np.arange(1, 10**5 + 1, dtype=float)
for a in (1, 2, 4):
    g = nc.growth_orders(nc.EigenvalueModel.explicit(n**-a))
    print(f"a={a}: D ~ {g.D_estimate:.4f}, d ~ {g.d_estimate:.4f} (exact {1 / a})")

# A noisy decay: limsup and liminf separate
rng = np.random.default_rng(1)
noisy = np.sort(n**-2.0 * np.exp(rng.uniform(-3, 3, n.size)))[::-1]
print(nc.growth_orders(nc.EigenvalueModel.explicit(noisy)))
