"""
Why the product-norm index vanishes for p > 1
=============================================

Three ways to rewrite a decomposition so that the represented matrix is
unchanged while its cost (sum ||l_k||^p ||phi_k||^p)^(1/p) drops.
"""

import math

import numpy as np

import nucleus as nc

m = np.diag([1.0, 0.5, 0.25])
d = nc.spectral_decompose(m)

# Uniform dilution: every term becomes m copies of (l, phi/m).
for p in (0.5, 1, 1.5, 2):
    before = nc.phys_cost(d, p)
    row = []
    for k in (2, 10, 1000, 10**6):
        row.append(nc.phys_cost(nc.dilute_uniform(d, k), p) / before)
    print(f"p={p}: ratios", ["%.3g" % x for x in row])

# p=1 is untouched, p<1 gets worse, p>1 can be pushed as low as we like.
p, target = 1.5, 1e-3
cost = nc.phys_cost(d, p)
k = math.ceil((cost / target) ** (p / (p - 1))) + 1
print(f"m={k} brings the p={p} cost to {nc.phys_cost(nc.dilute_uniform(d, k), p):.3g}")

# Per-term counts chosen so the p-th power of the cost stays below pi^2/6,
# whatever the terms were.
big = nc.Decomposition(np.eye(3) * 50, np.eye(3), (3, 3))
diluted, schedule = nc.schauder_schedule(big, 2)
print("schedule:", schedule, " sum:", nc.schauder_sum(diluted, 2), "<", math.pi**2 / 6)

# Splitting into pairs phi/2 +- s e_j along fresh directions keeps the
# vectors linearly independent and still shrinks the cost.
lo, hi = nc.alpha_window(2)
print(f"alpha window ({lo}, {hi:.5f}), default {nc.default_alpha(2):.5f}")
cur = d
for r in range(1, 6):
    cur = nc.independent_dilute(cur, 2)
    rank = np.linalg.matrix_rank(cur.phi_dense())
    print(f"round {r}: {cur.n_stored} terms, rank {rank}, cost {nc.phys_cost(cur, 2):.4f}")

# The first three codomain coordinates still carry the original matrix
print(np.round(nc.reconstruct(cur).matrix[:3], 12))
