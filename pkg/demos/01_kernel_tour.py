"""A first look at the kernel Psi(p, q).

Run with ``python demos/01_kernel_tour.py``.
"""

# %%
# Psi compares two symbol distributions. At the uniform pair it has a closed
# form, and object arrays of Fractions give it exactly.
from fractions import Fraction

import numpy as np

from bkhash import KernelContext, psi, psi_gradient, psi_max_global
from bkhash.optimize import SearchConfig

for b, j in [(5, 3), (6, 4), (7, 5)]:
    u = np.array([Fraction(1, b)] * b, dtype=object)
    print(f"Psi(u, u) for b={b}, j={j}: {psi(KernelContext(b, j), u, u)}")

# %%
# Point masses are useless on their own: Psi(e_i, e_i) vanishes. A point mass
# paired with the uniform distribution on the other symbols does much better.
ctx = KernelContext(6, 4)
e = np.eye(6)[0]
rest = np.r_[0.0, np.full(5, 1 / 5)]
print("Psi(e1, e1) =", psi(ctx, e, e))
print("Psi(e1, uniform on the rest) =", psi(ctx, e, rest))

# %%
# Batches broadcast: here is a 3 x 3 table over a few random distributions.
rng = np.random.default_rng(0)
P = rng.dirichlet(np.ones(6), 3)
print(np.round(psi(ctx, P[:, None, :], P[None, :, :]), 4))

# %%
# The gradient comes from leave-one-out tables, so it costs as little as the
# value. Projected ascent on the simplex uses it to find the global maximum.
gp, gq = psi_gradient(ctx, P[0], P[1])
print("dPsi/dp =", np.round(gp, 4))

w = psi_max_global(KernelContext(5, 3), SearchConfig(restarts=64))
print(f"max Psi for b=5, j=3: {w.value:.7f}")
print("  p =", np.round(w.p.probs, 4))
print("  q =", np.round(w.q.probs, 4))
