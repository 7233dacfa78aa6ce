"""The clustered bound for (b, k) = (7, 7), step by step.

Run with ``python demos/02_clustered_bound.py``.
"""

# %%
# Using the global maximum of Psi in the rate formula is wasteful, because no
# single distribution pair is typical of every coordinate. Instead, split the
# simplex into a balanced cell and b cells where one symbol dominates
# (p_i > 1 - eps), and bound Psi separately on each pair of cells.
from bkhash import (
    KernelContext,
    PartitionKind,
    compute_cluster_matrix,
    km_bound,
    maximize_reduced_form,
    psi_max_bound,
    rate_bound_from_M,
)
from bkhash.optimize import SearchConfig

b, k, j, eps = 7, 7, 5, 9 / 100
cfg = SearchConfig(restarts=64)
cm = compute_cluster_matrix(PartitionKind.MAX, b, j, eps, cfg)
for name, value in zip(["balanced/balanced", "balanced/unbalanced", "same cell", "two cells"], cm.values):
    print(f"{name:>20}: {value:.7f}")

# %%
# With cell masses eta the quadratic form collapses to a (b+1)-variable
# quadratic. Its maximum M is found exactly by trying every number of active
# unbalanced cells.
red = maximize_reduced_form(cm)
print(f"M = {red.M:.7f}, mass on the balanced cell = {red.eta0:.4f}")

# %%
# Feed M into the rate formula and compare with the older bounds.
cluster = rate_bound_from_M(b, k, j, red.M).value
print(f"clustered bound    {cluster:.5f}")
print(f"psi-max bound      {psi_max_bound(b, k, cfg=cfg).value:.5f}")
print(f"Korner-Marton      {km_bound(b, k).value:.5f}")
