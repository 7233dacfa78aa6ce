"""Min-based cells, and why (6, 6) comes out at exactly 5/59.

Run with ``python demos/03_min_based_cells.py``.
"""

# %%
# For small b a better partition marks the cell of the smallest symbol:
# p is unbalanced at c when p_c < eps and c holds the minimum.
from fractions import Fraction

from bkhash import PartitionKind, cluster_rate_bound, compute_cluster_matrix, maximize_reduced_form
from bkhash.optimize import SearchConfig

cfg = SearchConfig(restarts=64)
cm = compute_cluster_matrix(PartitionKind.MIN, 6, 4, 1 / 20, cfg)
print("cluster suprema:", [round(v, 6) for v in cm.values])

# %%
# The balanced/balanced value 5/27 dominates the mixed terms enough that the
# best cell masses put everything on the balanced cell.
red = maximize_reduced_form(cm)
print(f"M = {red.M:.9f} (5/27 = {5 / 27:.9f}), eta0 = {red.eta0}")
print("rate bound:", Fraction(1) / (2 / Fraction(5, 27) + 1))

# %%
# How the same-cell term is bounded matters for (5, 5). Over the closed cell
# the supremum is smaller than over the relaxed set {p_c <= eps}.
eps = (4 + 5**0.5) / 44
for relaxed in (False, True):
    rep = cluster_rate_bound(5, 5, PartitionKind.MIN, eps, cfg, relax_same_cell=relaxed)
    print(f"relaxed={relaxed!s:5}  M3={rep.intermediates['M3']:.6f}  M={rep.intermediates['M']:.7f}  "
          f"bound={rep.value:.7f}")
