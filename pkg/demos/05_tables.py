"""Regenerate the comparison table of clustered bounds.

This takes about a minute. Run with ``python demos/05_tables.py``.
"""

# %%
# Every computable column is recomputed and compared with the published
# five-decimal figure; disagreements are marked with "!".
from bkhash.tables import compute_table, render_table

table = compute_table(2)
print(render_table(table, "md"))
print("disagreements:", table.mismatches or "none")
