"""Actual hash codes next to the bounds.

Run with ``python demos/04_small_codes.py``.
"""

# %%
# Bounds are asymptotic, but tiny codes can be found exactly. A code is
# (b, k)-hash when any k of its words are separated in some coordinate.
from bkhash import km_bound, max_code_search, verify_hash_code
from bkhash.codes import format_code

res = max_code_search(4, 3, 2)
print(format_code(res.code))
print(f"exact maximum: {res.exact}, size {res.size}, rate {res.code.rate:.4f}")
print("verified:", verify_hash_code(res.code, 3).holds)

# %%
# Longer codes need greedy search; the result cannot be extended, but need
# not be maximum. Short codes may beat the bound, which only limits the rate
# as n grows.
for n in (2, 3, 4):
    res = max_code_search(4, 3, n, mode="greedy", seed=1)
    print(f"n={n}: {res.size:3d} words, rate {res.code.rate:.4f}")
print(f"Korner-Marton bound for (4,3): {km_bound(4, 3).value:.4f}")
