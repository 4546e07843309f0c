"""
Counting blocks on the binary tree and reading off the entropy.

A basic set lists which labels a node's two children may carry.  Block counts
then grow doubly exponentially, so the entropy is the limit of
ln ln |B_n| / n.  This walk-through counts a few sets exactly, compares with
brute-force enumeration, and then switches to log space for large heights.
"""
import math

from treeshift import (
    OracleQuery,
    Signature,
    count_blocks,
    derive_snre,
    estimate_entropy,
    format_basic_set,
    full_basic_set,
    log_block_counts,
    make_basic_set,
    oracle_count,
)
from treeshift.entropy import entropy_table

sig = Signature(2, 2)

# The full shift allows everything: |B_n| = 2^(2^n - 1).
full = full_basic_set(sig)
print(format_basic_set(full))
print("full shift totals:", count_blocks(full, 5).totals())
print("2^(2^n - 1):      ", [2 ** (2**n - 1) for n in range(2, 6)])

# A set where symbol 1 may spawn either (1,1) or (2,2), and 2 only (2,2).
b = make_basic_set(sig, [(1, 1, 1), (1, 2, 2), (2, 2, 2)])
s = derive_snre(b)
print("\nrecurrence system:", s)

exact = count_blocks(b, 6)
for n in exact.heights():
    print(f"  n={n}: per root {exact[n]}")

# Brute force agrees at small heights.
for n in (2, 3, 4):
    assert oracle_count(OracleQuery(b, n)).per_symbol == exact[n]
print("brute-force enumeration agrees for n = 2..4")

# Past n ~ 30 the integers have millions of digits; log space keeps it cheap.
logs = log_block_counts(b, 40)
for row in entropy_table(logs)[-3:]:
    print(f"  n={row['n']}: ratio {row['ratio_estimate']:.6f}  difference {row['difference_estimate']:.12f}")

est = estimate_entropy(b, 40)
print(f"\nentropy ~ {est.value:.12f} ({est.diagnostic}); ln 2 = {math.log(2):.12f}")
