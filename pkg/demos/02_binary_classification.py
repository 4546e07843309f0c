"""
Every one of the 256 basic sets with d = k = 2 has entropy 0 or ln 2.

The classifier decides each set from its indicator vectors alone.  Here we
tabulate which rule settled each set and confirm the verdict numerically.
"""
import math
from collections import Counter

from treeshift import Signature, basic_set_from_mask, classify_2x2, estimate_entropy

sig = Signature(2, 2)
rules = Counter()
values = Counter()
worst = 0.0
for mask in range(256):
    b = basic_set_from_mask(sig, mask)
    verdict = classify_2x2(b, numeric_check=False)
    rules[verdict.justification] += 1
    values[verdict.label] += 1
    h = estimate_entropy(b, 40).value
    worst = max(worst, abs(h - verdict.value))

print("verdicts:", dict(values))
print("deciding rule:")
for rule, count in rules.most_common():
    print(f"  {count:4d}  {rule}")
print(f"largest gap between verdict and estimate at n=40: {worst:.2e}")
print(f"(for scale, ln 2 = {math.log(2):.6f})")
