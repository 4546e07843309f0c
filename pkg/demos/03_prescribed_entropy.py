"""
Building a tree-shift whose entropy is ln rho for a chosen Perron number rho.

Feed in a polynomial x^p - k_1 x^{p_1} - ... and the construction returns a
basic set whose counts obey ln a_n = ln 2 + sum k_j ln a_{n - q_j}.
"""
import math

from treeshift import build_realization, format_basic_set, verify_realization
from treeshift.realize import multinacci

golden = build_realization("x^2 - x - 1")
print(format_basic_set(golden.basic_set))
print("legend:", golden.legend)
report = verify_realization(golden, 40)
print(f"rho = {golden.rho:.12f}, estimate {report.entropy_estimate.value:.12f}, "
      f"ln rho {report.ln_rho:.12f}, error {report.abs_error:.1e}")

print("\nmultinacci family:")
for m in range(2, 6):
    r = build_realization(multinacci(m))
    rep = verify_realization(r, 40)
    print(f"  {str(r.polynomial):30s} k={r.k:2d}  rho={r.rho:.10f}  error {rep.abs_error:.1e}")

# Delays sharing a factor make the counts move in steps; the estimator
# compares heights that far apart.
r = build_realization("x^4 - 3*x^2 - 2")
rep = verify_realization(r, 40)
print(f"\n{r.polynomial}: step {r.step}, ln rho {math.log(r.rho):.10f}, error {rep.abs_error:.1e}")
