"""
x_{n+1} = x_n^2 + g_n with |g_n| <= x_n still has ln ln x_n / n -> ln 2.

The perturbation is swamped by the square; we run the recurrence in log space
with random, maximal and zero perturbations.
"""
import math

from treeshift import aho_sloane_probe

for rule in ("zero", "max"):
    est = aho_sloane_probe(2.0, rule, 50)
    print(f"{rule:8s} {est.value:.15f}")

errors = [abs(aho_sloane_probe(2.0, "uniform", 50, seed).value - math.log(2)) for seed in range(20)]
print(f"uniform  20 seeds, worst error {max(errors):.1e}")

# The ratio estimator converges only like 1/n, which is why difference is the default.
print(f"ratio estimator at n=50: {aho_sloane_probe(2.0, 'uniform', 50, 1, 'ratio').value:.6f}")
