"""Statistical estimators behind the detectors' performance.

Two quantities govern how much work the detectors do per extension:

* the Parikh-domination gap: after a random length-l prefix, how many
  extra letters until a following window dominates the prefix's letter
  counts.  It grows like the square root of l, which is why the
  cover-jump detector does sublinear work per candidate suffix.
* the number of suffixes the dual detector actually processes on random
  words, which also scales like sqrt(n).
"""

import math

from abelianfree import (
    dual_scaling_benchmark,
    gap_estimate,
    gap_expectation_small,
)

# ----------------------------------------------------------------------
# For tiny l the expectation is exact by dynamic programming; the Monte
# Carlo estimator converges to it.
# ----------------------------------------------------------------------
print("binary alphabet, exact vs estimated mean gap:")
for l in (1, 2, 4):
    exact = gap_expectation_small(2, l)
    est = gap_estimate(2, l, samples=20_000, seed=1)
    print(f"  l={l}: exact {exact:.4f}  estimated {est:.4f}")

# ----------------------------------------------------------------------
# Square-root growth: quadrupling l doubles the gap.
# ----------------------------------------------------------------------
print("\nmean gap vs sqrt(l) (binary, 5000 samples):")
for l in (100, 400, 1600, 6400):
    est = gap_estimate(2, l, samples=5000, seed=2)
    print(f"  l={l:>5}: mean delta {est:8.2f}   "
          f"delta/sqrt(l) = {est / math.sqrt(l):.3f}")

print("\nlarger alphabets never shrink the gap:")
for sigma in (2, 3, 4):
    print(f"  sigma={sigma}: {gap_estimate(sigma, 1000, samples=5000, seed=3):.1f}")

# ----------------------------------------------------------------------
# Dual-detector scaling on random ternary words: the mean number of
# processed suffixes roughly doubles when n quadruples.
# ----------------------------------------------------------------------
print("\ndual detector, random ternary words at (7/3)+:")
rows = dual_scaling_benchmark([1000, 4000, 16000], samples=100, seed=4)
prev = None
for row in rows:
    ratio = "" if prev is None else \
        f"   x{row['mean_iterations'] / prev:.2f} vs previous"
    print(f"  n={row['n']:>6}: {row['mean_iterations']:8.1f} suffixes "
          f"processed{ratio}")
    prev = row["mean_iterations"]
