"""Randomized depth-first walks over the prefix tree of a repetition-
free language.

The walk visits up to N nodes, descending into random free extensions
and backtracking at dead ends.  A forced-backtrack heuristic pops a few
letters whenever too many nodes pass without a new maximum level, which
helps escape barren subtrees.  The trace of levels over visited nodes
distinguishes languages that look finite (the level plateaus) from ones
that look infinite (the level keeps climbing).
"""

from abelianfree import (
    BacktrackPolicy,
    DetectorKind,
    ExtendedExponent,
    classify_behaviour,
    random_walk,
    run_batch,
)

# ----------------------------------------------------------------------
# Over 4 letters, Abelian squares are avoidable: the level grows almost
# linearly with the number of visited nodes.
# ----------------------------------------------------------------------
alpha = ExtendedExponent.parse("2")
report = random_walk(4, alpha, DetectorKind.SMALL_GENERIC, N=20_000,
                     seed=1, keep_trace=True)
print(f"sigma=4, alpha=2: reached level {report.ml} in {report.count} "
      f"nodes -> {classify_behaviour(report)}")

# ----------------------------------------------------------------------
# Over 3 letters Abelian squares are unavoidable; the walk saturates the
# finite tree quickly.
# ----------------------------------------------------------------------
report = random_walk(3, alpha, DetectorKind.SMALL_GENERIC, N=20_000,
                     seed=1, policy=BacktrackPolicy(enabled=False))
print(f"sigma=3, alpha=2: max level {report.ml} -> the walk ran out of "
      f"tree (verdict: {report.verdict()})")

# ----------------------------------------------------------------------
# Batches aggregate many independent walks.  Medians of the maximum
# level are stable statistics for comparing languages.
# ----------------------------------------------------------------------
summary = run_batch(6, ExtendedExponent.parse("4/3+"),
                    DetectorKind.SMALL_DICT, N=50_000, runs=8,
                    seed_base=100, depth_cap=2000)
print(f"\nsigma=6, alpha=(4/3)+: 8 walks of 50k nodes")
print(f"  max level  max={summary.ml_max} median={summary.ml_med} "
      f"mean={summary.ml_av:.1f}")

# ----------------------------------------------------------------------
# Beyond exponent 2 the dual (reversal-based) detector explores a
# different tree than the forward one -- sometimes a much deeper one.
# ----------------------------------------------------------------------
alpha = ExtendedExponent.parse("11/3+")
for kind in (DetectorKind.BIG_FORWARD, DetectorKind.BIG_DUAL):
    r = random_walk(2, alpha, kind, N=1_000_000, seed=5, keep_trace=True)
    print(f"sigma=2, (11/3)+, {kind.value}: level {r.ml} "
          f"-> {classify_behaviour(r)}")
