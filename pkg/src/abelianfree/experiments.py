"""Experiment harness: walk batches and their statistics, the
finite/infinite-like trace classifier, the Parikh-domination gap
estimator, and the dual-detector scaling benchmark."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .core import ConfigError, ContractError, ExtendedExponent
from .detect import DetectorKind, Patch
from .search import BacktrackPolicy, SearchReport, random_walk

__all__ = [
    "SearchReport", "BatchSummary", "run_batch", "classify_behaviour",
    "gap_estimate", "gap_expectation_small", "dual_scaling_benchmark",
    "length_histogram", "summary_json",
]

FINITE_LIKE = "finite-like"
INFINITE_LIKE = "infinite-like"
INCONCLUSIVE = "inconclusive"


@dataclass
class BatchSummary:
    runs: int
    ml_max: int
    ml_av: float
    ml_med: int
    reports: list = field(default_factory=list)
    wall_seconds: float = 0.0

    @classmethod
    def from_reports(cls, reports: Sequence[SearchReport],
                     wall: float = 0.0) -> "BatchSummary":
        if not reports:
            raise ContractError("batch needs at least one report")
        mls = sorted(r.ml for r in reports)
        n = len(mls)
        return cls(runs=n, ml_max=mls[-1], ml_av=sum(mls) / n,
                   ml_med=mls[(n - 1) // 2],  # lower median for even n
                   reports=list(reports), wall_seconds=wall)


def _one_walk(args):
    (sigma, alpha_text, kind_v, patch_v, N, seed, enabled, keep_trace,
     depth_cap) = args
    return random_walk(sigma, ExtendedExponent.parse(alpha_text),
                       DetectorKind(kind_v), Patch(patch_v), N=N, seed=seed,
                       policy=BacktrackPolicy(enabled=enabled),
                       keep_trace=keep_trace, depth_cap=depth_cap)


def run_batch(sigma: int, alpha: ExtendedExponent, kind: DetectorKind,
              patch: Patch = Patch.NONE, N: int = 1_000_000, runs: int = 100,
              seed_base: int = 0, policy: Optional[BacktrackPolicy] = None,
              keep_traces: bool = False, depth_cap: Optional[int] = None,
              jobs: int = 1) -> BatchSummary:
    """``runs`` independent walks with seeds seed_base..seed_base+runs-1."""
    if runs < 1:
        raise ConfigError(f"runs must be >= 1: {runs}")
    policy = policy if policy is not None else BacktrackPolicy()
    t0 = time.monotonic()
    tasks = [(sigma, str(alpha), kind.value, patch.value, N, seed_base + i,
              policy.enabled, keep_traces, depth_cap) for i in range(runs)]
    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            reports = pool.map(_one_walk, tasks)
    else:
        reports = [_one_walk(t) for t in tasks]
    return BatchSummary.from_reports(reports, time.monotonic() - t0)


def classify_behaviour(report: SearchReport, level_fraction: float = 0.05,
                       slope_floor: float = 0.01,
                       plateau_fraction: float = 0.5) -> str:
    """Label a walk trace.

    infinite-like: the walk ends at a level proportional to the nodes
    visited and the level still climbs over the trace's second half;
    finite-like: the maximum level stops growing for the trailing
    ``plateau_fraction`` of the walk; otherwise inconclusive.
    """
    tr = report.trace
    if tr is None or len(tr) == 0:
        raise ContractError("classify_behaviour needs a recorded trace")
    if report.capped:
        return INCONCLUSIVE  # the depth cap distorts the level curve
    tr = np.asarray(tr, dtype=np.float64)
    count = max(report.count, len(tr))
    # positions of the (possibly subsampled) trace samples on the node axis
    x = np.linspace(0.0, count - 1, len(tr))
    half = len(tr) // 2
    if half >= 2:
        slope = np.polyfit(x[half:], tr[half:], 1)[0]
    else:
        slope = 0.0
    if tr[-1] >= level_fraction * count and slope > slope_floor:
        return INFINITE_LIKE
    cut = int(len(tr) * (1.0 - plateau_fraction))
    cut = max(cut, 1)
    if tr[:cut].max() == tr.max():
        return FINITE_LIKE
    return INCONCLUSIVE


# ----------------------------------------------------------------------
# Gap statistics: how many extra letters until the word following a
# random length-l prefix dominates the prefix's Parikh vector.
# ----------------------------------------------------------------------

def gap_estimate(sigma: int, l: int, samples: int, seed: int = 0,
                 chunk: int = 1024) -> float:
    """Mean delta with Psi(w[l+1 .. 2l+delta]) >= Psi(w[1..l]) over
    uniformly random words; expectation is sqrt(2l) for sigma=2."""
    if l < 1 or samples < 1:
        raise ConfigError("gap_estimate needs l >= 1 and samples >= 1")
    rng = np.random.default_rng(seed)
    tail = l + 16 * int(np.sqrt(l)) + 16
    total = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        w = rng.integers(0, sigma, size=(m, l + tail), dtype=np.int8)
        need = np.stack([(w[:, :l] == a).sum(axis=1) for a in range(sigma)], 1)
        # per letter, first position t (1-based past l) where the count
        # in w[l .. l+t-1] reaches need[a]
        t_needed = np.zeros(m, dtype=np.int64)
        short = np.zeros(m, dtype=bool)
        for a in range(sigma):
            cum = np.cumsum(w[:, l:] == a, axis=1, dtype=np.int32)
            hit = cum >= need[:, a][:, None]
            first = np.argmax(hit, axis=1) + 1
            missing = ~hit[:, -1]
            first[missing] = tail  # resolved individually below
            short |= missing
            np.maximum(t_needed, first, out=t_needed)
        for j in np.nonzero(short)[0]:
            t_needed[j] = _gap_extend(rng, sigma, w[j, l:], need[j])
        total += float(np.sum(np.maximum(t_needed - l, 0)))
        done += m
    return total / samples


def _gap_extend(rng, sigma, suffix, need) -> int:
    counts = np.zeros(sigma, dtype=np.int64)
    t = 0
    for a in suffix:
        t += 1
        counts[a] += 1
        if (counts >= need).all():
            return t
    while True:
        t += 1
        counts[int(rng.integers(0, sigma))] += 1
        if (counts >= need).all():
            return t


def gap_expectation_small(sigma: int, l: int, max_delta: int = 64) -> float:
    """Exact E(delta) for tiny l by dynamic programming over Parikh
    deficits (reference value for tests)."""
    from itertools import product

    total = 0.0
    words = list(product(range(sigma), repeat=l))
    prob_w = 1.0 / len(words)
    for w in words:
        need = [w.count(a) for a in range(sigma)]
        # E over the random continuation: walk the deficit state space
        total += prob_w * _expected_hitting(sigma, tuple(need), max_delta)
    return total - l


def _expected_hitting(sigma, need, cap, _memo={}):
    key = (sigma, need)
    if key in _memo:
        return _memo[key]
    if all(v == 0 for v in need):
        return 0.0
    # E[T] for the vector coupon process, one uniform letter per step:
    # E(s) = 1 + sum_a E(s - e_a)/sigma, where letters with zero deficit
    # leave the state unchanged (a self-loop solved algebraically)
    zeros = sum(1 for v in need if v == 0)
    e = 1.0
    for a in range(sigma):
        if need[a] > 0:
            nxt = list(need)
            nxt[a] -= 1
            e += _expected_hitting(sigma, tuple(nxt), cap) / sigma
    e /= 1.0 - zeros / sigma
    _memo[key] = e
    return e


def dual_scaling_benchmark(n_values: Sequence[int], samples: int,
                           seed: int = 0,
                           alpha: Optional[ExtendedExponent] = None,
                           sigma: int = 3) -> list:
    """Run the dual detector on uniformly random words and report the
    mean processed-suffix count and wall time per length (expected to
    scale as sqrt(n) on ternary input)."""
    if alpha is None:
        alpha = ExtendedExponent(7, 3, plus=True)
    rng = np.random.default_rng(seed)
    kb = 3 if ExtendedExponent(3, 1) < alpha else 2
    rows = []
    for n in n_values:
        n = int(n)
        cap = n + 2
        P = np.zeros(sigma, dtype=np.int32)
        P1 = np.zeros(sigma, dtype=np.int32)
        wit = np.zeros(4, dtype=np.int64)
        iters = 0
        t0 = time.monotonic()
        for _ in range(samples):
            word = rng.integers(0, sigma, size=cap, dtype=np.int32)
            c = np.zeros((cap + 1, sigma), dtype=np.int32)
            d = np.zeros((sigma, cap), dtype=np.int32)
            cnt = np.zeros(sigma, dtype=np.int32)
            m = 0
            for a in word[:n]:
                m = K.push_letter(word, c, d, cnt, m, int(a))
            stats = np.zeros(2, dtype=np.int64)
            K.check_dual(word, c, d, n, sigma, alpha.p, alpha.q, alpha.plus,
                         kb, P, P1, wit, stats)
            iters += int(stats[0])
        wall = time.monotonic() - t0
        rows.append({"n": n, "mean_iterations": iters / samples,
                     "mean_seconds": wall / samples})
    return rows


def length_histogram(report: SearchReport) -> list:
    """(length, count) rows from an exhaustive search report."""
    if report.histogram is None:
        raise ContractError("length_histogram needs a histogram-enabled report")
    return list(enumerate(report.histogram))


def summary_json(sigma, alpha, kind, N, summary_or_report, runs: int = 1,
                 verdict: Optional[str] = None) -> dict:
    """The JSON summary emitted by the CLI: one flat, plot-ready object."""
    if isinstance(summary_or_report, BatchSummary):
        b = summary_or_report
        total = sum(r.count for r in b.reports)
        ml_max, ml_av, ml_med = b.ml_max, b.ml_av, b.ml_med
        wall = b.wall_seconds
        runs = b.runs
    else:
        r = summary_or_report
        total, ml_max, ml_av, ml_med = r.count, r.ml, float(r.ml), r.ml
        wall = r.wall_seconds
        if verdict is None:
            verdict = r.verdict()
    return {
        "sigma": sigma, "alpha": str(alpha), "detector": kind.value, "N": N,
        "runs": runs, "ml_max": ml_max, "ml_av": ml_av, "ml_med": ml_med,
        "total_nodes": total, "wall_seconds": wall,
        "verdict": verdict if verdict is not None else "none",
    }
