"""Cached heavy computations shared by the acceptance tests and the
warm-up driver in scripts/warm_acceptance.py.

Each function computes one expensive result and returns a plain dict;
``cached`` stores the dict as JSON under results/ so reruns (and the
test suite) read it back instantly.  Delete a results file to force a
recomputation.
"""

import json
import os
import time
from pathlib import Path

from abelianfree.core import ExtendedExponent
from abelianfree.detect import DetectorKind, Patch
from abelianfree.experiments import classify_behaviour, run_batch
from abelianfree.search import (
    BacktrackPolicy,
    LemmaPart,
    exhaustive_search,
    lemma_search,
    random_walk,
)

RESULTS_DIR = Path(__file__).resolve().parent.parent / "results"
E = ExtendedExponent


def cached(name, compute):
    path = RESULTS_DIR / f"{name}.json"
    if path.exists():
        return json.loads(path.read_text())
    data = compute()
    RESULTS_DIR.mkdir(exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, indent=1))
    os.replace(tmp, path)
    return data


def _walk_row(report):
    final = int(report.trace[report.count - 2]) if report.count > 1 else 0
    return {
        "ml": report.ml,
        "count": report.count,
        "final_level": final,
        "classification": classify_behaviour(report),
    }


def compute_walk_stats_sigma6():
    """100 walks over 6 letters at (4/3)+ with forced backtracking."""
    s = run_batch(6, E(4, 3, True), DetectorKind.SMALL_DICT, Patch.NONE,
                  N=1_000_000, runs=100, seed_base=1000,
                  policy=BacktrackPolicy(enabled=True), depth_cap=2000)
    return {"runs": s.runs, "ml_max": s.ml_max, "ml_av": s.ml_av,
            "ml_med": s.ml_med, "mls": sorted(r.ml for r in s.reports),
            "wall_seconds": s.wall_seconds}


def compute_infinite_like_sigma5():
    """10 walks over 5 letters at (3/2)+; the level should keep growing."""
    rows = []
    t0 = time.monotonic()
    for seed in range(10):
        r = random_walk(5, E(3, 2, True), DetectorKind.SMALL_GENERIC,
                        N=100_000, seed=2000 + seed, keep_trace=True)
        rows.append(_walk_row(r))
    return {"rows": rows, "wall_seconds": time.monotonic() - t0}


def compute_finite_like():
    """Million-node walks in three languages expected to be finite:
    4 letters at (9/5)+ forward, and reversal-based walks for 2 letters
    at (11/3)+ and 3 letters at 2+."""
    out = {}
    t0 = time.monotonic()
    jobs = [
        ("sigma4_9_5p", 4, E(9, 5, True), DetectorKind.SMALL_GENERIC, 5),
        ("sigma2_11_3p", 2, E(11, 3, True), DetectorKind.BIG_DUAL, 15),
        ("sigma3_2p", 3, E(2, 1, True), DetectorKind.BIG_DUAL, 5),
    ]
    for name, sigma, alpha, kind, runs in jobs:
        rows = []
        for seed in range(runs):
            r = random_walk(sigma, alpha, kind, N=1_000_000,
                            seed=3000 + seed, keep_trace=True,
                            depth_cap=100_000)
            rows.append(_walk_row(r))
        out[name] = rows
    out["wall_seconds"] = time.monotonic() - t0
    return out


def compute_lemma_k8():
    """The three-part reduced search proving 8 letters avoid (6/5)+."""
    out = {"parts": {}}
    total = 0
    t0 = time.monotonic()
    for part in (LemmaPart.L1, LemmaPart.L2, LemmaPart.L3):
        r = lemma_search(8, part, DetectorKind.SMALL_DICT, Patch.NONE,
                         depth_cap=512)
        out["parts"][part.value] = {"count": r.count, "ml": r.ml,
                                    "exhausted": r.exhausted,
                                    "capped": r.capped}
        total += r.count
    out["total_count"] = total
    out["wall_seconds"] = time.monotonic() - t0
    return out


def compute_exhaust_k8():
    """Full lexmin exhaust of the 8-letter (6/5)+-free language."""
    RESULTS_DIR.mkdir(exist_ok=True)
    ckpt = str(RESULTS_DIR / "exhaust_k8.ckpt")
    t0 = time.monotonic()
    r = exhaustive_search(8, E(6, 5, True), DetectorKind.SMALL_DICT,
                          Patch.NONE, lexmin=True, depth_cap=512,
                          checkpoint_path=ckpt,
                          checkpoint_every=50_000_000,
                          resume_from=ckpt if os.path.exists(ckpt) else None)
    return {"max_length": r.ml, "count": r.count, "exhausted": r.exhausted,
            "capped": r.capped, "wall_seconds": time.monotonic() - t0}


def compute_exhaust_k6():
    """Full lexmin exhaust of the 6-letter (4/3)+-free language."""
    t0 = time.monotonic()
    r = exhaustive_search(6, E(4, 3, True), DetectorKind.SMALL_DICT,
                          Patch.NONE, lexmin=True, depth_cap=512)
    return {"max_length": r.ml, "count": r.count, "exhausted": r.exhausted,
            "capped": r.capped, "wall_seconds": time.monotonic() - t0}


ALL = {
    "walk_stats_sigma6": compute_walk_stats_sigma6,
    "infinite_like_sigma5": compute_infinite_like_sigma5,
    "finite_like": compute_finite_like,
    "lemma_k8": compute_lemma_k8,
    "exhaust_k6": compute_exhaust_k6,
    "exhaust_k8": compute_exhaust_k8,
}
