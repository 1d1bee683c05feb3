"""Precompute the heavy results used by tests/test_acceptance.py.

Runs the named computations (default: every non-optional one) and
stores their JSON under results/.  The test suite picks the files up
automatically; without them the slow tests recompute inline.

    python3 scripts/warm_acceptance.py [name ...]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from acceptance_cache import ALL, cached  # noqa: E402

DEFAULT = ["infinite_like_sigma5", "finite_like", "walk_stats_sigma6",
           "lemma_k8", "exhaust_k8"]


def main(argv):
    names = argv or DEFAULT
    for name in names:
        if name not in ALL:
            raise SystemExit(f"unknown computation {name!r}; "
                             f"choose from {sorted(ALL)}")
        t0 = time.monotonic()
        data = cached(name, ALL[name])
        keys = {k: data[k] for k in ("ml_max", "ml_med", "total_count",
                                     "max_length", "count") if k in data}
        print(f"{name}: done in {time.monotonic() - t0:.0f}s {keys}",
              flush=True)


if __name__ == "__main__":
    main(sys.argv[1:])
