"""Prefix-tree exploration engines.

Three modes over the tree of alpha-A-free words: a randomized
depth-first walk with optional forced backtracking, an exhaustive
(optionally lexmin-restricted) enumeration, and the three-part reduced
search that proves finiteness at alpha = ((k-2)/(k-3))+ for k >= 6.
All heavy lifting happens in the jit kernels; this module owns the
state arrays, chunking, and checkpoints.
"""
from __future__ import annotations

import enum
import math
import os
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels as K
from .core import (
    ConfigError,
    ContractError,
    ExtendedExponent,
    letters_from_text,
    text_from_letters,
)
from .detect import DetectorKind, Patch, validate_detector

CHECKPOINT_FORMAT = "afree-checkpoint 1"
DEPTH_CAP_DEFAULT = 1_000_000
DICT_NODE_LIMIT = 80_000_000  # hard cap on dictionary position-stack entries
_CHUNK_STEPS = 20_000_000

_DET_CODE = {
    DetectorKind.SMALL_GENERIC: K.DET_SMALL,
    DetectorKind.SMALL_DICT: K.DET_DICT,
    DetectorKind.BIG_FORWARD: K.DET_BIG,
    DetectorKind.BIG_DUAL: K.DET_DUAL,
}
_PATCH_CODE = {Patch.NONE: K.PATCH_NONE, Patch.HALF: K.PATCH_HALF,
               Patch.NONOVERLAP: K.PATCH_NONOVERLAP}


def default_f(k: int) -> int:
    return math.ceil(k ** 1.5)


def default_g(k: int) -> int:
    return max(1, math.ceil(math.sqrt(k)))


@dataclass(frozen=True)
class BacktrackPolicy:
    """Forced-backtrack rule: after f(ml) nodes without a new maximum
    level, ascend g(ml) edges.  The jit walk engine implements exactly
    the default f and g; custom callables work through the pure-Python
    ``forced_backtrack`` only."""

    enabled: bool = True
    f: Callable[[int], int] = default_f
    g: Callable[[int], int] = default_g

    def is_default(self) -> bool:
        return self.f is default_f and self.g is default_g


@dataclass
class SearchReport:
    ml: int
    count: int
    rejected: int
    tests: int = 0
    exhausted: bool = False
    capped: bool = False
    histogram: Optional[list] = None
    deepest: Optional[list] = None
    trace: Optional[np.ndarray] = None
    wall_seconds: float = 0.0
    detector_iterations: int = 0

    def verdict(self) -> str:
        if self.capped:
            return "inconclusive"
        if self.exhausted:
            return "finite"
        return "open"


def lexmin_children(u, sigma: int):
    """Letters a with ua still lexmin: any letter already in u, plus the
    single smallest unused one."""
    used = -1
    for a in u:
        if a > used:
            used = a
    hi = min(used + 1, sigma - 1)
    return set(range(hi + 1))


def _kb_of(alpha: ExtendedExponent) -> int:
    return 3 if ExtendedExponent(3, 1) < alpha else 2


def _key_bits(sigma: int, depth_cap: int) -> int:
    """Field width for packing Parikh vectors into two 64-bit words."""
    if sigma <= 8:
        if depth_cap >= 1 << 16:
            raise ConfigError("dictionary detector limited to depth < 65536")
        return 16
    if depth_cap >= 1 << 8:
        raise ConfigError(f"dictionary detector limited to depth < 256 for sigma={sigma}")
    return 8


class _EngineBase:
    """Common array state: the incremental index tables plus, when the
    dictionary detector is selected, the flat hash-table arrays."""

    def __init__(self, sigma: int, alpha: ExtendedExponent, kind: DetectorKind,
                 patch: Patch, depth_cap: int):
        validate_detector(kind, alpha, patch)
        if kind not in _DET_CODE:
            raise ConfigError(f"engines need a fast detector, not {kind!r}")
        if not 2 <= sigma <= 10:
            raise ConfigError(f"alphabet size must be in [2,10]: {sigma}")
        self.sigma = sigma
        self.alpha = alpha
        self.kind = kind
        self.patch = patch
        self.depth_cap = int(depth_cap)
        cap = self.depth_cap + 2
        self.word = np.zeros(cap, dtype=np.int32)
        self.c = np.zeros((cap + 1, sigma), dtype=np.int32)
        self.d = np.zeros((sigma, cap), dtype=np.int32)
        self.cnt = np.zeros(sigma, dtype=np.int32)
        self.P = np.zeros(sigma, dtype=np.int32)
        self.P1 = np.zeros(sigma, dtype=np.int32)
        self.wit = np.zeros(4, dtype=np.int64)
        self.stats = np.zeros(2, dtype=np.int64)
        self.state = np.zeros(8, dtype=np.int64)
        self.kb = _kb_of(alpha) if kind in (DetectorKind.BIG_FORWARD,
                                            DetectorKind.BIG_DUAL) else 2
        if kind is DetectorKind.SMALL_DICT:
            self.bits = _key_bits(sigma, self.depth_cap)
            nd_cap = self.depth_cap * (self.depth_cap + 1) // 2 + 16
            if nd_cap > DICT_NODE_LIMIT:
                raise ConfigError(
                    f"dictionary detector at depth cap {self.depth_cap} needs "
                    f"{nd_cap} position slots (> {DICT_NODE_LIMIT}); use the "
                    "generic small detector or lower the depth cap"
                )
            nbuckets = 1
            while nbuckets < min(nd_cap, 1 << 20):
                nbuckets *= 2
            self.buckets = np.full(nbuckets, -1, dtype=np.int32)
            self.rec_k1 = np.zeros(nd_cap, dtype=np.uint64)
            self.rec_k2 = np.zeros(nd_cap, dtype=np.uint64)
            self.rec_top = np.full(nd_cap, -1, dtype=np.int32)
            self.rec_next = np.full(nd_cap, -1, dtype=np.int32)
            self.nd_pos = np.zeros(nd_cap, dtype=np.int32)
            self.nd_prev = np.full(nd_cap, -1, dtype=np.int32)
            self.nd_rec = np.full(nd_cap, -1, dtype=np.int32)
        else:
            self.bits = 16
            self.buckets = np.full(1, -1, dtype=np.int32)
            self.rec_k1 = np.zeros(1, dtype=np.uint64)
            self.rec_k2 = np.zeros(1, dtype=np.uint64)
            self.rec_top = np.full(1, -1, dtype=np.int32)
            self.rec_next = np.full(1, -1, dtype=np.int32)
            self.nd_pos = np.zeros(1, dtype=np.int32)
            self.nd_prev = np.full(1, -1, dtype=np.int32)
            self.nd_rec = np.full(1, -1, dtype=np.int32)

    # -- shared helpers ------------------------------------------------
    def _push_word(self, letters):
        """Seed the engine with a word, maintaining index and dictionary."""
        for a in letters:
            n = int(self.state[0])
            m = K.push_letter(self.word, self.c, self.d, self.cnt, n, int(a))
            if self.kind is DetectorKind.SMALL_DICT:
                K.dict_add_word_suffixes(self.word, m, self.bits, self.buckets,
                                         self.rec_k1, self.rec_k2, self.rec_top,
                                         self.rec_next, self.nd_pos, self.nd_prev,
                                         self.nd_rec, self.state)
            self.state[0] = m

    def current_word(self):
        return [int(a) for a in self.word[: int(self.state[0])]]

    def _det_args(self):
        return (_DET_CODE[self.kind], self.kb, _PATCH_CODE[self.patch], self.bits)

    def _dict_args(self):
        return (self.buckets, self.rec_k1, self.rec_k2, self.rec_top,
                self.rec_next, self.nd_pos, self.nd_prev, self.nd_rec)

    def _config_header(self, mode: str) -> list:
        return [
            CHECKPOINT_FORMAT,
            f"mode {mode}",
            f"sigma {self.sigma}",
            f"alpha {self.alpha}",
            f"detector {self.kind.value}",
            f"patch {self.patch.value}",
            f"depth_cap {self.depth_cap}",
        ]


class WalkEngine(_EngineBase):
    """One random depth-first walk: visit nodes until N accepted nodes,
    exhaustion, or an external stop.  count starts at 1 (the root)."""

    def __init__(self, sigma, alpha, kind, patch, N: int, seed: int,
                 policy: Optional[BacktrackPolicy] = None,
                 keep_trace: bool = False, depth_cap: Optional[int] = None):
        if N < 1:
            raise ConfigError(f"node budget must be >= 1: {N}")
        cap = depth_cap if depth_cap is not None else min(int(N) + 1, DEPTH_CAP_DEFAULT)
        super().__init__(sigma, alpha, kind, patch, cap)
        self.N = int(N)
        self.seed = int(seed)
        self.policy = policy if policy is not None else BacktrackPolicy()
        if self.policy.enabled and not self.policy.is_default():
            raise ConfigError(
                "the walk engine implements the default f/g backtrack rule; "
                "custom policies are only available via forced_backtrack()"
            )
        self.remaining = np.zeros(self.depth_cap + 2, dtype=np.int64)
        self.remaining[0] = (1 << sigma) - 1
        self.rng = np.array([self.seed], dtype=np.uint64)
        K.rng_next(self.rng)  # decorrelate consecutive seeds
        self.trace = np.zeros(self.N if keep_trace else 0, dtype=np.int32)
        self.state[K.S_COUNT] = 1  # the root
        self.status = K.ST_BUDGET

    def run(self, max_steps: int = 1 << 62) -> int:
        """Advance the walk; returns the kernel status code."""
        while True:
            chunk = min(max_steps, _CHUNK_STEPS)
            self.status = K.walk_engine(
                self.word, self.c, self.d, self.cnt, self.remaining, self.state,
                self.rng, self.trace, self.sigma, self.alpha.p, self.alpha.q,
                self.alpha.plus, *self._det_args(), *self._dict_args(),
                self.P, self.P1, self.wit, self.stats, self.N, chunk,
                self.policy.enabled, self.depth_cap + 1)
            max_steps -= chunk
            if self.status != K.ST_BUDGET or max_steps <= 0:
                return self.status

    def report(self, wall: float = 0.0) -> SearchReport:
        s = self.state
        tr = self.trace if self.trace.shape[0] else None
        if tr is not None:
            tr = tr[: int(s[K.S_COUNT])]
        return SearchReport(
            ml=int(s[K.S_ML]), count=int(s[K.S_COUNT]),
            rejected=int(s[K.S_REJECTED]), tests=int(s[K.S_TESTS]),
            exhausted=self.status == K.ST_EXHAUSTED, trace=tr,
            wall_seconds=wall, detector_iterations=int(self.stats[0]))

    # -- checkpointing -------------------------------------------------
    def checkpoint_text(self) -> str:
        n = int(self.state[0])
        lines = self._config_header("walk")
        lines += [
            f"N {self.N}",
            f"seed {self.seed}",
            f"policy {int(self.policy.enabled)}",
            "state " + " ".join(str(int(v)) for v in self.state),
            f"rng {int(self.rng[0])}",
            "word " + text_from_letters(self.word[:n]),
            "remaining " + " ".join(str(int(v)) for v in self.remaining[: n + 1]),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_checkpoint_text(cls, text: str) -> "WalkEngine":
        kv = _parse_checkpoint(text, "walk")
        alpha = ExtendedExponent.parse(kv["alpha"])
        kind = DetectorKind(kv["detector"])
        eng = cls(int(kv["sigma"]), alpha, kind, Patch(kv["patch"]),
                  N=int(kv["N"]), seed=int(kv["seed"]),
                  policy=BacktrackPolicy(enabled=bool(int(kv["policy"]))),
                  depth_cap=int(kv["depth_cap"]))
        state = [int(v) for v in kv["state"].split()]
        eng._push_word(letters_from_text(kv["word"]))
        if int(eng.state[0]) != state[0]:
            raise ContractError("checkpoint word/state length mismatch")
        eng.state[:] = state
        eng.rng[0] = np.uint64(int(kv["rng"]))
        rem = [int(v) for v in kv["remaining"].split()] if kv["remaining"] else []
        eng.remaining[: len(rem)] = rem
        return eng


def forced_backtrack(engine: "WalkEngine", policy: Optional[BacktrackPolicy] = None) -> None:
    """Ascend g(ml) edges (clamped at the root) and reset the
    since-progress counter; the walk kernel applies the same rule with
    the default f/g, this entry point supports custom policies."""
    policy = policy or engine.policy
    hop = min(policy.g(int(engine.state[K.S_ML])), int(engine.state[K.S_N]))
    for _ in range(hop):
        n = int(engine.state[K.S_N])
        if engine.kind is DetectorKind.SMALL_DICT:
            K.dict_unwind(n, *engine._dict_args(), engine.state)
        engine.state[K.S_N] = K.pop_letter(engine.word, engine.cnt, n)
    engine.state[K.S_SINCE] = 0


class DfsEngine(_EngineBase):
    """Deterministic exhaustive enumeration (child order 0,1,...),
    optionally restricted to lexmin words, with depth-cap and
    forbidden-permutation pruning for the reduced three-part search."""

    def __init__(self, sigma, alpha, kind, patch, lexmin: bool = False,
                 depth_cap: int = DEPTH_CAP_DEFAULT, perm_limit: int = 0,
                 prefix=()):
        super().__init__(sigma, alpha, kind, patch, depth_cap)
        self.lexmin = bool(lexmin)
        self.perm_limit = int(perm_limit)
        self.prefix = [int(a) for a in prefix]
        if self.lexmin and self.prefix:
            raise ConfigError("lexmin mode and a seed prefix are mutually exclusive")
        self.cursor = np.zeros(self.depth_cap + 2, dtype=np.int32)
        self.mu = np.full(self.depth_cap + 2, sigma - 1, dtype=np.int32)
        self.hist = np.zeros(self.depth_cap + 2, dtype=np.int64)
        self.deepest = np.zeros(self.depth_cap + 2, dtype=np.int32)
        self.status = K.ST_BUDGET
        self._seed()

    def _seed(self):
        self._push_word(self.prefix)
        self.base_depth = int(self.state[0])
        self.state[K.D_MAXDEPTH] = self.base_depth
        self.deepest[: self.base_depth] = self.word[: self.base_depth]
        self.mu[0] = -1
        for t in range(self.base_depth):
            self.mu[t + 1] = max(self.mu[t], int(self.word[t]))
        self.cursor[self.base_depth] = 0

    def run(self, max_steps: int = 1 << 62) -> int:
        while True:
            chunk = min(max_steps, _CHUNK_STEPS)
            self.status = K.dfs_engine(
                self.word, self.c, self.d, self.cnt, self.cursor, self.mu,
                self.hist, self.deepest, self.state, self.sigma, self.alpha.p,
                self.alpha.q, self.alpha.plus, *self._det_args(),
                *self._dict_args(), self.P, self.P1, self.wit, self.stats,
                self.lexmin, self.perm_limit, self.base_depth,
                self.depth_cap, chunk)
            max_steps -= chunk
            if self.status != K.ST_BUDGET or max_steps <= 0:
                return self.status

    def report(self, wall: float = 0.0) -> SearchReport:
        s = self.state
        md = int(s[K.D_MAXDEPTH])
        hist = self.hist[: md + 1].tolist()
        # the seed prefix chain (and the root) are nodes too
        hist[0] += 1
        for t in range(1, self.base_depth + 1):
            hist[t] += 1
        return SearchReport(
            ml=md, count=int(s[K.D_COUNT]) + self.base_depth + 1,
            rejected=int(s[K.D_REJECTED]), tests=int(s[K.D_TESTS]),
            exhausted=self.status in (K.ST_EXHAUSTED, K.ST_CAPPED),
            capped=bool(s[K.D_CAPPED]), histogram=hist,
            deepest=[int(a) for a in self.deepest[:md]], wall_seconds=wall,
            detector_iterations=int(self.stats[0]))

    # -- checkpointing -------------------------------------------------
    def checkpoint_text(self) -> str:
        n = int(self.state[0])
        md = int(self.state[K.D_MAXDEPTH])
        lines = self._config_header("dfs")
        lines += [
            f"lexmin {int(self.lexmin)}",
            f"perm_limit {self.perm_limit}",
            "prefix " + text_from_letters(self.prefix),
            "state " + " ".join(str(int(v)) for v in self.state),
            "word " + text_from_letters(self.word[:n]),
            "cursor " + " ".join(str(int(v)) for v in self.cursor[: n + 1]),
            "hist " + " ".join(str(int(v)) for v in self.hist[: md + 1]),
            "deepest " + text_from_letters(self.deepest[:md]),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_checkpoint_text(cls, text: str) -> "DfsEngine":
        kv = _parse_checkpoint(text, "dfs")
        alpha = ExtendedExponent.parse(kv["alpha"])
        eng = cls(int(kv["sigma"]), alpha, DetectorKind(kv["detector"]),
                  Patch(kv["patch"]), lexmin=bool(int(kv["lexmin"])),
                  depth_cap=int(kv["depth_cap"]),
                  perm_limit=int(kv["perm_limit"]),
                  prefix=letters_from_text(kv["prefix"]))
        state = [int(v) for v in kv["state"].split()]
        word = letters_from_text(kv["word"])
        # replay the path below the prefix to rebuild index and dictionary
        eng._push_word(word[eng.base_depth:])
        eng.state[:] = state
        cur = [int(v) for v in kv["cursor"].split()] if kv["cursor"] else []
        eng.cursor[: len(cur)] = cur
        eng.mu[0] = -1
        for t in range(len(word)):
            eng.mu[t + 1] = max(eng.mu[t], word[t])
        hist = [int(v) for v in kv["hist"].split()] if kv["hist"] else []
        eng.hist[: len(hist)] = hist
        deep = letters_from_text(kv["deepest"])
        eng.deepest[: len(deep)] = deep
        return eng


def _parse_checkpoint(text: str, expect_mode: str) -> dict:
    lines = text.splitlines()
    if not lines or lines[0] != CHECKPOINT_FORMAT:
        raise ConfigError("not a recognized checkpoint file")
    kv = {}
    for line in lines[1:]:
        if line.strip():
            k, _, v = line.partition(" ")
            kv[k] = v
    if kv.get("mode") != expect_mode:
        raise ConfigError(f"checkpoint mode {kv.get('mode')!r}, expected {expect_mode!r}")
    return kv


def save_checkpoint(path: str, engine) -> None:
    """Atomic write: temp file in the same directory, then rename."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(engine.checkpoint_text())
    os.replace(tmp, path)


def load_checkpoint(path: str):
    with open(path) as fh:
        text = fh.read()
    kv = _parse_checkpoint(text, _peek_mode(text))
    if kv["mode"] == "walk":
        return WalkEngine.from_checkpoint_text(text)
    return DfsEngine.from_checkpoint_text(text)


def _peek_mode(text: str) -> str:
    for line in text.splitlines()[1:]:
        if line.startswith("mode "):
            return line.split(" ", 1)[1]
    raise ConfigError("checkpoint missing mode line")


def checkpoint_matches(path: str, sigma, alpha, kind, patch) -> bool:
    with open(path) as fh:
        text = fh.read()
    kv = _parse_checkpoint(text, _peek_mode(text))
    return (int(kv["sigma"]) == sigma and kv["alpha"] == str(alpha)
            and kv["detector"] == kind.value and kv["patch"] == patch.value)


# ----------------------------------------------------------------------
# High-level operations
# ----------------------------------------------------------------------

def random_walk(sigma: int, alpha: ExtendedExponent, kind: DetectorKind,
                patch: Patch = Patch.NONE, N: int = 100_000, seed: int = 0,
                policy: Optional[BacktrackPolicy] = None,
                keep_trace: bool = False,
                depth_cap: Optional[int] = None,
                checkpoint_path: Optional[str] = None,
                checkpoint_every: int = 0) -> SearchReport:
    """One randomized walk visiting up to N nodes; Algorithm-1 semantics
    with optional forced backtracking."""
    t0 = time.monotonic()
    eng = WalkEngine(sigma, alpha, kind, patch, N, seed, policy,
                     keep_trace=keep_trace, depth_cap=depth_cap)
    _drive(eng, checkpoint_path, checkpoint_every)
    return eng.report(time.monotonic() - t0)


def exhaustive_search(sigma: int, alpha: ExtendedExponent, kind: DetectorKind,
                      patch: Patch = Patch.NONE, lexmin: bool = False,
                      depth_cap: int = DEPTH_CAP_DEFAULT,
                      checkpoint_path: Optional[str] = None,
                      checkpoint_every: int = 0,
                      resume_from: Optional[str] = None) -> SearchReport:
    """Visit every (lexmin) node of the prefix tree; histogram included."""
    t0 = time.monotonic()
    if resume_from:
        eng = load_checkpoint(resume_from)
        if not isinstance(eng, DfsEngine):
            raise ConfigError("resume file holds a walk, not an exhaustive search")
    else:
        eng = DfsEngine(sigma, alpha, kind, patch, lexmin=lexmin,
                        depth_cap=depth_cap)
    _drive(eng, checkpoint_path, checkpoint_every)
    return eng.report(time.monotonic() - t0)


def permutation_run(index) -> int:
    return index.permutation_run()


class LemmaPart(enum.Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"

    def prefix(self, k: int) -> list:
        n = {LemmaPart.L1: k - 2, LemmaPart.L2: k - 1, LemmaPart.L3: k}[self]
        return list(range(n))

    def perm_limit(self, k: int) -> int:
        # L1 forbids (k-1)-permutation factors, L2 forbids k-permutations
        return {LemmaPart.L1: k - 1, LemmaPart.L2: k, LemmaPart.L3: 0}[self]


def lemma_alpha(k: int) -> ExtendedExponent:
    if k < 6:
        raise ConfigError(f"the reduced search needs k >= 6: {k}")
    return ExtendedExponent.parse(f"{k - 2}/{k - 3}+")


def lemma_search(k: int, part: LemmaPart, kind: Optional[DetectorKind] = None,
                 patch: Optional[Patch] = None,
                 depth_cap: int = 4096,
                 checkpoint_path: Optional[str] = None,
                 checkpoint_every: int = 0,
                 resume_from: Optional[str] = None,
                 jobs: int = 1, split_extra: int = 12) -> SearchReport:
    """Exhaust one part of the reduced search at alpha=((k-2)/(k-3))+.

    The part's subtree is seeded with its mandated prefix and pruned by
    the forbidden-permutation rule.  With jobs > 1, the tree is split at
    depth |prefix| + split_extra into independent subtree jobs.
    """
    alpha = lemma_alpha(k)
    if kind is None:
        from .detect import select_detector
        kind, patch = select_detector(alpha, expected_depth=depth_cap)
    if patch is None:
        patch = Patch.NONE
    t0 = time.monotonic()
    if resume_from:
        eng = DfsEngine.from_checkpoint_text(open(resume_from).read())
        _drive(eng, checkpoint_path, checkpoint_every)
        return eng.report(time.monotonic() - t0)
    prefix = part.prefix(k)
    if jobs <= 1:
        eng = DfsEngine(k, alpha, kind, patch, depth_cap=depth_cap,
                        perm_limit=part.perm_limit(k), prefix=prefix)
        _drive(eng, checkpoint_path, checkpoint_every)
        return eng.report(time.monotonic() - t0)
    return _lemma_parallel(k, alpha, kind, patch, part, depth_cap, jobs,
                           len(prefix) + split_extra, t0)


def _lemma_subtree(args):
    k, alpha_text, kind_v, patch_v, perm_limit, depth_cap, seed_word = args
    eng = DfsEngine(k, ExtendedExponent.parse(alpha_text), DetectorKind(kind_v),
                    Patch(patch_v), depth_cap=depth_cap, perm_limit=perm_limit,
                    prefix=seed_word)
    eng.run()
    return eng.report()


def _lemma_parallel(k, alpha, kind, patch, part, depth_cap, jobs, split, t0):
    import multiprocessing as mp

    # enumerate the frontier by an exhaustive search capped at the split depth
    top = DfsEngine(k, alpha, kind, patch, depth_cap=split,
                    perm_limit=part.perm_limit(k), prefix=part.prefix(k))
    frontier = []
    _collect_frontier(top, split, frontier)
    top_rep = top.report()
    tasks = [(k, str(alpha), kind.value, patch.value, part.perm_limit(k),
              depth_cap, w) for w in frontier]
    with mp.Pool(jobs) as pool:
        reps = pool.map(_lemma_subtree, tasks)
    return _merge_reports(top_rep, reps, split, time.monotonic() - t0)


def _collect_frontier(top: DfsEngine, split: int, out: list) -> None:
    """Run the capped search, recording each word that hits the cap."""
    while True:
        st = top.run()
        if st in (K.ST_EXHAUSTED, K.ST_CAPPED):
            break
    # a capped DfsEngine doesn't remember frontier words, so re-walk the
    # tree keeping them: cheap second pass only over the capped levels
    # (the cap was at the split depth, so every word in hist[split] is a
    # frontier word).  Reuse a fresh engine with an explicit callback.
    eng = DfsEngine(top.sigma, top.alpha, top.kind, top.patch,
                    depth_cap=split, perm_limit=top.perm_limit,
                    prefix=top.prefix)
    _enumerate_capped(eng, split, out)


def _enumerate_capped(eng: DfsEngine, split: int, out: list) -> None:
    """Python-driven DFS to the split depth collecting the frontier."""
    from .detect import extend_check
    from .core import IncrementalIndex

    idx = IncrementalIndex(eng.sigma, with_dictionary=eng.kind is DetectorKind.SMALL_DICT,
                           capacity=split + 4)
    for a in eng.prefix:
        idx.push(a)
    sigma, kind, alpha, patch = eng.sigma, eng.kind, eng.alpha, eng.patch

    def descend():
        if idx.n == split:
            out.append(idx.letters())
            return
        for a in range(sigma):
            if eng.perm_limit and _next_perm_run(idx, a) >= eng.perm_limit:
                continue
            if extend_check(idx, a, kind, alpha, patch):
                descend()
                idx.pop()

    descend()


def _next_perm_run(idx, a) -> int:
    return int(K.perm_run_with(idx.word, idx.n, a))


def _merge_reports(top: SearchReport, reps, split: int, wall: float) -> SearchReport:
    hist = list(top.histogram)
    if len(hist) > split:
        hist[split] = 0  # frontier nodes are re-counted as subtree seeds
    deepest, best_ml = top.deepest, top.ml
    rejected = top.rejected
    tests = top.tests
    for r in reps:
        for length, cnt in enumerate(r.histogram):
            if length < split:
                continue  # the subtree's seed chain duplicates the top tree
            while len(hist) <= length:
                hist.append(0)
            hist[length] += cnt
        rejected += r.rejected
        tests += r.tests
        if r.ml > best_ml:
            best_ml = r.ml
            deepest = r.deepest
    count = sum(hist)
    ml = max(i for i, v in enumerate(hist) if v > 0)
    return SearchReport(ml=ml, count=count, rejected=rejected, tests=tests,
                        exhausted=all(r.exhausted and not r.capped for r in reps),
                        capped=any(r.capped for r in reps), histogram=hist,
                        deepest=deepest, wall_seconds=wall)


def _drive(engine, checkpoint_path: Optional[str], checkpoint_every: int) -> None:
    """Run to completion, checkpointing every ``checkpoint_every`` nodes."""
    if not checkpoint_path or not checkpoint_every:
        engine.run()
        return
    next_mark = engine.state[2] + checkpoint_every
    while True:
        st = engine.run(max_steps=max(checkpoint_every, 1_000_000))
        if st != K.ST_BUDGET:
            break
        if engine.state[2] >= next_mark:
            save_checkpoint(checkpoint_path, engine)
            next_mark = engine.state[2] + checkpoint_every
    save_checkpoint(checkpoint_path, engine)
