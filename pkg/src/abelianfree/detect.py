"""Right-end detectors for fractional Abelian repetitions.

Each detector answers "is the current word alpha-A-free?" assuming every
proper prefix already is (the prefix-tree search invariant).  On a
violation it reports the offending suffix factorization.  A brute-force
oracle over all factor spans backs the fast detectors in tests.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .core import (
    ConfigError,
    ContractError,
    ExtendedExponent,
    IncrementalIndex,
    exponent_at_least,
    letters_from_text,
    reverse,
)

_THREE_HALVES = ExtendedExponent(3, 2)
_THREE_HALVES_PLUS = ExtendedExponent(3, 2, plus=True)
_TWO = ExtendedExponent(2, 1)
_THREE = ExtendedExponent(3, 1)
_FOUR = ExtendedExponent(4, 1)

ORACLE_DEFAULT_BOUND = 64
DICT_DEPTH_DEFAULT = 10_000  # beyond this, auto-selection avoids the dictionary


class DetectorKind(enum.Enum):
    SMALL_GENERIC = "small"     # cover-jump scan, 1 < alpha <= 2
    SMALL_DICT = "dict"         # dictionary lookup, alpha <= 3/2 (+ patches)
    BIG_FORWARD = "big"         # Abelian square/cube + equivalent tail
    BIG_DUAL = "dual"           # reversal-is-a-power detection
    ORACLE = "oracle"           # definition-based reference


class Patch(enum.Enum):
    NONE = "none"
    HALF = "half"               # skip pos = i - len/2 once (alpha = (3/2)+)
    NONOVERLAP = "nonoverlap"   # skip every overlapping occurrence (alpha < 2)


@dataclass(frozen=True)
class SuffixFactorization:
    """The violating suffix x y z of a non-free word.

    ``left``/``right`` bound x (1-based, inclusive), ``i`` starts z; for
    square/cube detectors ``extra`` is the equivalence-block length of
    xy, for the dual detector it is |x| (x ends the word's x y z with
    y ~ z there, and left/right bound y instead).
    """

    left: int
    right: int
    i: int
    extra: int = 0

    def as_tuple(self):
        return (self.left, self.right, self.i, self.extra)


def _kb_for(alpha: ExtendedExponent) -> int:
    """Block count for the big detectors: 2 on (2,3), 3 on (3,4)."""
    if _TWO < alpha < _THREE:
        return 2
    if _THREE < alpha < _FOUR:
        return 3
    raise ConfigError(f"exponent {alpha} outside (2,3) and (3,4)")


def _require(cond: bool, kind: str, alpha: ExtendedExponent, rng: str) -> None:
    if not cond:
        raise ConfigError(f"{kind} detector needs {rng}, got alpha={alpha}")


def _scratch(index: IncrementalIndex):
    sigma = index.sigma
    P = np.zeros(sigma, dtype=np.int32)
    P1 = np.zeros(sigma, dtype=np.int32)
    wit = np.zeros(4, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)
    return P, P1, wit, stats


def _result(ok, wit, want_witness):
    if bool(ok):
        return (True, None) if want_witness else True
    w = SuffixFactorization(int(wit[0]), int(wit[1]), int(wit[2]), int(wit[3]))
    return (False, w) if want_witness else False


def alphafree_small(index: IncrementalIndex, alpha: ExtendedExponent,
                    want_witness: bool = False, stats_out=None):
    """Cover-jump detector for 1 < alpha <= 2: no suffix xyz with x ~ z
    and |xyz|/|xy| >= alpha (strict for plus exponents)."""
    _require(alpha <= _TWO, "small", alpha, "1 < alpha <= 2")
    P, _, wit, stats = _scratch(index)
    ok = K.check_small(index.word, index.c, index.d, index.n, index.sigma,
                       alpha.p, alpha.q, alpha.plus, P, wit, stats)
    if stats_out is not None:
        stats_out["inner_iterations"] = int(stats[0])
    return _result(ok, wit, want_witness)


def alphafree_dict(index: IncrementalIndex, alpha: ExtendedExponent,
                   patch: Patch = Patch.NONE, want_witness: bool = False):
    """Dictionary detector: look up the newest factor Abelian-equivalent
    to each suffix z; patches step to older occurrences when the newest
    one overlaps z.

    The index dictionary holds the factors of u[1..n-1] (that is the
    push discipline of IncrementalIndex), exactly what each suffix
    lookup needs.
    """
    if patch is Patch.NONE:
        _require(alpha <= _THREE_HALVES, "dict", alpha, "alpha <= 3/2")
    elif patch is Patch.HALF:
        _require(alpha == _THREE_HALVES_PLUS, "dict/half", alpha, "alpha = (3/2)+")
    else:
        _require(alpha < _TWO, "dict/nonoverlap", alpha, "alpha < 2")
    if index.dict is None:
        raise ConfigError("dictionary detector needs an index with with_dictionary=True")
    n = index.n
    word = index.word
    key = [0] * index.sigma
    for i in range(n, n - (n // 2), -1):  # i from n downto 1+ceil(n/2)
        key[int(word[i - 1])] += 1
        length = n - i + 1
        positions = index.dict.get(tuple(key))
        if not positions:
            continue
        t = len(positions) - 1
        if patch is Patch.HALF:
            if length % 2 == 0 and positions[t] == i - length // 2:
                t -= 1
        elif patch is Patch.NONOVERLAP:
            while t >= 0 and positions[t] > i - length:
                t -= 1
        if t < 0:
            continue
        pos = positions[t]
        if pos <= i - length and exponent_at_least(n - pos + 1, i - pos, alpha):
            w = SuffixFactorization(pos, pos + length - 1, i)
            return (False, w) if want_witness else False
    return (True, None) if want_witness else True


def alphafree_big(index: IncrementalIndex, alpha: ExtendedExponent,
                  want_witness: bool = False, stats_out=None):
    """Forward detector for 2 < alpha < 3 (and the Abelian-cube variant
    for 3 < alpha < 4): suffix xyz with x ~ z, xy an Abelian square
    (resp. cube) and kb*|xyz|/|xy| >= alpha."""
    kb = _kb_for(alpha)
    P, _, wit, stats = _scratch(index)
    ok = K.check_big(index.word, index.c, index.d, index.n, index.sigma,
                     alpha.p, alpha.q, alpha.plus, kb, P, wit, stats)
    if stats_out is not None:
        stats_out["inner_iterations"] = int(stats[0])
    return _result(ok, wit, want_witness)


def dual_alphafree(index: IncrementalIndex, alpha: ExtendedExponent,
                   want_witness: bool = False, stats_out=None):
    """Dual detector: the word ends with x y z where y ~ z, x is
    equivalent to a suffix of z and |xyz|/|z| >= alpha — i.e. the
    reversal ends a power.  Same exponent ranges as the forward one."""
    kb = _kb_for(alpha)
    P, P1, wit, stats = _scratch(index)
    ok = K.check_dual(index.word, index.c, index.d, index.n, index.sigma,
                      alpha.p, alpha.q, alpha.plus, kb, P, P1, wit, stats)
    if stats_out is not None:
        stats_out["outer_iterations"] = int(stats[0])
    return _result(ok, wit, want_witness)


def oracle_freeness(u, alpha: ExtendedExponent, dual: bool = False,
                    bound: int = ORACLE_DEFAULT_BOUND, sigma: Optional[int] = None):
    """True iff no factor of u (of reverse(u) when dual) is a beta-A-power
    with beta >= alpha, by checking every factor span directly.

    Cubic-time reference; refuses words longer than ``bound``.
    """
    if isinstance(u, str):
        u = letters_from_text(u)
    u = [int(a) for a in u]
    if len(u) > bound:
        raise ContractError(
            f"oracle limited to length {bound} (got {len(u)}); raise bound explicitly"
        )
    if dual:
        u = reverse(u)
    if sigma is None:
        sigma = max(u) + 1 if u else 2
    word = np.array(u, dtype=np.int32)
    pref = np.zeros((len(u) + 1, sigma), dtype=np.int32)
    for j in range(1, len(u) + 1):
        if not K.oracle_suffix_free(word[:j], j, sigma, alpha.p, alpha.q,
                                    alpha.plus, pref):
            return False
    return True


def run_detector(index: IncrementalIndex, kind: DetectorKind,
                 alpha: ExtendedExponent, patch: Patch = Patch.NONE,
                 want_witness: bool = False):
    if kind is DetectorKind.SMALL_GENERIC:
        return alphafree_small(index, alpha, want_witness)
    if kind is DetectorKind.SMALL_DICT:
        return alphafree_dict(index, alpha, patch, want_witness)
    if kind is DetectorKind.BIG_FORWARD:
        return alphafree_big(index, alpha, want_witness)
    if kind is DetectorKind.BIG_DUAL:
        return dual_alphafree(index, alpha, want_witness)
    if kind is DetectorKind.ORACLE:
        ok = oracle_freeness(index.letters(), alpha, sigma=index.sigma)
        return (ok, None) if want_witness else ok
    raise ConfigError(f"unknown detector kind {kind!r}")


def extend_check(index: IncrementalIndex, a: int, kind: DetectorKind,
                 alpha: ExtendedExponent, patch: Patch = Patch.NONE) -> bool:
    """Push ``a``; keep it and return True if the word stays free, else
    pop it back and return False (the search's membership predicate)."""
    index.push(a)
    ok = run_detector(index, kind, alpha, patch)
    if isinstance(ok, tuple):
        ok = ok[0]
    if not ok:
        index.pop()
        return False
    return True


def validate_detector(kind: DetectorKind, alpha: ExtendedExponent,
                      patch: Patch = Patch.NONE) -> None:
    """Raise ConfigError when (kind, alpha, patch) is inadmissible."""
    if kind is DetectorKind.SMALL_GENERIC:
        _require(alpha <= _TWO, "small", alpha, "1 < alpha <= 2")
    elif kind is DetectorKind.SMALL_DICT:
        if patch is Patch.NONE:
            _require(alpha <= _THREE_HALVES, "dict", alpha, "alpha <= 3/2")
        elif patch is Patch.HALF:
            _require(alpha == _THREE_HALVES_PLUS, "dict/half", alpha, "alpha = (3/2)+")
        else:
            _require(alpha < _TWO, "dict/nonoverlap", alpha, "alpha < 2")
    elif kind in (DetectorKind.BIG_FORWARD, DetectorKind.BIG_DUAL):
        _kb_for(alpha)
    elif kind is not DetectorKind.ORACLE:
        raise ConfigError(f"unknown detector kind {kind!r}")


def default_patch(alpha: ExtendedExponent) -> Patch:
    """The patch the dictionary detector needs for this exponent."""
    if alpha <= _THREE_HALVES:
        return Patch.NONE
    if alpha == _THREE_HALVES_PLUS:
        return Patch.HALF
    if alpha < _TWO:
        return Patch.NONOVERLAP
    raise ConfigError(f"dictionary detector inapplicable at alpha={alpha}")


def select_detector(alpha: ExtendedExponent, dual: bool = False,
                    expected_depth: int = 0,
                    dict_depth_limit: int = DICT_DEPTH_DEFAULT):
    """Pick (kind, patch) for an exponent.

    For alpha <= (3/2)+ the dictionary detector wins unless the expected
    word length exceeds ``dict_depth_limit`` (its memory is quadratic in
    the depth); then the cover-jump scan takes over.  Above 2 the dual
    detector is used exactly when the search walks reversal language.
    """
    if dual:
        _kb_for(alpha)
        return DetectorKind.BIG_DUAL, Patch.NONE
    if alpha <= _THREE_HALVES_PLUS:
        if expected_depth and expected_depth > dict_depth_limit:
            return DetectorKind.SMALL_GENERIC, Patch.NONE
        return DetectorKind.SMALL_DICT, default_patch(alpha)
    if alpha <= _TWO:
        return DetectorKind.SMALL_GENERIC, Patch.NONE
    return DetectorKind.BIG_FORWARD, Patch.NONE
