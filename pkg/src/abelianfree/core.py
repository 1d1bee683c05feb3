"""Words over small alphabets, Parikh-vector machinery and exact exponent arithmetic.

Letters are integers 0..sigma-1; text I/O maps 'a'..'j' to 0..9.  Word
positions are 1-based throughout, so ``u = u[1..n]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K

MAX_SIGMA = 16
_TEXT = "abcdefghij"


class ContractError(ValueError):
    """An operation was called outside its stated preconditions."""


class ConfigError(ValueError):
    """A detector/exponent/search combination is not admissible."""


def letters_from_text(text: str) -> list[int]:
    try:
        return [_TEXT.index(ch) for ch in text.strip()]
    except ValueError:
        raise ContractError(f"word may only use letters {_TEXT!r}: {text!r}")


def text_from_letters(letters) -> str:
    return "".join(_TEXT[int(a)] for a in letters)


def reverse(u):
    """Positionwise reversal; works on strings and letter sequences."""
    if isinstance(u, str):
        return u[::-1]
    return list(u)[::-1]


@dataclass(frozen=True, order=False)
class ExtendedExponent:
    """A reduced rational p/q with an optional 'plus' flag.

    ``plus`` models the extended rationals: beta > p/q is equivalent to
    beta >= (p/q)+, so a plus exponent turns every threshold strict.
    """

    p: int
    q: int
    plus: bool = False

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise ConfigError(f"exponent must be positive: {self.p}/{self.q}")
        if self.p <= self.q:
            raise ConfigError(f"exponent must exceed 1: {self.p}/{self.q}")
        g = math.gcd(self.p, self.q)
        if g != 1:
            raise ConfigError(
                f"exponent must be reduced: {self.p}/{self.q} (use .parse to normalize)"
            )

    @classmethod
    def parse(cls, text: str, warn=None) -> "ExtendedExponent":
        """Parse "p/q" with optional trailing "+"; "p" alone means p/1.

        Unreduced input is normalized; ``warn`` (a callable) is told when
        that happens.
        """
        s = text.strip()
        plus = s.endswith("+")
        if plus:
            s = s[:-1]
        if "/" in s:
            ps, qs = s.split("/", 1)
            p, q = int(ps), int(qs)
        else:
            p, q = int(s), 1
        g = math.gcd(p, q)
        if g > 1:
            p, q = p // g, q // g
            if warn is not None:
                warn(f"exponent {text!r} normalized to {p}/{q}")
        return cls(p, q, plus)

    def __str__(self):
        base = f"{self.p}/{self.q}" if self.q != 1 else f"{self.p}"
        return base + ("+" if self.plus else "")

    def __float__(self):
        return self.p / self.q

    # Extended-rational total order: p/q+ sits strictly between p/q and
    # every larger rational.
    def _key(self, other: "ExtendedExponent"):
        return (self.p * other.q - other.p * self.q, int(self.plus) - int(other.plus))

    def __lt__(self, other):
        d, t = self._key(other)
        return d < 0 or (d == 0 and t < 0)

    def __le__(self, other):
        return not other < self

    def __gt__(self, other):
        return other < self

    def __ge__(self, other):
        return not self < other

    def cmp_ratio(self, m: int, n_base: int) -> bool:
        """True iff the concrete ratio m/n_base meets this threshold."""
        return exponent_at_least(m, n_base, self)


def exponent_at_least(m: int, n_base: int, alpha: ExtendedExponent) -> bool:
    """m/n_base >= alpha, exactly: m*q >= p*n (strict for plus exponents)."""
    lhs = m * alpha.q
    rhs = alpha.p * n_base
    return lhs > rhs if alpha.plus else lhs >= rhs


class IncrementalIndex:
    """A word plus the prefix-count and letter-position tables that all
    detectors share, maintained under push/pop of the last letter.

    ``c[a][i]`` counts letter ``a`` in ``u[1..i]``; ``d[a][i]`` is the
    position of the i-th occurrence of ``a``.  With ``with_dictionary``
    a suffix dictionary keyed by Parikh vector is kept as well: while the
    word is ``u[1..n]`` it holds every factor of ``u[1..n-1]`` grouped by
    Parikh vector, each value a strictly increasing position list.
    """

    def __init__(self, sigma: int, with_dictionary: bool = False, capacity: int = 64):
        if not 2 <= sigma <= MAX_SIGMA:
            raise ConfigError(f"alphabet size must be in [2, {MAX_SIGMA}]: {sigma}")
        self.sigma = sigma
        self.n = 0
        cap = max(capacity, 16)
        self.word = np.zeros(cap, dtype=np.int32)
        self.c = np.zeros((cap + 1, sigma), dtype=np.int32)
        self.d = np.zeros((sigma, cap), dtype=np.int32)
        self.cnt = np.zeros(sigma, dtype=np.int32)
        self.dict = {} if with_dictionary else None
        self._scratch = np.zeros(sigma, dtype=np.int32)

    # -- capacity ------------------------------------------------------
    def _grow(self):
        cap = 2 * len(self.word)
        word = np.zeros(cap, dtype=np.int32)
        word[: self.n] = self.word[: self.n]
        c = np.zeros((cap + 1, self.sigma), dtype=np.int32)
        c[: self.n + 1] = self.c[: self.n + 1]
        d = np.zeros((self.sigma, cap), dtype=np.int32)
        d[:, : len(self.word)] = self.d
        self.word, self.c, self.d = word, c, d

    # -- push / pop ----------------------------------------------------
    def push(self, a: int) -> None:
        if not 0 <= a < self.sigma:
            raise ContractError(f"letter {a} out of range for sigma={self.sigma}")
        if self.n == len(self.word):
            self._grow()
        if self.dict is not None:
            # register all suffixes of the current word, so the dictionary
            # holds every factor of the new word short of its last letter
            n = self.n
            key = [0] * self.sigma
            for i in range(n, 0, -1):
                key[int(self.word[i - 1])] += 1
                self.dict.setdefault(tuple(key), []).append(i)
        self.n = int(K.push_letter(self.word, self.c, self.d, self.cnt, self.n, a))

    def pop(self) -> int:
        if self.n == 0:
            raise ContractError("pop on empty word")
        b = int(self.word[self.n - 1])
        self.n -= 1
        self.cnt[b] -= 1
        if self.dict is not None:
            n = self.n
            key = [0] * self.sigma
            for i in range(n, 0, -1):
                key[int(self.word[i - 1])] += 1
                t = tuple(key)
                positions = self.dict[t]
                positions.pop()
                if not positions:
                    del self.dict[t]
        return b

    # -- queries -------------------------------------------------------
    def letters(self) -> list[int]:
        return [int(a) for a in self.word[: self.n]]

    def text(self) -> str:
        return text_from_letters(self.word[: self.n])

    def parikh(self, i: int, j: int) -> np.ndarray:
        """Parikh vector of u[i..j]; j < i yields the zero vector."""
        if not (1 <= i <= self.n + 1) or not (0 <= j <= self.n):
            raise ContractError(f"parikh({i},{j}) out of bounds for n={self.n}")
        if j < i:
            return np.zeros(self.sigma, dtype=np.int32)
        return (self.c[j] - self.c[i - 1]).astype(np.int32)

    def cover(self, P, j: int) -> int:
        """Largest i with Psi(u[i..j]) >= P, or 0 if none exists."""
        P = np.asarray(P, dtype=np.int32)
        if P.shape != (self.sigma,) or (P < 0).any():
            raise ContractError("P must be a nonnegative vector of length sigma")
        if not P.any():
            raise ContractError("cover requires at least one positive coordinate")
        if not 1 <= j <= self.n:
            raise ContractError(f"cover position {j} out of range for n={self.n}")
        return int(K.cover(self.c, self.d, P, self.sigma, j))

    def permutation_run(self) -> int:
        """Length of the longest suffix with pairwise distinct letters."""
        return int(K.perm_run(self.word, self.n))

    def fresh_like(self) -> "IncrementalIndex":
        return IncrementalIndex(self.sigma, with_dictionary=self.dict is not None)

    def structural_state(self):
        """Snapshot used by tests to compare against from-scratch builds."""
        return (
            self.letters(),
            self.c[: self.n + 1].tolist(),
            [self.d[a, : self.cnt[a]].tolist() for a in range(self.sigma)],
            None if self.dict is None else {k: list(v) for k, v in self.dict.items()},
        )


def index_from_word(word, sigma: int, with_dictionary: bool = False) -> IncrementalIndex:
    """Build an index by pushing every letter of ``word`` (text or ints)."""
    if isinstance(word, str):
        word = letters_from_text(word)
    idx = IncrementalIndex(sigma, with_dictionary=with_dictionary, capacity=len(word) + 1)
    for a in word:
        idx.push(int(a))
    return idx
