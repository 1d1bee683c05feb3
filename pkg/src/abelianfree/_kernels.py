"""Numba kernels shared by the detectors and the search engines.

Everything operates on preallocated numpy arrays so that engine state can
be checkpointed and the hot loops stay allocation-free.  Conventions:

* ``word`` stores letters 0-based, positions are 1-based in the math, so
  letter at position i is ``word[i-1]``.
* ``c`` has shape (cap+1, sigma) with ``c[i, a]`` = occurrences of ``a``
  in ``u[1..i]``; ``d`` has shape (sigma, cap) with ``d[a, t-1]`` = the
  position of the t-th occurrence of ``a``; ``cnt[a] = c[n, a]``.
* exponents are passed as (p, q, plus) and all threshold comparisons are
  exact integer cross-products (plus means strict).
"""
from __future__ import annotations

import numpy as np
from numba import njit, uint64, int64

NJ = dict(cache=True, nogil=True)

# walk/dfs engine status codes
ST_DONE = 0        # node budget reached
ST_EXHAUSTED = 1   # whole (sub)tree visited
ST_BUDGET = 2      # step budget reached, state resumable
ST_CAPPED = 3      # depth cap hit somewhere (dfs only, still ran to exhaustion)

# detector codes for the engines
DET_SMALL = 0
DET_DICT = 1
DET_BIG = 2
DET_DUAL = 3

PATCH_NONE = 0
PATCH_HALF = 1
PATCH_NONOVERLAP = 2


@njit(**NJ)
def meets(m, n_base, p, q, plus):
    """m/n_base >= p/q, strict when plus (the alpha-plus convention)."""
    lhs = m * q
    rhs = p * n_base
    if plus:
        return lhs > rhs
    return lhs >= rhs


@njit(**NJ)
def push_letter(word, c, d, cnt, n, a):
    m = n + 1
    word[m - 1] = a
    sigma = cnt.shape[0]
    for b in range(sigma):
        c[m, b] = c[n, b]
    c[m, a] += 1
    d[a, cnt[a]] = m
    cnt[a] += 1
    return m


@njit(**NJ)
def pop_letter(word, cnt, n):
    b = word[n - 1]
    cnt[b] -= 1
    return n - 1


@njit(**NJ)
def cover(c, d, P, sigma, j):
    """Largest i with Psi(u[i..j]) >= P, or 0 if some letter runs short.

    i = min_a d_a[c_a[j] - P[a] + 1]; coordinates with P[a] = 0 only ever
    contribute values past j and can never win the minimum, so they are
    skipped.
    """
    res = np.int64(1 << 60)
    for a in range(sigma):
        need = P[a]
        if need > 0:
            have = c[j, a]
            if have < need:
                return 0
            v = d[a, have - need]
            if v < res:
                res = v
    return res


@njit(**NJ)
def perm_run(word, n):
    """Length of the longest suffix with pairwise distinct letters."""
    mask = 0
    r = 0
    t = n - 1
    while t >= 0:
        b = word[t]
        if (mask >> b) & 1:
            break
        mask |= 1 << b
        r += 1
        t -= 1
    return r


@njit(**NJ)
def perm_run_with(word, n, a):
    """Distinct-suffix run of the word extended by letter ``a``."""
    mask = 1 << a
    r = 1
    t = n - 1
    while t >= 0:
        b = word[t]
        if (mask >> b) & 1:
            break
        mask |= 1 << b
        r += 1
        t -= 1
    return r


# ----------------------------------------------------------------------
# Detectors.  All assume every proper prefix of the current word is free
# (the prefix-tree search invariant) and check only repetitions touching
# the right end.  On detection they fill ``wit`` with the violating
# suffix factorization: wit[0]=start of x, wit[1]=end of x, wit[2]=start
# of z, wit[3]=extra (midpoint / |x| for the dual case).
# ----------------------------------------------------------------------

@njit(**NJ)
def check_small(word, c, d, n, sigma, p, q, plus, P, wit, stats):
    """1 < alpha <= 2: no suffix xyz with x ~ z and |xyz|/|xy| >= alpha.

    Suffixes z are scanned from short to long; candidate x's are located
    by cover jumps.  stats[0] accumulates inner-loop iterations.
    """
    for a in range(sigma):
        P[a] = 0
    i_min = 1 + (n + 1) // 2
    i = n
    while i >= i_min:
        P[word[i - 1]] += 1
        length = n - i + 1
        right = i - 1
        left = cover(c, d, P, sigma, right)
        if left == 0:
            return True  # no longer suffix can be covered either
        while left >= 1 and meets(n - left + 1, i - left, p, q, plus):
            stats[0] += 1
            if right - left + 1 == length:
                wit[0] = left
                wit[1] = right
                wit[2] = i
                wit[3] = 0
                return False
            right = left + length - 1
            left = cover(c, d, P, sigma, right)
        i -= 1
    return True


@njit(**NJ)
def check_big(word, c, d, n, sigma, p, q, plus, kb, P, wit, stats):
    """2 < alpha < 3 (kb=2) or 3 < alpha < 4 (kb=3).

    A forbidden suffix is xyz with x ~ z, xy an Abelian square (kb=2) or
    cube (kb=3), and kb*|xyz|/|xy| >= alpha.
    """
    for a in range(sigma):
        P[a] = 0
    i_min = 1 + (kb * n + kb) // (kb + 1)  # 1 + ceil(kb*n/(kb+1))
    i = n
    while i >= i_min:
        P[word[i - 1]] += 1
        length = n - i + 1
        right = i - 1
        left = cover(c, d, P, sigma, right)
        if left == 0:
            return True
        while left >= 1 and meets(kb * (n - left + 1), i - left, p, q, plus):
            stats[0] += 1
            if left + length - 1 == right:
                period = i - left
                # z must match a prefix of the first block: |z| <= period/kb
                if period % kb == 0 and kb * length <= period:
                    t = period // kb
                    equal = True
                    for blk in range(1, kb):
                        lo = left - 1 + (blk - 1) * t
                        mid = lo + t
                        hi = mid + t
                        for a in range(sigma):
                            if c[mid, a] - c[lo, a] != c[hi, a] - c[mid, a]:
                                equal = False
                                break
                        if not equal:
                            break
                    if equal:
                        wit[0] = left
                        wit[1] = right
                        wit[2] = i
                        wit[3] = t
                        return False
                right -= 1
            else:
                right = left + length - 1
            left = cover(c, d, P, sigma, right)
        i -= 1
    return True


@njit(**NJ)
def check_dual(word, c, d, n, sigma, p, q, plus, kb, P, P1, wit, stats):
    """Dual powers: the reversal of the word ends with an alpha-power.

    kb=2 handles 2 <= alpha < 3 (suffix x y z, y ~ z, x ~ suffix of z,
    |xyz|/|z| >= alpha); kb=3 the Abelian-cube analogue for 3 <= alpha < 4.
    stats[0] counts processed suffixes (outer iterations).
    """
    i = n
    while i >= 1:
        length = n - i + 1
        if not meets(n, length, p, q, plus):
            break  # even the whole word is too short for this base
        stats[0] += 1
        for a in range(sigma):
            P[a] = c[n, a] - c[i - 1, a]
        # kb-1 full blocks Abelian-equivalent to z must precede it
        bstart = i
        blocks_ok = True
        for _blk in range(kb - 1):
            if bstart == 1:
                blocks_ok = False
                left = 0
                break
            left = cover(c, d, P, sigma, bstart - 1)
            if left != 0 and left + length == bstart:
                bstart = left
            else:
                blocks_ok = False
                break
        if blocks_ok:
            # minimal |x| so that (|x| + kb*len)/len >= alpha
            num = (p - kb * q) * length
            jmin = -((-num) // q)
            if plus and jmin * q == num:
                jmin += 1
            if jmin < 1:
                jmin = 1
            j = jmin
            while j <= length:
                for a in range(sigma):
                    P1[a] = c[n, a] - c[n - j, a]
                if bstart == 1:
                    break
                left1 = cover(c, d, P1, sigma, bstart - 1)
                if left1 == 0:
                    break
                if left1 + j == bstart:
                    wit[0] = left1
                    wit[1] = bstart - 1
                    wit[2] = i
                    wit[3] = j
                    return False
                j = bstart - left1
            i -= 1
        else:
            if left == 0:
                # nothing ending at bstart-1 covers Psi(z): any longer
                # block structure needs an even larger base
                newlen = -((-(n + 1)) // kb)
            else:
                newlen = -((-(n - left + 1)) // kb)
            i_new = n + 1 - newlen
            if i_new >= i:
                i_new = i - 1
            i = i_new
    return True


@njit(**NJ)
def oracle_suffix_free(word, n, sigma, p, q, plus, pref):
    """Definition-based check that no suffix of u is a beta-A-power with
    beta >= alpha, by enumerating every (start, base) pair.

    Complete only under the prefix-tree invariant (all proper prefixes
    already free).  ``pref`` is an (n+1, sigma) workspace.
    """
    for a in range(sigma):
        pref[0, a] = 0
    for t in range(1, n + 1):
        for a in range(sigma):
            pref[t, a] = pref[t - 1, a]
        pref[t, word[t - 1]] += 1
    for i in range(1, n + 1):
        m = n - i + 1
        for base in range(1, m):
            if not meets(m, base, p, q, plus):
                continue
            k = m // base
            rem = m - k * base
            ok = True
            # k full blocks, Abelian equivalent pairwise
            for blk in range(1, k):
                lo = i - 1 + (blk - 1) * base
                mid = lo + base
                hi = mid + base
                for a in range(sigma):
                    if pref[mid, a] - pref[lo, a] != pref[hi, a] - pref[mid, a]:
                        ok = False
                        break
                if not ok:
                    break
            if ok and rem > 0:
                # remainder Abelian equivalent to a prefix of the first block
                lo = i - 1
                for a in range(sigma):
                    if pref[n, a] - pref[n - rem, a] != pref[lo + rem, a] - pref[lo, a]:
                        ok = False
                        break
            if ok:
                return False
    return True


@njit(**NJ)
def oracle_word_free(word, n, sigma, p, q, plus):
    """No factor of u is a beta-A-power with beta >= alpha (quadratic in
    the number of factor spans; reference oracle, not a production path)."""
    pref = np.zeros((n + 1, sigma), dtype=np.int32)
    for j in range(1, n + 1):
        if not oracle_suffix_free(word[:j], j, sigma, p, q, plus, pref):
            return False
    return True


# ----------------------------------------------------------------------
# Suffix dictionary for the engines: an open-addressing-free chaining
# hash table built on flat arrays.  Parikh vectors are packed exactly
# into two 64-bit words (16-bit fields for sigma <= 8, 8-bit fields
# otherwise), so lookups are exact, never probabilistic.  Position lists
# are per-key stacks threaded through a single global node stack; the
# push/pop discipline of the search makes every allocation LIFO, so both
# nodes and key records free in stack order and deletion is O(1).
# ----------------------------------------------------------------------

@njit(**NJ)
def _dict_hash(k1, k2, mask):
    h = (uint64(k1) * uint64(0x9E3779B97F4A7C15)) ^ (uint64(k2) * uint64(0xC2B2AE3D27D4EB4F))
    h ^= h >> uint64(29)
    return int64(h & uint64(mask))


@njit(**NJ)
def dict_insert(k1, k2, pos, buckets, rec_k1, rec_k2, rec_top, rec_next,
                nd_pos, nd_prev, nd_rec, state):
    """state[5]=node sp, state[6]=record sp."""
    mask = buckets.shape[0] - 1
    h = _dict_hash(k1, k2, mask)
    rec = buckets[h]
    while rec != -1:
        if rec_k1[rec] == k1 and rec_k2[rec] == k2:
            break
        rec = rec_next[rec]
    if rec == -1:
        rec = state[6]
        state[6] += 1
        rec_k1[rec] = k1
        rec_k2[rec] = k2
        rec_top[rec] = -1
        rec_next[rec] = buckets[h]
        buckets[h] = rec
    sp = state[5]
    nd_pos[sp] = pos
    nd_prev[sp] = rec_top[rec]
    nd_rec[sp] = rec
    rec_top[rec] = sp
    state[5] = sp + 1


@njit(**NJ)
def dict_lookup(k1, k2, buckets, rec_k1, rec_k2, rec_top, rec_next):
    """Index of the newest node for this Parikh vector, or -1."""
    mask = buckets.shape[0] - 1
    h = _dict_hash(k1, k2, mask)
    rec = buckets[h]
    while rec != -1:
        if rec_k1[rec] == k1 and rec_k2[rec] == k2:
            return rec_top[rec]
        rec = rec_next[rec]
    return int64(-1)


@njit(**NJ)
def dict_unwind(count, buckets, rec_k1, rec_k2, rec_top, rec_next,
                nd_pos, nd_prev, nd_rec, state):
    """Remove the last ``count`` inserted nodes (exact LIFO inverse)."""
    mask = buckets.shape[0] - 1
    for _ in range(count):
        state[5] -= 1
        sp = state[5]
        rec = nd_rec[sp]
        rec_top[rec] = nd_prev[sp]
        if rec_top[rec] == -1:
            # the record was created by this node: it is the newest record
            # and sits at the head of its bucket chain
            state[6] -= 1
            h = _dict_hash(rec_k1[rec], rec_k2[rec], mask)
            buckets[h] = rec_next[rec]


@njit(**NJ)
def _pack_add(k1, k2, a, bits):
    half = 64 // bits
    if a < half:
        return k1 + (uint64(1) << uint64(bits * a)), k2
    return k1, k2 + (uint64(1) << uint64(bits * (a - half)))


@njit(**NJ)
def dict_add_word_suffixes(word, n, bits, buckets, rec_k1, rec_k2, rec_top,
                           rec_next, nd_pos, nd_prev, nd_rec, state):
    """Register every suffix of the current word (called on descent)."""
    k1 = uint64(0)
    k2 = uint64(0)
    for i in range(n, 0, -1):
        k1, k2 = _pack_add(k1, k2, word[i - 1], bits)
        dict_insert(k1, k2, i, buckets, rec_k1, rec_k2, rec_top, rec_next,
                    nd_pos, nd_prev, nd_rec, state)


@njit(**NJ)
def check_dict(word, n, p, q, plus, patch, bits,
               buckets, rec_k1, rec_k2, rec_top, rec_next,
               nd_pos, nd_prev, nd_rec, wit):
    """Dictionary-based detection for alpha <= 3/2 (patch variants extend
    it to (3/2)+ and to every alpha < 2).

    The dictionary must hold the factors of u[1..n-1]; the newest
    occurrence of some x ~ z is found by one lookup, the patches step to
    older occurrences when the newest one overlaps z.
    """
    k1 = uint64(0)
    k2 = uint64(0)
    i_min = 1 + (n + 1) // 2
    i = n
    while i >= i_min:
        k1, k2 = _pack_add(k1, k2, word[i - 1], bits)
        length = n - i + 1
        node = dict_lookup(k1, k2, buckets, rec_k1, rec_k2, rec_top, rec_next)
        if node != -1:
            pos = nd_pos[node]
            if patch == PATCH_HALF:
                if length % 2 == 0 and pos == i - length // 2:
                    node = nd_prev[node]
                    pos = nd_pos[node] if node != -1 else -1
            elif patch == PATCH_NONOVERLAP:
                while node != -1 and nd_pos[node] > i - length:
                    node = nd_prev[node]
                pos = nd_pos[node] if node != -1 else -1
            if node != -1 and pos <= i - length and meets(n - pos + 1, i - pos, p, q, plus):
                wit[0] = pos
                wit[1] = pos + length - 1
                wit[2] = i
                wit[3] = 0
                return False
        i -= 1
    return True


@njit(**NJ)
def run_detector(det, kb, patch, bits, word, c, d, n, sigma, p, q, plus,
                 P, P1, wit, stats,
                 buckets, rec_k1, rec_k2, rec_top, rec_next,
                 nd_pos, nd_prev, nd_rec):
    if det == DET_SMALL:
        return check_small(word, c, d, n, sigma, p, q, plus, P, wit, stats)
    if det == DET_DICT:
        return check_dict(word, n, p, q, plus, patch, bits,
                          buckets, rec_k1, rec_k2, rec_top, rec_next,
                          nd_pos, nd_prev, nd_rec, wit)
    if det == DET_BIG:
        return check_big(word, c, d, n, sigma, p, q, plus, kb, P, wit, stats)
    return check_dual(word, c, d, n, sigma, p, q, plus, kb, P, P1, wit, stats)


# ----------------------------------------------------------------------
# Random number generator: splitmix64, one 64-bit word of fully
# serializable state (needed by checkpoints).
# ----------------------------------------------------------------------

@njit(**NJ)
def rng_next(rng):
    rng[0] = rng[0] + uint64(0x9E3779B97F4A7C15)
    z = rng[0]
    z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
    return z ^ (z >> uint64(31))


@njit(**NJ)
def rng_pick_bit(rng, mask, nbits):
    """Pick a uniformly random set bit of ``mask`` (popcount given)."""
    r = int64(rng_next(rng) % uint64(nbits))
    a = 0
    while True:
        if (mask >> a) & 1:
            if r == 0:
                return a
            r -= 1
        a += 1


# ----------------------------------------------------------------------
# Random depth-first walk engine (Algorithm-1 style iterations plus the
# forced-backtrack rule).  All state lives in caller-owned arrays:
#
#   state: [n, ml, count, since_progress, rejected, dict_sp, dict_rp, tests]
#   remaining: per-level bitmasks of untried letters
#
# The engine runs until ``count`` reaches N, the tree is exhausted, or
# ``max_steps`` loop iterations elapse (for checkpointing).
# ----------------------------------------------------------------------

S_N = 0
S_ML = 1
S_COUNT = 2
S_SINCE = 3
S_REJECTED = 4
S_DICTSP = 5
S_DICTRP = 6
S_TESTS = 7


@njit(**NJ)
def walk_engine(word, c, d, cnt, remaining, state, rng, trace,
                sigma, p, q, plus, det, kb, patch, bits,
                buckets, rec_k1, rec_k2, rec_top, rec_next,
                nd_pos, nd_prev, nd_rec,
                P, P1, wit, stats,
                N, max_steps, policy_on, cap):
    full = (1 << sigma) - 1
    use_dict = det == DET_DICT
    steps = 0
    while steps < max_steps:
        steps += 1
        if state[S_COUNT] >= N:
            return ST_DONE
        n = state[S_N]
        mask = remaining[n]
        if mask == 0:
            if n == 0:
                return ST_EXHAUSTED
            if use_dict:
                dict_unwind(n, buckets, rec_k1, rec_k2, rec_top, rec_next,
                            nd_pos, nd_prev, nd_rec, state)
            state[S_N] = pop_letter(word, cnt, n)
            continue
        nbits = 0
        m2 = mask
        while m2:
            nbits += m2 & 1
            m2 >>= 1
        a = rng_pick_bit(rng, mask, nbits)
        remaining[n] = mask & ~(1 << a)
        if n + 1 >= cap:
            # depth capacity reached: treat the child as unavailable
            state[S_REJECTED] += 1
            continue
        m = push_letter(word, c, d, cnt, n, a)
        state[S_TESTS] += 1
        ok = run_detector(det, kb, patch, bits, word, c, d, m, sigma, p, q, plus,
                          P, P1, wit, stats,
                          buckets, rec_k1, rec_k2, rec_top, rec_next,
                          nd_pos, nd_prev, nd_rec)
        if ok:
            if use_dict:
                dict_add_word_suffixes(word, m, bits, buckets, rec_k1, rec_k2,
                                       rec_top, rec_next, nd_pos, nd_prev,
                                       nd_rec, state)
            state[S_N] = m
            remaining[m] = full
            state[S_COUNT] += 1
            if trace.shape[0] >= state[S_COUNT]:
                trace[state[S_COUNT] - 1] = m
            state[S_SINCE] += 1
            if m > state[S_ML]:
                state[S_ML] = m
                state[S_SINCE] = 0
            elif policy_on:
                k = state[S_ML]
                f = int64(np.ceil(k * np.sqrt(k)))
                if state[S_SINCE] >= f:
                    g = int64(np.ceil(np.sqrt(k)))
                    hop = g if g < state[S_N] else state[S_N]
                    for _ in range(hop):
                        nn = state[S_N]
                        if use_dict:
                            dict_unwind(nn, buckets, rec_k1, rec_k2, rec_top,
                                        rec_next, nd_pos, nd_prev, nd_rec, state)
                        state[S_N] = pop_letter(word, cnt, nn)
                    state[S_SINCE] = 0
        else:
            state[S_N] = pop_letter(word, cnt, m)
            state[S_REJECTED] += 1
    return ST_BUDGET


# ----------------------------------------------------------------------
# Exhaustive depth-first enumeration (deterministic child order 0,1,...)
# with optional lexmin restriction, forbidden-permutation pruning (for
# the three-part reduced search) and a depth cap.
#
#   state: [n, maxdepth, count, capped, rejected, dict_sp, dict_rp, tests]
#   cursor[lvl]: next letter to try at that level
#   mu[lvl]: max letter used in the first lvl letters (-1 at the root)
# ----------------------------------------------------------------------

D_N = 0
D_MAXDEPTH = 1
D_COUNT = 2
D_CAPPED = 3
D_REJECTED = 4
D_DICTSP = 5
D_DICTRP = 6
D_TESTS = 7


@njit(**NJ)
def dfs_engine(word, c, d, cnt, cursor, mu, hist, deepest, state,
               sigma, p, q, plus, det, kb, patch, bits,
               buckets, rec_k1, rec_k2, rec_top, rec_next,
               nd_pos, nd_prev, nd_rec,
               P, P1, wit, stats,
               lexmin, perm_limit, base_depth, depth_cap, max_steps):
    use_dict = det == DET_DICT
    steps = 0
    while steps < max_steps:
        steps += 1
        n = state[D_N]
        amax = sigma - 1
        if lexmin and mu[n] + 1 < amax:
            amax = mu[n] + 1
        if cursor[n] > amax:
            if n == base_depth:
                return ST_CAPPED if state[D_CAPPED] else ST_EXHAUSTED
            if use_dict:
                dict_unwind(n, buckets, rec_k1, rec_k2, rec_top, rec_next,
                            nd_pos, nd_prev, nd_rec, state)
            state[D_N] = pop_letter(word, cnt, n)
            continue
        a = cursor[n]
        cursor[n] += 1
        if perm_limit > 0 and perm_run_with(word, n, a) >= perm_limit:
            continue  # the child leaves the constrained language
        m = push_letter(word, c, d, cnt, n, a)
        state[D_TESTS] += 1
        ok = run_detector(det, kb, patch, bits, word, c, d, m, sigma, p, q, plus,
                          P, P1, wit, stats,
                          buckets, rec_k1, rec_k2, rec_top, rec_next,
                          nd_pos, nd_prev, nd_rec)
        if not ok:
            state[D_N] = pop_letter(word, cnt, m)
            state[D_REJECTED] += 1
            continue
        state[D_COUNT] += 1
        hist[m] += 1
        if m > state[D_MAXDEPTH]:
            state[D_MAXDEPTH] = m
            for t in range(m):
                deepest[t] = word[t]
        if m >= depth_cap:
            state[D_CAPPED] = 1
            state[D_N] = pop_letter(word, cnt, m)
            continue
        if use_dict:
            dict_add_word_suffixes(word, m, bits, buckets, rec_k1, rec_k2,
                                   rec_top, rec_next, nd_pos, nd_prev,
                                   nd_rec, state)
        state[D_N] = m
        cursor[m] = 0
        mu[m] = mu[n] if mu[n] >= a else a
    return ST_BUDGET
