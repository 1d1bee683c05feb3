"""Detecting fractional Abelian repetitions in words.

A word contains an alpha-A-power when it has a factor u1...uk u' whose
blocks are Abelian equivalent (equal letter counts) and whose total
length is alpha times the block length.  Exponents are exact rationals
"p/q", optionally "p/q+" meaning "strictly greater than p/q".
"""

from abelianfree import (
    DetectorKind,
    ExtendedExponent,
    Patch,
    alphafree_big,
    alphafree_dict,
    alphafree_small,
    dual_alphafree,
    index_from_word,
    oracle_freeness,
)

# ----------------------------------------------------------------------
# abcde and bdaec are Abelian equivalent, so abcdebdaec is an Abelian
# square: exponent 2 >= 3/2.  Every proper prefix is 3/2-A-free.
# ----------------------------------------------------------------------
alpha = ExtendedExponent.parse("3/2")
idx = index_from_word("abcdebdaec", sigma=5)
free, witness = alphafree_small(idx, alpha, want_witness=True)
print(f"abcdebdaec is 3/2-A-free: {free}")
print(f"  witness: x = positions {witness.left}..{witness.right}, "
      f"z starts at {witness.i}")

# The same verdict from the cubic-time reference oracle.
print(f"  oracle agrees: {oracle_freeness('abcdebdaec', alpha)}")

# ----------------------------------------------------------------------
# For alpha <= 3/2 the dictionary detector is much faster.  The "+" in
# (3/2)+ changes which borderline repetitions count, and needs a patched
# lookup (Patch.HALF) to stay exact.
# ----------------------------------------------------------------------
alpha_plus = ExtendedExponent.parse("3/2+")
idxd = index_from_word("abcdbadc", sigma=4, with_dictionary=True)
free, witness = alphafree_dict(idxd, alpha_plus, Patch.HALF,
                               want_witness=True)
print(f"\nabcdbadc is (3/2)+-A-free: {free}  (witness starts at "
      f"{witness.left})")

# ----------------------------------------------------------------------
# Exponents above 2 need block-structured detectors.  Beyond exponent 2
# the property is no longer symmetric under reversal, so there is a
# forward detector and a dual (reversal-based) one.
# ----------------------------------------------------------------------
seven_thirds = ExtendedExponent.parse("7/3")
idx = index_from_word("acabcba", sigma=3)
print(f"\nacabcba forward 7/3-A-free: {alphafree_big(idx, seven_thirds)}")
print(f"acabcba dual    7/3-A-free: {dual_alphafree(idx, seven_thirds)}")

# ----------------------------------------------------------------------
# Growing a word letter by letter: the detectors only examine
# repetitions touching the right end, which is exactly what a prefix
# tree search needs.
# ----------------------------------------------------------------------
from abelianfree.detect import extend_check, select_detector

alpha = ExtendedExponent.parse("7/4")
kind, patch = select_detector(alpha)
print(f"\nselected detector for 7/4: {kind.value} (patch {patch.name})")
idx = index_from_word("", sigma=3, with_dictionary=kind is DetectorKind.SMALL_DICT)
word = []
for step in range(30):
    for a in range(3):
        if extend_check(idx, a, kind, alpha, patch):
            word.append("abc"[a])
            break
    else:
        break
print(f"greedily grown 7/4-A-free word: {''.join(word)}")
