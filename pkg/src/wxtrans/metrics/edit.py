"""Edit distances and the Fuzz similarity ratio.

Both distances use bit-parallel recurrences over Python ints (Myers/Hyyrö
for Levenshtein, Allison-Dix/Hyyrö for LCS), so the cost per symbol of the
longer input is a handful of big-int operations instead of a DP row.
They work on any sequence of hashable items: strings or token tuples.
"""

from __future__ import annotations

from typing import Hashable, Sequence


def match_masks(seq: Sequence[Hashable]) -> dict[Hashable, int]:
    masks: dict[Hashable, int] = {}
    bit = 1
    for item in seq:
        masks[item] = masks.get(item, 0) | bit
        bit <<= 1
    return masks


def levenshtein(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Minimal number of unit-cost insertions, deletions and substitutions."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    # pattern is the shorter sequence; stream the longer one through it
    return levenshtein_masks(match_masks(b), len(b), a)


def levenshtein_masks(peq: dict[Hashable, int], m: int, text: Sequence[Hashable]) -> int:
    """Levenshtein distance against a pattern of length ``m`` given as match masks.

    Lets callers that compare many texts to one pattern build the masks once.
    """
    if m == 0:
        return len(text)
    full = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv, score = full, 0, m
    for item in text:
        eq = peq.get(item, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & full)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & full
        mh = (mh << 1) & full
        pv = mh | (~(xv | ph) & full)
        mv = ph & xv
    return score


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Length of a longest common subsequence."""
    if len(a) < len(b):
        a, b = b, a
    m = len(b)
    if m == 0:
        return 0
    peq = match_masks(b)
    full = (1 << m) - 1
    v = full
    for item in a:
        u = v & peq.get(item, 0)
        v = ((v + u) | (v - u)) & full
    return m - v.bit_count()


def indel_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Edit distance when only insertions and deletions are allowed."""
    return len(a) + len(b) - 2 * lcs_length(a, b)


def fuzz_ratio(a: str, b: str) -> int:
    """Similarity 0-100 from the LCS matched-character count, ``2M / (|a|+|b|)``.

    Rounds half up. Unequal strings are capped at 99 so that 100 means
    identical.
    """
    total = len(a) + len(b)
    if total == 0:
        return 100
    if a == b:
        return 100
    matched = lcs_length(a, b)
    # round(100 * 2M / total) with half-up, in integers
    score = (200 * matched * 2 + total) // (2 * total)
    return min(score, 99)
