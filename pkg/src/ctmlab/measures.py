"""Classical comparison measures: Shannon entropy, second-order (digram)
entropy, and change complexity for binary strings.

All logarithms are base 2, matching the bit units of the ACSS estimates.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable


def _freq_entropy(counts: Iterable[int]) -> float:
    total = sum(counts)
    return -sum(c / total * math.log2(c / total) for c in counts if c)


def entropy(s: str) -> float:
    """First-order entropy in bits/symbol, from relative symbol frequencies.

    Depends only on the symbol histogram, not on arrangement: a balanced
    alternation scores the full log2(#symbols).
    """
    if not s:
        raise ValueError("entropy of an empty string is undefined")
    return _freq_entropy(Counter(s).values())


def entropy2(s: str) -> float:
    """Second-order entropy in bits/digram over the len(s)-1 overlapping
    adjacent pairs (linear, not circular)."""
    if len(s) < 2:
        raise ValueError("second-order entropy needs at least 2 symbols")
    return _freq_entropy(Counter(s[i : i + 2] for i in range(len(s) - 1)).values())


def change_complexity(s: str) -> float:
    """Multi-level change complexity of a binary string.

    The string is reduced level by level to a difference pyramid: level 1
    marks changes between adjacent symbols, level k marks changes between
    adjacent entries of level k-1.  The value is the total number of changes
    registered across all len(s)-1 levels, per symbol of the original string:

        C(s) = (sum_k changes_k) / len(s)

    A constant string scores 0 (no change at any level of description) and a
    pure alternation just under 1 (all of its change sits at the first
    level); values grow roughly linearly with length for structureless
    strings.  Invariant under 0<->1 complement and under reversal.
    """
    if len(s) < 2:
        raise ValueError("change complexity needs at least 2 symbols")
    symbols = sorted(set(s))
    if len(symbols) > 2:
        raise ValueError("change complexity is only available for binary strings")
    level = [0 if ch == symbols[0] else 1 for ch in s]
    total = 0
    while len(level) > 1:
        level = [a ^ b for a, b in zip(level, level[1:])]
        total += sum(level)
    return total / len(s)
