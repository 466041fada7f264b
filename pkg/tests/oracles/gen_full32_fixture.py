#!/usr/bin/env python3
"""One-time generator for the frozen (3,2) full-space oracle fixture.

Brute-forces all 14**6 = 7,529,536 machines of the unrestricted (3,2) space
with the naive dict-based simulator, canonicalizes halting outputs to
patterns, and freezes the counts.  The production pipeline (reduced
enumeration + symmetric completions) must reproduce these counts exactly.

Usage: python3 gen_full32_fixture.py [cutoff] > /dev/null
Writes tests/data/full-3-2-pattern-counts.csv.  Takes a few minutes.
"""

from __future__ import annotations

import sys
import time
from collections import Counter
from pathlib import Path

import naive_tm

CUTOFF = 21  # calibrated at halting quantile 0.999999 over the reduced space


def pattern(s: str) -> str:
    order = dict.fromkeys(s)
    table = {ch: str(rank) for rank, ch in enumerate(order)}
    return s.translate(str.maketrans(table))


def main() -> None:
    cutoff = int(sys.argv[1]) if len(sys.argv) > 1 else CUTOFF
    counts: Counter = Counter()
    ran = 0
    halted = 0
    start = time.time()
    for machine in naive_tm.enumerate_full(3, 2):
        ran += 1
        result = naive_tm.simulate(machine, cutoff)
        if result is not None:
            halted += 1
            counts[pattern(result[0])] += 1
        if ran % 500_000 == 0:
            print(f"{ran} machines, {halted} halted, {time.time()-start:.0f}s",
                  file=sys.stderr, flush=True)

    out = Path(__file__).parent.parent / "data" / "full-3-2-pattern-counts.csv"
    lines = [
        "# naive full-space (3,2) oracle",
        f"# cutoff: {cutoff}",
        f"# machines_run: {ran}",
        f"# machines_halted: {halted}",
    ]
    lines += [f"{p},{c}" for p, c in sorted(counts.items())]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    print(f"wrote {out} ({len(counts)} patterns)", file=sys.stderr)


if __name__ == "__main__":
    main()
