"""Vectorized batch simulator used by campaign and calibration runs.

Machines are held as struct-of-arrays transition tables so whole batches
advance one step per numpy pass.  The digit -> action mapping mirrors
``machines._digit_to_action`` exactly; the test suite cross-checks the two.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .machines import SpaceSpec

# Rows per simulation chunk are sized so the tape buffer stays around this
# many bytes; the tape is (rows, 2*cutoff+1) int8.
_TAPE_BUDGET = 48_000_000
_MIN_ROWS = 512
_MAX_ROWS = 65_536


@dataclass
class ActionArrays:
    """Transition tables for a batch, indexed [machine, state, symbol]."""

    is_halt: np.ndarray  # bool
    write: np.ndarray  # int8
    move: np.ndarray  # int8, -1 or +1 (unused for halts)
    next_state: np.ndarray  # int8, 0-based (unused for halts)

    def __len__(self) -> int:
        return self.is_halt.shape[0]

    def slice(self, lo: int, hi: int) -> "ActionArrays":
        return ActionArrays(
            self.is_halt[lo:hi],
            self.write[lo:hi],
            self.move[lo:hi],
            self.next_state[lo:hi],
        )


def actions_from_digits(digits: np.ndarray, space: SpaceSpec, reduced: bool) -> ActionArrays:
    """Expand per-entry action digits (batch, n*m) into action arrays."""
    n, m = space.n_states, space.n_symbols
    batch = digits.shape[0]
    is_halt = digits < m
    b = digits - m
    write = np.where(is_halt, digits, b // (2 * n)).astype(np.int8)
    r = b % (2 * n)
    move = np.where(r < n, -1, 1).astype(np.int8)
    next_state = (r % n).astype(np.int8)
    if reduced:
        d0 = digits[:, 0]
        is_halt[:, 0] = False
        write[:, 0] = (d0 // (n - 1)).astype(np.int8)
        move[:, 0] = 1
        next_state[:, 0] = (d0 % (n - 1) + 1).astype(np.int8)
    shape = (batch, n, m)
    return ActionArrays(
        is_halt.reshape(shape),
        write.reshape(shape),
        move.reshape(shape),
        next_state.reshape(shape),
    )


def decode_range(start: int, stop: int, space: SpaceSpec, reduced: bool = True) -> ActionArrays:
    """Decode the contiguous index range [start, stop) into action arrays.

    Only valid while stop fits in int64; full enumerations are budget-capped
    far below that.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    n_entries = space.n_entries
    digits = np.empty((idx.size, n_entries), dtype=np.int64)
    radix = space.actions_per_entry
    for col in range(n_entries - 1, 0, -1):
        idx, digits[:, col] = np.divmod(idx, radix)
    digits[:, 0] = idx  # first digit has the (possibly reduced) radix
    return actions_from_digits(digits, space, reduced)


def sample_actions(rng: np.random.Generator, count: int, space: SpaceSpec) -> ActionArrays:
    """Draw ``count`` uniform reduced-space machines as action arrays.

    Drawing each entry's digit independently is the same distribution as
    drawing a uniform machine index, without needing >64-bit integers.
    """
    digits = np.empty((count, space.n_entries), dtype=np.int64)
    digits[:, 0] = rng.integers(0, space.reduced_initial_actions, size=count)
    digits[:, 1:] = rng.integers(
        0, space.actions_per_entry, size=(count, space.n_entries - 1)
    )
    return actions_from_digits(digits, space, reduced=True)


def _chunk_rows(cutoff: int) -> int:
    width = 2 * cutoff + 1
    return int(min(_MAX_ROWS, max(_MIN_ROWS, _TAPE_BUDGET // width)))


def _simulate_chunk(acts: ActionArrays, cutoff: int):
    """Run one chunk to completion.

    Returns (steps, tape, lo, hi): ``steps`` is the halting step per machine
    (0 for timeouts); ``tape``, ``lo``, ``hi`` give each halted machine's
    final tape and visited bounds.
    """
    batch = len(acts)
    width = 2 * cutoff + 1
    center = cutoff
    tape = np.zeros((batch, width), dtype=np.int8)
    head = np.full(batch, center, dtype=np.int64)
    state = np.zeros(batch, dtype=np.int64)
    lo = head.copy()
    hi = head.copy()
    steps = np.zeros(batch, dtype=np.int32)
    alive = np.arange(batch, dtype=np.int64)

    for step in range(1, cutoff + 1):
        if alive.size == 0:
            break
        h = head[alive]
        sym = tape[alive, h].astype(np.int64)
        st = state[alive]
        halting = acts.is_halt[alive, st, sym]
        tape[alive, h] = acts.write[alive, st, sym]
        steps[alive[halting]] = step
        moving = ~halting
        mv = acts.move[alive, st, sym][moving]
        nx = acts.next_state[alive, st, sym][moving]
        alive = alive[moving]
        if alive.size:
            nh = h[moving] + mv
            head[alive] = nh
            lo[alive] = np.minimum(lo[alive], nh)
            hi[alive] = np.maximum(hi[alive], nh)
            state[alive] = nx
    return steps, tape, lo, hi


def count_chunk_outputs(
    acts: ActionArrays, cutoff: int, counter: Counter
) -> int:
    """Simulate a chunk and add halting outputs to ``counter``.

    Returns the number of halting machines.  Output strings render symbols
    as ASCII digits.
    """
    steps, tape, lo, hi = _simulate_chunk(acts, cutoff)
    halted = np.nonzero(steps > 0)[0]
    ascii_tape = tape + np.int8(ord("0"))
    for i in halted:
        counter[ascii_tape[i, lo[i] : hi[i] + 1].tobytes().decode("ascii")] += 1
    return int(halted.size)


def chunk_halting_steps(acts: ActionArrays, cutoff: int) -> np.ndarray:
    """Simulate a chunk and return halting step counts (halters only)."""
    steps, _, _, _ = _simulate_chunk(acts, cutoff)
    return steps[steps > 0]


def iter_chunks(acts: ActionArrays, cutoff: int):
    """Split a batch into tape-budget-sized chunks."""
    rows = _chunk_rows(cutoff)
    for start in range(0, len(acts), rows):
        yield acts.slice(start, min(start + rows, len(acts)))
