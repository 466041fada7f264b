"""Busy Beaver machine model: (n, m) spaces, transition tables, a bijective
integer encoding of machines, and a blank-tape simulator with a step cutoff.

A machine has n working states (numbered 1..n) and m tape symbols (0..m-1,
with 0 the blank).  Every (state, read-symbol) entry of the transition table
holds one of

* ``Halt(write)``   -- write the symbol at the head and stop, no move;
* ``Step(write, direction, next_state)`` -- write, move one cell L/R, switch
  state.

That gives m + 2*n*m = m*(2n+1) possible actions per entry and
``(m*(2n+1))**(n*m)`` machines in the full space.

Machines are identified with integers by reading the table as a mixed-radix
number: entries are ordered (1,0), (1,1), ..., (n,m-1) from most to least
significant digit, and within an entry the actions are ordered Halt actions
first (by written symbol) followed by Step actions in (write, direction,
next_state) lexicographic order with L before R.  The *reduced* flavor
restricts the (state 1, blank) entry to ``Step(write, R, next)`` with
``next >= 2`` (radix m*(n-1)); everything else is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

LEFT = "L"
RIGHT = "R"

# Machine indices are plain (arbitrary-precision) ints; spaces beyond a few
# states overflow 64 bits, so no numpy ints here.
MachineIndex = int


@dataclass(frozen=True)
class SpaceSpec:
    """An (n, m) machine space: n working states over m tape symbols."""

    n_states: int
    n_symbols: int

    def __post_init__(self) -> None:
        if self.n_states < 1:
            raise ValueError(f"n_states must be >= 1, got {self.n_states}")
        if not 2 <= self.n_symbols <= 9:
            raise ValueError(f"n_symbols must be in [2, 9], got {self.n_symbols}")

    @property
    def n_entries(self) -> int:
        return self.n_states * self.n_symbols

    @property
    def actions_per_entry(self) -> int:
        """m halting writes plus m * {L,R} * n stepping actions."""
        return self.n_symbols * (2 * self.n_states + 1)

    @property
    def reduced_initial_actions(self) -> int:
        """Actions allowed in the (1, blank) entry of the reduced space."""
        return self.n_symbols * (self.n_states - 1)


def full_count(space: SpaceSpec) -> int:
    """Number of machines in the unrestricted space, exact."""
    return space.actions_per_entry ** space.n_entries


@dataclass(frozen=True)
class Halt:
    """Write ``write`` at the head and halt without moving."""

    write: int


@dataclass(frozen=True)
class Step:
    """Write ``write``, move one cell in ``direction``, enter ``next_state``."""

    write: int
    direction: str  # LEFT or RIGHT
    next_state: int  # 1-based


TransitionAction = Halt | Step


def _check_action(action: TransitionAction, space: SpaceSpec) -> None:
    m, n = space.n_symbols, space.n_states
    if isinstance(action, Halt):
        if not 0 <= action.write < m:
            raise ValueError(f"halt write {action.write} out of range for m={m}")
    elif isinstance(action, Step):
        if not 0 <= action.write < m:
            raise ValueError(f"step write {action.write} out of range for m={m}")
        if action.direction not in (LEFT, RIGHT):
            raise ValueError(f"bad direction {action.direction!r}")
        if not 1 <= action.next_state <= n:
            raise ValueError(f"next_state {action.next_state} out of range for n={n}")
    else:
        raise TypeError(f"not a transition action: {action!r}")


@dataclass(frozen=True)
class TransitionTable:
    """A fully populated transition table over ``space``.

    ``entries`` is row-major: the action for (state, symbol) sits at index
    ``(state - 1) * n_symbols + symbol``.
    """

    space: SpaceSpec
    entries: tuple[TransitionAction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.space.n_entries:
            raise ValueError(
                f"expected {self.space.n_entries} entries, got {len(self.entries)}"
            )
        for action in self.entries:
            _check_action(action, self.space)

    def action(self, state: int, symbol: int) -> TransitionAction:
        if not 1 <= state <= self.space.n_states:
            raise ValueError(f"state {state} out of range")
        if not 0 <= symbol < self.space.n_symbols:
            raise ValueError(f"symbol {symbol} out of range")
        return self.entries[(state - 1) * self.space.n_symbols + symbol]

    def items(self):
        m = self.space.n_symbols
        for i, action in enumerate(self.entries):
            yield (i // m + 1, i % m), action


def mirror(table: TransitionTable) -> TransitionTable:
    """Flip every Step direction (L <-> R).

    The mirrored machine halts iff the original halts, in the same number of
    steps, with the character-reversed output.
    """
    flipped = tuple(
        Step(a.write, LEFT if a.direction == RIGHT else RIGHT, a.next_state)
        if isinstance(a, Step)
        else a
        for a in table.entries
    )
    return TransitionTable(table.space, flipped)


# -- integer <-> action digit maps -----------------------------------------


def _action_to_digit(action: TransitionAction, space: SpaceSpec) -> int:
    n = space.n_states
    if isinstance(action, Halt):
        return action.write
    dir_bit = 0 if action.direction == LEFT else 1
    return space.n_symbols + action.write * 2 * n + dir_bit * n + (action.next_state - 1)


def _digit_to_action(digit: int, space: SpaceSpec) -> TransitionAction:
    m, n = space.n_symbols, space.n_states
    if not 0 <= digit < space.actions_per_entry:
        raise ValueError(f"action digit {digit} out of range")
    if digit < m:
        return Halt(digit)
    b = digit - m
    write, r = divmod(b, 2 * n)
    direction = LEFT if r < n else RIGHT
    return Step(write, direction, r % n + 1)


def _reduced_digit_to_action(digit: int, space: SpaceSpec) -> Step:
    n = space.n_states
    if not 0 <= digit < space.reduced_initial_actions:
        raise ValueError(f"reduced action digit {digit} out of range")
    write, rem = divmod(digit, n - 1)
    return Step(write, RIGHT, rem + 2)


def _action_to_reduced_digit(action: TransitionAction, space: SpaceSpec) -> int:
    if (
        not isinstance(action, Step)
        or action.direction != RIGHT
        or action.next_state < 2
    ):
        raise ValueError(
            "initial entry of a reduced-space machine must step right into a "
            f"non-initial state, got {action!r}"
        )
    return action.write * (space.n_states - 1) + (action.next_state - 2)


def _radices(space: SpaceSpec, reduced: bool) -> list[int]:
    first = space.reduced_initial_actions if reduced else space.actions_per_entry
    return [first] + [space.actions_per_entry] * (space.n_entries - 1)


def decode(index: MachineIndex, space: SpaceSpec, reduced: bool = False) -> TransitionTable:
    """Mixed-radix decode of ``index`` into a transition table."""
    if reduced and space.n_states < 2:
        raise ValueError("reduced space requires n_states >= 2")
    limit = (
        space.reduced_initial_actions * space.actions_per_entry ** (space.n_entries - 1)
        if reduced
        else full_count(space)
    )
    if not 0 <= index < limit:
        raise ValueError(f"index {index} out of range [0, {limit})")
    digits = []
    for radix in reversed(_radices(space, reduced)):
        index, digit = divmod(index, radix)
        digits.append(digit)
    digits.reverse()
    entries = [_reduced_digit_to_action(digits[0], space) if reduced else _digit_to_action(digits[0], space)]
    entries += [_digit_to_action(d, space) for d in digits[1:]]
    return TransitionTable(space, tuple(entries))


def encode(table: TransitionTable, reduced: bool = False) -> MachineIndex:
    """Inverse of :func:`decode`; raises if the table is not in the flavor."""
    space = table.space
    if reduced and space.n_states < 2:
        raise ValueError("reduced space requires n_states >= 2")
    digits = [
        _action_to_reduced_digit(table.entries[0], space)
        if reduced
        else _action_to_digit(table.entries[0], space)
    ]
    digits += [_action_to_digit(a, space) for a in table.entries[1:]]
    index = 0
    for digit, radix in zip(digits, _radices(space, reduced)):
        index = index * radix + digit
    return index


# -- simulation --------------------------------------------------------------


@dataclass(frozen=True)
class Halted:
    """Halting run: tape contents over the visited region, and step count."""

    output: str
    steps: int


@dataclass(frozen=True)
class TimedOut:
    """The machine did not halt within the cutoff."""


RunOutcome = Halted | TimedOut


def run(machine: TransitionTable, cutoff: int) -> RunOutcome:
    """Simulate ``machine`` from state 1 on a blank two-way tape.

    Every applied transition counts as one step, including the final halting
    write.  On halt the output is the contiguous tape block between the
    leftmost and rightmost cells the head ever occupied (blanks included).
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    tape: dict[int, int] = {}
    head = 0
    state = 1
    lo = hi = 0
    for step in range(1, cutoff + 1):
        action = machine.action(state, tape.get(head, 0))
        tape[head] = action.write
        if isinstance(action, Halt):
            cells = (tape.get(i, 0) for i in range(lo, hi + 1))
            return Halted("".join(map(str, cells)), step)
        head += 1 if action.direction == RIGHT else -1
        if head < lo:
            lo = head
        elif head > hi:
            hi = head
        state = action.next_state
    return TimedOut()
