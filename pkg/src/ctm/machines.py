"""Two-symbol Turing machines in the Busy Beaver formalism and their enumeration.

A machine with ``n`` states has ``2n`` transition entries ``(state, read)``
stored in the order ``(1,0), (1,1), (2,0), ..., (n,1)``. Each entry holds one
of ``4n + 2`` instructions, so the space ``(n,2)`` has ``(4n+2)**(2n)``
machines. Machine indices read the entries as a base-``(4n+2)`` numeral with
entry ``(1,0)`` as the most significant digit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

HALT = 0
LEFT = -1
RIGHT = 1


class Instruction(NamedTuple):
    next_state: int
    write: int
    move: int

    def validate(self, n: int) -> None:
        if self.write not in (0, 1):
            raise ValueError(f"write symbol must be 0 or 1, got {self.write}")
        if not 0 <= self.next_state <= n:
            raise ValueError(f"next state {self.next_state} outside 0..{n}")
        if self.next_state == HALT:
            if self.move != 0:
                raise ValueError("halting instructions must not move the head")
        elif self.move not in (LEFT, RIGHT):
            raise ValueError(f"non-halting move must be -1 or +1, got {self.move}")

    def __str__(self) -> str:
        if self.next_state == HALT:
            return f"{self.write}-H"
        return f"{self.write}{'L' if self.move < 0 else 'R'}{self.next_state}"


@dataclass(frozen=True)
class Machine:
    """An ``n``-state transition table; ``transitions[2*(s-1) + k]`` is entry ``(s, k)``."""

    states: int
    transitions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if self.states < 1:
            raise ValueError("a machine needs at least one state")
        if len(self.transitions) != 2 * self.states:
            raise ValueError(
                f"expected {2 * self.states} transitions, got {len(self.transitions)}"
            )
        object.__setattr__(
            self, "transitions", tuple(Instruction(*t) for t in self.transitions)
        )
        for instr in self.transitions:
            instr.validate(self.states)

    def entry(self, state: int, read: int) -> Instruction:
        return self.transitions[2 * (state - 1) + read]

    def digits(self) -> list[int]:
        """Instruction indices of every entry, most significant first."""
        return [instruction_index(t, self.states) for t in self.transitions]

    def __str__(self) -> str:
        rows = []
        for s in range(1, self.states + 1):
            rows.append(f"{self.entry(s, 0)},{self.entry(s, 1)}")
        return "_".join(rows)


@dataclass(frozen=True)
class MachineIndex:
    states: int
    index: int

    def __post_init__(self) -> None:
        if self.states < 1:
            raise ValueError("a machine needs at least one state")
        if not 0 <= self.index < machine_count(self.states):
            raise ValueError(
                f"index {self.index} outside 0..{machine_count(self.states) - 1}"
            )


def machine_count(n: int) -> int:
    """Number of machines in ``(n,2)``: ``(4n+2)**(2n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (4 * n + 2) ** (2 * n)


def instruction_index(instr: Instruction, n: int) -> int:
    """Position of ``instr`` among the ``4n+2`` instructions of ``(n,2)``.

    Halting instructions come first (``write``), then
    ``2 + 4*(next-1) + 2*write + (move+1)//2``.
    """
    instr = Instruction(*instr)
    instr.validate(n)
    if instr.next_state == HALT:
        return instr.write
    return 2 + 4 * (instr.next_state - 1) + 2 * instr.write + (instr.move + 1) // 2


def instruction_from_index(digit: int, n: int) -> Instruction:
    if not 0 <= digit < 4 * n + 2:
        raise ValueError(f"instruction index {digit} outside 0..{4 * n + 1}")
    if digit < 2:
        return Instruction(HALT, digit, 0)
    e = digit - 2
    return Instruction(e // 4 + 1, (e >> 1) & 1, RIGHT if e & 1 else LEFT)


def index_to_digits(n: int, index: int) -> list[int]:
    base = 4 * n + 2
    digits = [0] * (2 * n)
    for pos in range(2 * n - 1, -1, -1):
        index, digits[pos] = divmod(index, base)
    return digits


def digits_to_index(n: int, digits: Sequence[int]) -> int:
    base = 4 * n + 2
    index = 0
    for d in digits:
        index = index * base + d
    return index


def unrank(mi: MachineIndex | tuple[int, int]) -> Machine:
    if not isinstance(mi, MachineIndex):
        mi = MachineIndex(*mi)
    n = mi.states
    return Machine(
        n, tuple(instruction_from_index(d, n) for d in index_to_digits(n, mi.index))
    )


def rank(m: Machine) -> MachineIndex:
    return MachineIndex(m.states, digits_to_index(m.states, m.digits()))


def iter_machines(n: int, start: int = 0, stop: int | None = None) -> Iterator[Machine]:
    stop = machine_count(n) if stop is None else stop
    for t in range(start, stop):
        yield unrank(MachineIndex(n, t))


def complement_machine(m: Machine) -> Machine:
    """Swap the roles of the two symbols.

    Running the result on blank ``1 - i`` produces the bitwise complement of
    what ``m`` produces on blank ``i``, in the same number of steps.
    """
    out = []
    for s in range(1, m.states + 1):
        for k in (0, 1):
            t = m.entry(s, 1 - k)
            out.append(Instruction(t.next_state, 1 - t.write, t.move))
    return Machine(m.states, tuple(out))


def mirror_machine(m: Machine) -> Machine:
    """Negate every head movement; the output is reversed."""
    return Machine(
        m.states, tuple(Instruction(t.next_state, t.write, -t.move) for t in m.transitions)
    )
