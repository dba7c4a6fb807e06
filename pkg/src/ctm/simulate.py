"""Bounded execution of machines on a blank two-way tape."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

from ._backend import kernel
from .machines import HALT, Machine


@dataclass(frozen=True)
class SimConfig:
    blank: int = 0
    max_steps: int = 1000

    def __post_init__(self) -> None:
        if self.blank not in (0, 1):
            raise ValueError("blank must be 0 or 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class Halted:
    output: str
    steps: int


@dataclass(frozen=True)
class Exhausted:
    steps: int


@dataclass(frozen=True)
class ProvedNonHalting:
    reason: Literal["initial-self-loop", "no-halt-transition"]


SimOutcome = Union[Halted, Exhausted, ProvedNonHalting]


def simulate(m: Machine, cfg: SimConfig = SimConfig()) -> Halted | Exhausted:
    """Run ``m`` from state 1 on a tape filled with ``cfg.blank``.

    The halting transition counts as a step and writes without moving. The
    output is the window of every cell the head occupied, read left to
    right, so it is never empty.
    """
    steps, out = kernel.run(m.states, m.digits(), cfg.blank, cfg.max_steps)
    if out is None:
        return Exhausted(steps)
    return Halted(out, steps)


def classify(m: Machine, cfg: SimConfig = SimConfig()) -> SimOutcome:
    """Like :func:`simulate`, but report syntactically non-halting machines without running them."""
    if has_no_halt_transition(m):
        return ProvedNonHalting("no-halt-transition")
    if is_initial_self_loop(m, cfg.blank):
        return ProvedNonHalting("initial-self-loop")
    return simulate(m, cfg)


def runtime_bound(output_len: int, k: int) -> int:
    """Most steps a ``k``-state machine can take and still halt with an output of this length."""
    if output_len < 1 or k < 1:
        raise ValueError("output_len and k must be >= 1")
    return (1 << output_len) * output_len * k


def is_initial_self_loop(m: Machine, blank: int) -> bool:
    # The head steps onto a fresh blank cell in state 1 again, forever.
    return m.entry(1, blank).next_state == 1


def has_no_halt_transition(m: Machine) -> bool:
    return all(t.next_state != HALT for t in m.transitions)
