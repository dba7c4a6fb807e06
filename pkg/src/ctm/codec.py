"""Prefix-free binary encoding of programs ``<n, blank, index>``.

An encoding is ``1^(n-1) 0``, then the blank bit, then the machine index in
big-endian binary padded to ``ceil(log2((4n+2)**(2n)))`` bits. Any bit
stream containing a ``0`` decodes to a program, so programs can be drawn by
flipping coins.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .machines import machine_count


@dataclass(frozen=True)
class Program:
    states: int
    blank: int
    index: int

    def __post_init__(self) -> None:
        if self.states < 1:
            raise ValueError("states must be >= 1")
        if self.blank not in (0, 1):
            raise ValueError("blank must be 0 or 1")
        if not 0 <= self.index < machine_count(self.states):
            raise ValueError(f"index {self.index} out of range for n={self.states}")


@dataclass(frozen=True)
class TrivialNonHalting:
    """A well-formed code whose index overflows the machine range; never halts."""

    states: int
    blank: int
    raw_index: int


@dataclass(frozen=True)
class Incomplete:
    """The stream ended early. ``needed`` is ``None`` while still inside the unary header."""

    needed: Optional[int]


Decoded = Union[Program, TrivialNonHalting]


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive integer")
    return (x - 1).bit_length()


def index_width(n: int) -> int:
    return ceil_log2(machine_count(n))


def encoding_length(n: int) -> int:
    return n + 1 + index_width(n)


def encode_program(p: Program) -> str:
    width = index_width(p.states)
    return "1" * (p.states - 1) + "0" + str(p.blank) + format(p.index, f"0{width}b")


def _check_bits(bits: str) -> None:
    if bits.strip("01"):
        raise ValueError("bit strings may only contain '0' and '1'")


def _decode_at(bits: str, pos: int) -> tuple[Decoded | Incomplete, int]:
    zero = bits.find("0", pos)
    if zero < 0:
        return Incomplete(None), len(bits)
    n = zero - pos + 1
    width = index_width(n)
    end = zero + 2 + width
    if end > len(bits):
        return Incomplete(end - len(bits)), len(bits)
    blank = int(bits[zero + 1])
    t = int(bits[zero + 2 : end], 2) if width else 0
    if t >= machine_count(n):
        return TrivialNonHalting(n, blank, t), end
    return Program(n, blank, t), end


def decode_program(bits: str) -> Decoded | Incomplete:
    """Decode the program at the start of ``bits``; trailing bits are ignored."""
    _check_bits(bits)
    return _decode_at(bits, 0)[0]


def decode_stream(bits: str) -> tuple[list[Decoded], Optional[Incomplete]]:
    """Split a concatenation of codes; returns the programs and any truncated remainder."""
    _check_bits(bits)
    out: list[Decoded] = []
    pos = 0
    while pos < len(bits):
        item, pos = _decode_at(bits, pos)
        if isinstance(item, Incomplete):
            return out, item
        out.append(item)
    return out, None


def coin_flip_programs(count: int, seed: int) -> Iterator[Decoded]:
    """Decode ``count`` programs from a seeded stream of fair coin flips."""
    rng = random.Random(seed)
    for _ in range(count):
        n = 1
        while rng.getrandbits(1):
            n += 1
        blank = rng.getrandbits(1)
        t = rng.getrandbits(index_width(n))
        if t >= machine_count(n):
            yield TrivialNonHalting(n, blank, t)
        else:
            yield Program(n, blank, t)
