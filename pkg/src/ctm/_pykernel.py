"""Pure-Python simulation kernel.

Same interface and results as the compiled ``_ckernel``; used when the
extension is not built or when ``CTM_PURE_PYTHON`` is set.

Tape cells hold ASCII ``'0'``/``'1'`` so the visited window decodes straight
to the output string. Transitions are flattened per entry ``2*(s-1) + k``
into three lists: the row offset of the next state (``-1`` for halt), the
ASCII symbol to write, and the head move.
"""
from __future__ import annotations

NAME = "python"

_ZERO = 48
_INITIAL_TAPE = 64


def _instruction_tables(n: int) -> tuple[list[int], list[int], list[int]]:
    rows, writes, moves = [-1, -1], [_ZERO, _ZERO + 1], [0, 0]
    for e in range(4 * n):
        rows.append(2 * (e // 4))
        writes.append(_ZERO + ((e >> 1) & 1))
        moves.append(1 if e & 1 else -1)
    return rows, writes, moves


def _simulate(nrow, wr, mv, blank, max_steps):
    fill = _ZERO + blank
    size = min(2 * max_steps + 3, _INITIAL_TAPE)
    tape = bytearray([fill]) * size
    pos = lo = hi = size // 2
    row = 0
    steps = 0
    while steps < max_steps:
        i = row + tape[pos] - _ZERO
        steps += 1
        tape[pos] = wr[i]
        row = nrow[i]
        if row < 0:
            return steps, tape[lo : hi + 1].decode("ascii")
        pos += mv[i]
        if pos < lo:
            lo = pos
            if pos == 0:
                grow = len(tape)
                tape[0:0] = bytearray([fill]) * grow
                pos += grow
                lo += grow
                hi += grow
        elif pos > hi:
            hi = pos
            if pos == len(tape) - 1:
                tape.extend(bytearray([fill]) * len(tape))
    return steps, None


def run(n: int, digits, blank: int, max_steps: int):
    """Simulate one machine given its instruction indices.

    Returns ``(steps, output)``; ``output`` is ``None`` when the step budget
    ran out.
    """
    if len(digits) != 2 * n:
        raise ValueError(f"expected {2 * n} instruction indices, got {len(digits)}")
    if blank not in (0, 1) or max_steps < 1:
        raise ValueError("blank must be 0 or 1 and max_steps >= 1")
    if any(not 0 <= d < 4 * n + 2 for d in digits):
        raise ValueError("instruction index out of range")
    rows, writes, moves = _instruction_tables(n)
    nrow = [rows[d] for d in digits]
    wr = [writes[d] for d in digits]
    mv = [moves[d] for d in digits]
    return _simulate(nrow, wr, mv, blank, max_steps)


def _scan(n, digit_iter, max_steps, blanks, prefilter):
    rows_t, writes_t, moves_t = _instruction_tables(n)
    counts: dict[tuple[int, str], int] = {}
    examined = [0, 0]
    halted = [0, 0]
    for digits in digit_iter:
        nrow = [rows_t[d] for d in digits]
        wr = [writes_t[d] for d in digits]
        mv = [moves_t[d] for d in digits]
        no_halt = prefilter and min(digits) >= 2
        for b in blanks:
            examined[b] += 1
            if prefilter and (no_halt or nrow[b] == 0):
                continue
            _, out = _simulate(nrow, wr, mv, b, max_steps)
            if out is not None:
                halted[b] += 1
                key = (b, out)
                counts[key] = counts.get(key, 0) + 1
    return counts, examined, halted


def _odometer(n: int, lo: int, hi: int):
    base = 4 * n + 2
    width = 2 * n
    digits = [0] * width
    x = lo
    for pos in range(width - 1, -1, -1):
        x, digits[pos] = divmod(x, base)
    for _ in range(lo, hi):
        yield digits
        pos = width - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < base:
                break
            digits[pos] = 0
            pos -= 1


def _decode_each(n: int, indices):
    base = 4 * n + 2
    width = 2 * n
    digits = [0] * width
    for t in indices:
        x = int(t)
        for pos in range(width - 1, -1, -1):
            x, digits[pos] = divmod(x, base)
        yield digits


def scan_range(n: int, lo: int, hi: int, max_steps: int, blanks=(0, 1), prefilter=True):
    """Simulate machines ``lo <= t < hi`` of ``(n,2)`` on each blank in ``blanks``.

    Returns ``(counts, examined, halted)`` where ``counts`` maps
    ``(blank, output)`` to the number of halting computations and the other
    two are per-blank totals.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    return _scan(n, _odometer(n, lo, hi), max_steps, tuple(blanks), prefilter)


def scan_indices(n: int, indices, max_steps: int, blanks=(0, 1), prefilter=True):
    """As :func:`scan_range` for an explicit sequence of indices (repeats allowed)."""
    return _scan(n, _decode_each(n, indices), max_steps, tuple(blanks), prefilter)
