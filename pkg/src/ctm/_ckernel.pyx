# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled simulation kernel. Mirrors ``_pykernel`` exactly."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset, memcpy

NAME = "cython"

cdef enum:
    ZERO = 48
    INITIAL_TAPE = 4096


cdef struct Tape:
    unsigned char *cells
    Py_ssize_t size
    unsigned char fill


cdef int _tape_init(Tape *tape, int blank, long long max_steps) except -1:
    cdef long long size = 2 * max_steps + 3
    if size > INITIAL_TAPE:
        size = INITIAL_TAPE
    tape.cells = <unsigned char *>malloc(size)
    if tape.cells == NULL:
        raise MemoryError()
    tape.size = size
    tape.fill = ZERO + blank
    memset(tape.cells, tape.fill, size)
    return 0


cdef Py_ssize_t _tape_grow(Tape *tape) except -1:
    """Double the buffer, keeping the old cells centred. Returns the shift."""
    cdef Py_ssize_t new_size = 2 * tape.size
    cdef Py_ssize_t shift = tape.size // 2
    cdef unsigned char *cells = <unsigned char *>malloc(new_size)
    if cells == NULL:
        raise MemoryError()
    memset(cells, tape.fill, new_size)
    memcpy(cells + shift, tape.cells, tape.size)
    free(tape.cells)
    tape.cells = cells
    tape.size = new_size
    return shift


cdef object _simulate(const int *nrow, const unsigned char *wr, const int *mv,
                      Tape *tape, long long max_steps, long long *steps_out):
    """Run one machine on a clean tape; returns the output or None, then cleans the tape."""
    cdef Py_ssize_t pos = tape.size // 2
    cdef Py_ssize_t lo = pos, hi = pos, shift
    cdef int row = 0, i
    cdef long long steps = 0
    cdef object out = None
    cdef unsigned char *cells = tape.cells
    while steps < max_steps:
        i = row + cells[pos] - ZERO
        steps += 1
        cells[pos] = wr[i]
        row = nrow[i]
        if row < 0:
            out = (<char *>cells)[lo:hi + 1].decode("ascii")
            break
        pos += mv[i]
        if pos < lo:
            lo = pos
            if pos == 0:
                shift = _tape_grow(tape)
                cells = tape.cells
                pos += shift
                lo += shift
                hi += shift
        elif pos > hi:
            hi = pos
            if pos == tape.size - 1:
                shift = _tape_grow(tape)
                cells = tape.cells
                pos += shift
                lo += shift
                hi += shift
    memset(cells + lo, tape.fill, hi - lo + 1)
    steps_out[0] = steps
    return out


cdef class _Tables:
    cdef int rows[512]
    cdef unsigned char writes[512]
    cdef int moves[512]

    def __cinit__(self, int n):
        cdef int e
        if 4 * n + 2 > 512:
            raise ValueError("too many states for the compiled kernel")
        self.rows[0] = -1
        self.rows[1] = -1
        self.writes[0] = ZERO
        self.writes[1] = ZERO + 1
        self.moves[0] = 0
        self.moves[1] = 0
        for e in range(4 * n):
            self.rows[2 + e] = 2 * (e // 4)
            self.writes[2 + e] = ZERO + ((e >> 1) & 1)
            self.moves[2 + e] = 1 if e & 1 else -1


def run(int n, digits, int blank, long long max_steps):
    """Simulate one machine given its instruction indices; returns ``(steps, output)``."""
    cdef _Tables tab = _Tables(n)
    cdef int width = 2 * n, k, d
    cdef int nrow[256]
    cdef unsigned char wr[256]
    cdef int mv[256]
    cdef Tape tape
    cdef long long steps = 0
    if width > 256:
        raise ValueError("too many states for the compiled kernel")
    if len(digits) != width:
        raise ValueError(f"expected {width} instruction indices, got {len(digits)}")
    if blank not in (0, 1) or max_steps < 1:
        raise ValueError("blank must be 0 or 1 and max_steps >= 1")
    for k in range(width):
        d = digits[k]
        if not 0 <= d < 4 * n + 2:
            raise ValueError(f"instruction index {d} out of range")
        nrow[k] = tab.rows[d]
        wr[k] = tab.writes[d]
        mv[k] = tab.moves[d]
    _tape_init(&tape, blank, max_steps)
    try:
        out = _simulate(nrow, wr, mv, &tape, max_steps, &steps)
    finally:
        free(tape.cells)
    return steps, out


cdef tuple _scan(int n, object indices, unsigned long long lo, unsigned long long hi,
                 long long max_steps, tuple blanks, bint prefilter):
    cdef _Tables tab = _Tables(n)
    cdef int width = 2 * n, base = 4 * n + 2
    cdef int digits[256]
    cdef int nrow[256]
    cdef unsigned char wr[256]
    cdef int mv[256]
    cdef Tape tapes[2]
    cdef int pos, d, k, b, nb = len(blanks)
    cdef int blank_list[2]
    cdef unsigned long long t, x
    cdef long long steps = 0
    cdef bint no_halt
    cdef long long examined0 = 0, examined1 = 0, halted0 = 0, halted1 = 0
    cdef dict counts = {}
    if width > 256:
        raise ValueError("too many states for the compiled kernel")
    if nb > 2 or max_steps < 1:
        raise ValueError("at most two blanks and max_steps >= 1")
    for k in range(nb):
        blank_list[k] = blanks[k]

    tapes[0].cells = NULL
    tapes[1].cells = NULL
    it = iter(indices) if indices is not None else None
    try:
        _tape_init(&tapes[0], 0, max_steps)
        _tape_init(&tapes[1], 1, max_steps)
        if it is None:
            x = lo
            for pos in range(width - 1, -1, -1):
                digits[pos] = x % base
                x //= base
        t = lo
        while True:
            if it is None:
                if t >= hi:
                    break
            else:
                nxt = next(it, None)
                if nxt is None:
                    break
                x = nxt
                for pos in range(width - 1, -1, -1):
                    digits[pos] = x % base
                    x //= base
            no_halt = True
            for k in range(width):
                d = digits[k]
                nrow[k] = tab.rows[d]
                wr[k] = tab.writes[d]
                mv[k] = tab.moves[d]
                if d < 2:
                    no_halt = False
            for k in range(nb):
                b = blank_list[k]
                if b == 0:
                    examined0 += 1
                else:
                    examined1 += 1
                if prefilter and (no_halt or nrow[b] == 0):
                    continue
                out = _simulate(nrow, wr, mv, &tapes[b], max_steps, &steps)
                if out is not None:
                    if b == 0:
                        halted0 += 1
                    else:
                        halted1 += 1
                    key = (b, out)
                    counts[key] = counts.get(key, 0) + 1
            if it is None:
                t += 1
                pos = width - 1
                while pos >= 0:
                    digits[pos] += 1
                    if digits[pos] < base:
                        break
                    digits[pos] = 0
                    pos -= 1
    finally:
        free(tapes[0].cells)
        free(tapes[1].cells)
    return counts, [examined0, examined1], [halted0, halted1]


def scan_range(int n, lo, hi, long long max_steps, blanks=(0, 1), bint prefilter=True):
    """Simulate machines ``lo <= t < hi`` of ``(n,2)``; see ``_pykernel.scan_range``."""
    return _scan(n, None, lo, hi, max_steps, tuple(blanks), prefilter)


def scan_indices(int n, indices, long long max_steps, blanks=(0, 1), bint prefilter=True):
    """As :func:`scan_range` for an explicit sequence of indices (repeats allowed)."""
    return _scan(n, indices, 0, 0, max_steps, tuple(blanks), prefilter)
