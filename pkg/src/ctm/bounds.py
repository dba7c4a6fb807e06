"""Closed-form machine counts and error bounds, without simulation.

Terms of the form ``count / 2**encoding_length(n)`` are evaluated as an
exactly-rounded float mantissa of the big-integer count times an exact power
of two, so the ceilings inside the encoding length never go through floating
point. Series are summed in ascending ``n`` with :func:`math.fsum`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

from .codec import encoding_length
from .dyadic import DyadicRational

DEFAULT_CUT = 2000


def _scaled(num: int, exp: int) -> float:
    """``num / 2**exp`` as a float, for arbitrarily large ``num`` and ``exp``."""
    if num == 0:
        return 0.0
    bits = num.bit_length()
    mantissa = num / (1 << bits)
    return math.ldexp(mantissa, bits - exp)


@lru_cache(maxsize=None)
def _powers(n: int) -> tuple[int, int]:
    """``((4n+2)**(2n-1), encoding_length(n))``."""
    return (4 * n + 2) ** (2 * n - 1), encoding_length(n)


def tail_bound(k: int) -> float:
    """Upper bound ``2**-k`` on the total mass ``m`` has beyond ``m_k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.ldexp(1.0, -k)


def zero_producers(n: int) -> int:
    """Machines in ``(n,2)`` that print ``"0"`` on a given blank: the initial entry halts writing 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (4 * n + 2) ** (2 * n - 1)


@dataclass(frozen=True)
class TrivialNonHaltCounts:
    self_loop_both_blanks: int
    no_halt_transition_both_blanks: int


def trivial_nonhalt_counts(n: int) -> TrivialNonHaltCounts:
    """Computations (both blanks) of the two syntactically non-halting families.

    The second family only counts machines whose initial entry leaves state
    1, so the two sets are disjoint.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return TrivialNonHaltCounts(
        8 * (4 * n + 2) ** (2 * n - 1),
        8 * (n - 1) * (4 * n) ** (2 * n - 1),
    )


@lru_cache(maxsize=None)
def m_zero_term(n: int) -> float:
    x, length = _powers(n)
    return _scaled(2 * x, length)


def m_zero_term_exact(n: int) -> DyadicRational:
    x, length = _powers(n)
    return DyadicRational(2 * x, length)


def _closed_tail(cut: int) -> float:
    # sum_{n > cut} 1 / (2**n (4n+2)), an overestimate of the remaining terms
    terms = []
    n = cut + 1
    while True:
        t = math.ldexp(1.0 / (4 * n + 2), -n)
        if t == 0.0 or (terms and t < terms[0] * 1e-18):
            break
        terms.append(t)
        n += 1
    return math.fsum(terms)


def m_zero(cut: int = DEFAULT_CUT) -> float:
    """Total probability of ``"0"`` over every machine space."""
    if cut < 10:
        raise ValueError("cut must be >= 10")
    return math.fsum([m_zero_term(n) for n in range(1, cut + 1)] + [_closed_tail(cut)])


def m_zero_partial(k: int) -> DyadicRational:
    """Exact ``m_k("0")``: the series truncated after ``k`` states."""
    total = DyadicRational(0)
    for n in range(1, k + 1):
        total = total + m_zero_term_exact(n)
    return total


def m_zero_error_at(k: int, cut: int = DEFAULT_CUT) -> float:
    """``m("0") - m_k("0")``, summed directly from the omitted terms."""
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = [m_zero_term(n) for n in range(k + 1, cut + 1)]
    return math.fsum(terms + [_closed_tail(max(k, cut))])


@lru_cache(maxsize=None)
def refined_term(n: int) -> float:
    """Mass of ``(n,2)`` left after removing ``"0"``/``"1"`` producers and trivial non-halters."""
    x, length = _powers(n)
    num = 2 * x * (4 * n + 2) - 12 * x - 8 * (n - 1) * (4 * n) ** (2 * n - 1)
    return _scaled(num, length)


def refined_tail_bound(k: int, cut: int = DEFAULT_CUT) -> float:
    """Upper bound on the error of ``m_k`` for strings other than ``"0"`` and ``"1"``.

    Terms beyond ``cut`` are bounded by ``2**-n`` each, giving ``2**-max(k, cut)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = [refined_term(n) for n in range(k + 1, cut + 1)]
    return math.fsum(terms + [math.ldexp(1.0, -max(k, cut))])


@dataclass(frozen=True)
class BoundReport:
    k: int
    tail_bound: float
    m0_exact_series: float
    m0_at_k: float
    m0_abs_error_at_k: float
    refined_tail_bound: float
    cut_point: int

    def items(self) -> list[tuple[str, object]]:
        return list(asdict(self).items())


def bound_report(k: int, cut: int = DEFAULT_CUT) -> BoundReport:
    return BoundReport(
        k=k,
        tail_bound=tail_bound(k),
        m0_exact_series=m_zero(cut),
        m0_at_k=float(m_zero_partial(k)),
        m0_abs_error_at_k=m_zero_error_at(k, cut),
        refined_tail_bound=refined_tail_bound(k, cut),
        cut_point=cut,
    )
