"""Algorithmic-probability measures built from a counts table.

``m_k(s)`` weights each halting computation of an ``n``-state machine by
``2**-encoding_length(n)``, the probability of drawing its program by coin
flips. ``D(k)(s)`` instead normalises the ``(k,2)`` output counts by the
number of detected halting computations. Both are kept exact; only the
final ``-log2`` that turns them into complexity estimates is floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ._backend import get_kernel
from .codec import encoding_length
from .counts import CountsTable
from .dyadic import DyadicRational
from .explorer import CHUNK_SIZE, split_range
from .machines import machine_count
from .simulate import runtime_bound

Value = Union[DyadicRational, Fraction]

EXACT = "exact"
LOWER = "lower-approximation"
SAMPLED = "sampled-estimate"


class MeasureError(ValueError):
    pass


@dataclass
class Distribution:
    kind: str
    k: int
    entries: dict[str, Value]
    exactness: str
    provenance: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, s: str) -> Value:
        return self.entries[s]

    def __contains__(self, s: object) -> bool:
        return s in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, s: str) -> Optional[Value]:
        return self.entries.get(s)

    def total(self) -> Value:
        if self.entries and all(isinstance(v, DyadicRational) for v in self.entries.values()):
            return sum(self.entries.values(), DyadicRational(0))
        return sum((_as_fraction(v) for v in self.entries.values()), Fraction(0))

    def ranked(self) -> list[tuple[str, Value]]:
        """Entries by decreasing value, ties broken by length then lexicographically."""
        return sorted(self.entries.items(), key=lambda kv: (-_as_fraction(kv[1]), len(kv[0]), kv[0]))


def _as_fraction(v: Value) -> Fraction:
    return v.as_fraction() if isinstance(v, DyadicRational) else Fraction(v)


def neg_log2(v: Value) -> float:
    if isinstance(v, DyadicRational):
        return v.neg_log2()
    v = Fraction(v)
    if v <= 0:
        raise ValueError("log of a non-positive value")
    return math.log2(v.denominator) - math.log2(v.numerator)


def _provenance(t: CountsTable) -> dict[str, str]:
    return dict(t.plan.meta()) | {"tool_version": t.tool_version}


def _exactness(t: CountsTable, ns) -> str:
    plan = t.plan
    if any(plan.mode(n) == "sample" for n in ns):
        return SAMPLED
    return EXACT if all(plan.is_exact(n) for n in ns) else LOWER


def compute_mk(t: CountsTable) -> Distribution:
    """``m_k`` for ``k = t.max_states``.

    Sampled spaces are scaled by ``machine_count(n) / examined`` and give
    :class:`~fractions.Fraction` entries; fully enumerated tables give exact
    :class:`DyadicRational` entries.
    """
    k = t.max_states
    ns = range(1, k + 1)
    exactness = _exactness(t, ns)
    if exactness == SAMPLED:
        acc: dict[str, Fraction] = {}
        for (n, blank, s), c in t.rows.items():
            ex = t.examined[(n, blank)]
            if ex == 0:
                raise MeasureError(f"rows for n={n} blank={blank} but nothing examined")
            scale = Fraction(machine_count(n), ex) if t.plan.mode(n) == "sample" else 1
            acc[s] = acc.get(s, Fraction(0)) + Fraction(c, 1 << encoding_length(n)) * scale
        return Distribution("mk", k, dict(acc), exactness, _provenance(t))

    per_string: dict[str, dict[int, int]] = {}
    for (n, _, s), c in t.rows.items():
        by_n = per_string.setdefault(s, {})
        by_n[n] = by_n.get(n, 0) + c
    lengths = {n: encoding_length(n) for n in ns}
    top = lengths[k]
    entries = {}
    for s, by_n in per_string.items():
        num = sum(c << (top - lengths[n]) for n, c in by_n.items())
        entries[s] = DyadicRational(num, top)
    return Distribution("mk", k, entries, exactness, _provenance(t))


def compute_dk(t: CountsTable) -> Distribution:
    """``D(k)`` over the ``(k,2)`` space alone, both blanks."""
    k = t.max_states
    total = t.halted[(k, 0)] + t.halted[(k, 1)]
    if total == 0:
        raise MeasureError(f"no halting computations detected in ({k},2)")
    acc: dict[str, int] = {}
    for (n, _, s), c in t.rows.items():
        if n == k:
            acc[s] = acc.get(s, 0) + c
    entries = {s: Fraction(c, total) for s, c in acc.items()}
    return Distribution("dk", k, entries, _exactness(t, [k]), _provenance(t))


def complexity(d: Distribution, s: str) -> Optional[float]:
    """Coding-theorem estimate ``-log2 d(s)``; ``None`` when ``s`` was never produced."""
    v = d.get(s)
    if v is None:
        return None
    return neg_log2(v)


@dataclass
class RankComparison:
    spearman_rho: float
    n_common: int
    # (string, rank in a, rank in b, K in a, K in b), ordered by rank in a
    table: list[tuple[str, float, float, float, float]]


def average_ranks(values: list[Fraction]) -> list[Fraction]:
    """1-based ranks by decreasing value; tied values share their mean rank."""
    order = sorted(range(len(values)), key=lambda i: -values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean = Fraction(i + j + 2, 2)
        for p in range(i, j + 1):
            ranks[order[p]] = mean
        i = j + 1
    return ranks


def rank_compare(a: Distribution, b: Distribution, min_common: int = 3) -> RankComparison:
    """Spearman correlation between the two rankings over their common strings."""
    common = sorted(set(a.entries) & set(b.entries), key=lambda s: (len(s), s))
    if len(common) < min_common:
        raise MeasureError(f"only {len(common)} strings in common; need {min_common}")
    va = [_as_fraction(a[s]) for s in common]
    vb = [_as_fraction(b[s]) for s in common]
    ra, rb = average_ranks(va), average_ranks(vb)
    m = len(common)
    mean = Fraction(m + 1, 2)
    cov = sum((x - mean) * (y - mean) for x, y in zip(ra, rb))
    var_a = sum((x - mean) ** 2 for x in ra)
    var_b = sum((y - mean) ** 2 for y in rb)
    if var_a == 0 or var_b == 0:
        raise MeasureError("a ranking is constant; correlation undefined")
    if var_a == var_b:
        rho = float(cov / var_a)
    else:
        rho = float(cov) / math.sqrt(float(var_a) * float(var_b))
    rows = [
        (s, float(x), float(y), neg_log2(a[s]), neg_log2(b[s]))
        for s, x, y in zip(common, ra, rb)
    ]
    rows.sort(key=lambda r: (r[1], len(r[0]), r[0]))
    return RankComparison(rho, m, rows)


def min_k_positive(s: str, max_len: int = 4, kernel: str = "auto") -> int:
    """Smallest ``n`` such that some machine in ``(n,2)`` outputs ``s``.

    Each space is scanned up to the runtime bound for ``|s|``, which no
    halting producer of ``s`` can exceed. The straight-line writer with
    ``|s|`` states always exists, so ``(|s|,2)`` itself is never scanned.
    """
    if not s or s.strip("01"):
        raise ValueError("s must be a non-empty binary string")
    if len(s) > max_len:
        raise MeasureError(f"|s| = {len(s)} exceeds the feasibility limit {max_len}")
    kern = get_kernel(kernel)
    for n in range(1, len(s)):
        bound = runtime_bound(len(s), n)
        count = machine_count(n)
        for r in split_range(0, count, max(1, -(-count // CHUNK_SIZE))):
            counts, _, _ = kern.scan_range(n, r.start, r.stop, bound, (0, 1), True)
            if (0, s) in counts or (1, s) in counts:
                return n
    return len(s)


def measure_gap(d_j: Distribution, d_k: Distribution) -> DyadicRational:
    """``sum_s (m_j(s) - m_k(s))`` for enumerated ``j >= k``, exactly."""
    for d in (d_j, d_k):
        if d.kind != "mk" or d.exactness == SAMPLED:
            raise MeasureError("gap needs m_k distributions from fully enumerated tables")
    if d_j.k < d_k.k:
        raise MeasureError("first distribution must have at least as many states")
    gap = DyadicRational(0)
    for s, v in d_j.entries.items():
        gap = gap + (v - d_k.entries.get(s, DyadicRational(0)))
    return gap


def delta_bound_check(d_j: Distribution, d_k: Distribution) -> bool:
    """Whether the total gap between ``m_j`` and ``m_k`` respects the ``2**-k`` convergence bound."""
    return measure_gap(d_j, d_k) <= DyadicRational(1, d_k.k)
