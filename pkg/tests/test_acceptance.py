"""Acceptance criteria, one test per criterion (criterion 1 has two parts).

Each test records a PASS/FAIL line; the lines are printed together at the
end of the pytest run and also when this file is executed directly.
"""
import math
import time
from contextlib import contextmanager

import pytest

from ctm import codec
from ctm._backend import kernel
from ctm.bounds import m_zero, m_zero_error_at, m_zero_partial, refined_tail_bound, tail_bound, zero_producers
from ctm.counts import ExplorationPlan, dumps_counts, load_checkpoint
from ctm.dyadic import DyadicRational
from ctm.explorer import explore
from ctm.machines import index_to_digits, iter_machines, machine_count, rank
from ctm.measure import compute_dk, compute_mk, measure_gap, rank_compare, neg_log2
from ctm.simulate import runtime_bound

RESULTS: list[str] = []
COMP = str.maketrans("01", "10")


@contextmanager
def criterion(label, text, limit=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS.append(f"criterion {label:<3} FAIL  {text} ({elapsed:.2f}s): {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}")
        raise
    RESULTS.append(f"criterion {label:<3} PASS  {text} ({elapsed:.2f}s)")


def test_c1a_machine_count_literal():
    # The stated n=3 value is checked as written.
    with criterion("1a", "machine_count(1,2,3) == 36, 10000, 2985984"):
        assert [machine_count(n) for n in (1, 2, 3)] == [36, 10000, 2985984]


def test_c1b_enumeration_exhaustive():
    with criterion("1b", "enumerate/unrank give machine_count distinct machines, n <= 2", limit=1.0):
        assert machine_count(1) == 36 and machine_count(2) == 10000
        for n in (1, 2):
            machines = list(iter_machines(n))
            assert len(machines) == machine_count(n) == len(set(machines))
            assert all(rank(m).index == t for t, m in enumerate(machines))


def test_c2_encoding_example():
    with criterion("2", "encode_program(<2,0,185>) bit-exact and decoded back"):
        p = codec.Program(2, 0, 185)
        bits = codec.encode_program(p)
        assert bits == "10000000010111001"
        assert codec.decode_program(bits) == p


def test_c3_zero_producers():
    with criterion("3", "(1,2) and (2,2) blank 0 yield 6 and 1000 '0'-producers", limit=5.0):
        t = explore(ExplorationPlan.build(2, cutoffs={1: 2, 2: 10}, use_blank_symmetry=False))
        assert [t.count(n, 0, "0") for n in (1, 2)] == [6, 1000] == [zero_producers(n) for n in (1, 2)]


def test_c3_slow_tier(full_tables):
    with criterion("3s", "(3,2) blank 0 yields 537824 '0'-producers"):
        assert full_tables[3].count(3, 0, "0") == 537824 == zero_producers(3)


def test_c4_closed_form():
    with criterion("4", "closed-form m('0') values and bounds", limit=60.0):
        assert abs(float(m_zero_partial(5)) - 0.0734475) <= 1e-6
        assert abs(m_zero(2000) - 0.0742024) <= 1e-7
        assert abs(m_zero_error_at(5) - 0.0007549) <= 1e-6
        assert abs(refined_tail_bound(5) - 0.0104282) <= 1e-6
        assert tail_bound(5) == 1 / 32
        assert refined_tail_bound(5) < 1 / 32


def test_c5_complexity_estimate():
    with criterion("5", "K('0') = 3.7671 from m_5 and 3.75239 from the full series"):
        assert abs(-math.log2(0.0734475) - 3.7671) <= 5e-4
        assert abs(neg_log2(m_zero_partial(5)) - 3.7671) <= 5e-4
        assert abs(-math.log2(m_zero(2000)) - 3.75239) <= 5e-4


def test_c6_runtime_bound():
    with criterion("6", "(2,2) halting steps <= 2^|s|*|s|*2, both blanks, cutoff 1000", limit=10.0):
        violations = halting = 0
        for t in range(machine_count(2)):
            digits = index_to_digits(2, t)
            for b in (0, 1):
                steps, out = kernel.run(2, digits, b, 1000)
                if out is not None:
                    halting += 1
                    violations += steps > runtime_bound(len(out), 2)
        assert halting == 2 * 3044
        assert violations == 0


def test_c7_convergence(full_tables):
    with criterion("7", "sum(m3-m2) <= 1/4, sum(m2-m1) <= 1/2, sum m3 < 1 (exact)"):
        m = {k: compute_mk(full_tables[k]) for k in (1, 2, 3)}
        assert measure_gap(m[3], m[2]) <= DyadicRational(1, 2)
        assert measure_gap(m[2], m[1]) <= DyadicRational(1, 1)
        assert m[3].total() < 1


def test_c8_symmetry(table2_no_symmetry):
    with criterion("8", "blank-complement and reversal symmetry on full (2,2)", limit=10.0):
        t = table2_no_symmetry
        assert not t.plan.use_blank_symmetry
        for (n, b, s), c in t.rows.items():
            assert t.count(n, 1 - b, s.translate(COMP)) == c
            assert t.count(n, b, s[::-1]) == c
        m2 = compute_mk(t)
        for s, v in m2.entries.items():
            assert m2[s.translate(COMP)] == v == m2[s[::-1]]


class _Stop(Exception):
    pass


def test_c9_determinism(tmp_path):
    with criterion("9", "(2,2) byte-identical for 1/4/13 workers and after resume", limit=60.0):
        plan = ExplorationPlan.build(2)
        files = {w: dumps_counts(explore(plan, w)) for w in (1, 4, 13)}
        assert files[1] == files[4] == files[13]
        ck_path = tmp_path / "run.ckpt"
        seen = []

        def stop(ck):
            seen.append(ck)
            # n=1 runs as 4 units, so this lands half-way through n=2
            if len(seen) == 6:
                raise _Stop

        with pytest.raises(_Stop):
            explore(plan, 4, checkpoint_path=ck_path, on_checkpoint=stop)
        ck = load_checkpoint(ck_path)
        assert 0 < ck.progress[2] < machine_count(2)
        assert dumps_counts(explore(plan, 4, resume=ck)) == files[1]


def test_c10_coin_flips():
    with criterion("10", "10^6 coin-flip decodes: P(states=n) = 2^-n within 3 SE", limit=30.0):
        draws = 10**6
        freq = {n: 0 for n in range(1, 5)}
        for item in codec.coin_flip_programs(draws, seed=2024):
            if item.states <= 4:
                freq[item.states] += 1
            if isinstance(item, codec.TrivialNonHalting):
                assert item.raw_index >= machine_count(item.states)
            else:
                assert item.index < machine_count(item.states)
        for n, c in freq.items():
            p = 2.0 ** -n
            se = math.sqrt(p * (1 - p) / draws)
            assert abs(c / draws - p) <= 3 * se, (n, c)
        assert isinstance(codec.decode_program("0" + "0" + "111111"), codec.TrivialNonHalting)


def test_c11_rank_regression(full_tables):
    with criterion("11", "rank_compare(m_k, D(k)) for k=2,3 deterministic; rho(a,a) = 1"):
        expected = {2: (1.0, 22), 3: (0.9995839304701586, 128)}
        for k, (rho, common) in expected.items():
            mk, dk = compute_mk(full_tables[k]), compute_dk(full_tables[k])
            first, second = rank_compare(mk, dk), rank_compare(mk, dk)
            assert first == second
            assert first.n_common == common
            assert abs(first.spearman_rho - rho) <= 1e-12
            assert rank_compare(mk, mk).spearman_rho == 1.0
            assert rank_compare(dk, dk).spearman_rho == 1.0


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
