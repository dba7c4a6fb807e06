import pytest
from hypothesis import given, settings, strategies as st

from ctm.counts import CountsTable, ExplorationPlan, PlanError, dumps_counts, load_checkpoint, merge_counts
from ctm.explorer import explore, partition_ranks, sample_block_indices, split_range, _run_unit, _absorb
from ctm.machines import machine_count
from ctm.simulate import runtime_bound

from conftest import available_kernels
from oracles import census

COMP = str.maketrans("01", "10")


def test_k1_full():
    t = explore(ExplorationPlan.build(1, cutoffs={1: 10}))
    assert t.examined == {(1, 0): 36, (1, 1): 36}
    assert t.count(1, 0, "0") == 6 and t.count(1, 0, "1") == 6
    assert t.halted == {(1, 0): 12, (1, 1): 12}


def test_k2_zero_producers(table2):
    assert table2.count(2, 0, "0") == 1000
    # regression constant, confirmed by the naive oracle
    assert table2.halted[(2, 0)] == 3044
    assert 1000 < table2.halted[(2, 0)] < 10000


def test_matches_oracle(table2):
    expected, halted = census(2, 10)
    rows = {(b, s): c for (n, b, s), c in table2.rows.items() if n == 2}
    assert rows == dict(expected)


def test_prefilter_off_identical():
    on = explore(ExplorationPlan.build(2))
    off = explore(ExplorationPlan.build(2, prefilter=False))
    assert on.rows == off.rows and on.halted == off.halted and on.examined == off.examined


def test_table_invariants(table2):
    for (n, b), h in table2.halted.items():
        assert h == sum(c for (m, bb, _), c in table2.rows.items() if (m, bb) == (n, b))
        assert h <= table2.examined[(n, b)]
    assert all(c > 0 for c in table2.rows.values())


def test_blank_symmetry_matches_simulation(table2, table2_no_symmetry):
    assert table2.rows == table2_no_symmetry.rows
    assert table2.halted == table2_no_symmetry.halted
    for (n, b, s), c in table2_no_symmetry.rows.items():
        assert table2_no_symmetry.count(n, 1 - b, s.translate(COMP)) == c


def test_reversal_symmetry(full_tables):
    for k in (2, 3):
        t = full_tables[k]
        for (n, b, s), c in t.rows.items():
            assert t.count(n, b, s[::-1]) == c


def test_monotone_in_cutoff():
    prev = None
    for cut in (1, 2, 4, 6, 10):
        t = explore(ExplorationPlan.build(2, cutoffs={1: cut, 2: cut}))
        if prev is not None:
            for key, c in prev.rows.items():
                assert t.rows.get(key, 0) >= c
        prev = t


def test_runtime_bound_coverage(table2):
    short = explore(ExplorationPlan.build(2, cutoffs={1: 4, 2: 4}))
    assert runtime_bound(1, 2) == 4
    for n in (1, 2):
        for b in (0, 1):
            for s in ("0", "1"):
                assert short.count(n, b, s) == table2.count(n, b, s)


@pytest.mark.parametrize(
    "n, workers, sizes",
    [(1, 1, [36]), (1, 5, [8, 7, 7, 7, 7])],
)
def test_partition_examples(n, workers, sizes):
    parts = partition_ranks(n, workers)
    assert [len(r) for r in parts] == sizes


@settings(max_examples=200)
@given(st.integers(1, 5), st.integers(1, 64))
def test_partition_property(n, workers):
    parts = partition_ranks(n, workers)
    assert len(parts) == workers
    assert parts[0].start == 0 and parts[-1].stop == machine_count(n)
    for a, b in zip(parts, parts[1:]):
        assert a.stop == b.start
    sizes = [len(r) for r in parts]
    assert max(sizes) - min(sizes) <= 1


def test_worker_tables_merge_to_whole(table2):
    plan = table2.plan
    total = CountsTable.empty(plan)
    n1 = CountsTable.empty(plan)
    _absorb(n1, 1, _run_unit(("range", 1, plan.cutoff(1), (0,), True, "auto", 0, 36)), True)
    total = merge_counts(total, n1)
    for r in partition_ranks(2, 4):
        part = CountsTable.empty(plan)
        _absorb(part, 2, _run_unit(("range", 2, plan.cutoff(2), (0,), True, "auto", r.start, r.stop)), True)
        total = merge_counts(total, part)
    assert total == table2


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_invariance(table2, workers):
    assert dumps_counts(explore(table2.plan, workers)) == dumps_counts(table2)


@pytest.mark.parametrize("kernel", available_kernels())
def test_kernel_choice_invariance(table2, kernel):
    assert explore(table2.plan, kernel=kernel) == table2


class Interrupt(Exception):
    pass


def test_checkpoint_resume(tmp_path, monkeypatch):
    import ctm.explorer as ex

    monkeypatch.setattr(ex, "CHUNK_SIZE", 1000)
    plan = ExplorationPlan.build(2)
    whole = explore(plan)
    ck_path = tmp_path / "run.ckpt"
    seen = []

    def stop(ck):
        seen.append(ck)
        if len(seen) == 4:
            raise Interrupt

    with pytest.raises(Interrupt):
        explore(plan, checkpoint_path=ck_path, on_checkpoint=stop)
    ck = load_checkpoint(ck_path)
    assert ck.progress == {1: 36, 2: 3000}
    assert ck.table == seen[-1].table
    resumed = explore(plan, resume=ck)
    assert dumps_counts(resumed) == dumps_counts(whole)


def test_resume_rejects_other_plan(tmp_path):
    plan = ExplorationPlan.build(1)
    explore(plan, checkpoint_path=tmp_path / "a.ckpt")
    ck = load_checkpoint(tmp_path / "a.ckpt")
    with pytest.raises(PlanError):
        explore(ExplorationPlan.build(1, cutoffs={1: 5}), resume=ck)


def test_sample_mode_reproducible(monkeypatch):
    import ctm.explorer as ex

    monkeypatch.setattr(ex, "SAMPLE_BLOCK", 500)
    plan = ExplorationPlan.build(3, mode={3: "sample"}, samples={3: 2000}, seed=42)
    a = explore(plan)
    b = explore(plan, 2)
    assert a == b
    assert a.examined[(3, 0)] == a.examined[(3, 1)] == 2000
    c = explore(ExplorationPlan.build(3, mode={3: "sample"}, samples={3: 2000}, seed=43))
    assert c.rows != a.rows


def test_sample_resume(tmp_path, monkeypatch):
    import ctm.explorer as ex

    monkeypatch.setattr(ex, "SAMPLE_BLOCK", 300)
    plan = ExplorationPlan.build(2, mode="sample", samples=1000, seed=7)
    whole = explore(plan)
    calls = []

    def stop(ck):
        calls.append(ck)
        if len(calls) == 5:
            raise Interrupt

    with pytest.raises(Interrupt):
        explore(plan, checkpoint_path=tmp_path / "s.ckpt", on_checkpoint=stop)
    ck = load_checkpoint(tmp_path / "s.ckpt")
    assert ck.progress == {1: 1000, 2: 300}
    assert explore(plan, resume=ck) == whole


def test_sample_indices_uniform_range():
    idx = sample_block_indices(1, 5, 0, 5000)
    assert all(0 <= t < machine_count(5) for t in idx)
    assert idx == sample_block_indices(1, 5, 0, 5000)
    assert idx != sample_block_indices(1, 5, 1, 5000)


def test_split_range_small():
    assert [len(r) for r in split_range(10, 13, 3)] == [1, 1, 1]
