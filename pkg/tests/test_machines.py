import random

import pytest
from hypothesis import given, strategies as st

from ctm.machines import (
    Instruction,
    Machine,
    MachineIndex,
    complement_machine,
    instruction_from_index,
    instruction_index,
    machine_count,
    mirror_machine,
    rank,
    unrank,
)

from oracles import all_instructions


@pytest.mark.parametrize("n, expected", [(1, 36), (2, 10000), (3, 7529536), (5, 26559922791424)])
def test_machine_count(n, expected):
    assert machine_count(n) == expected


def test_machine_count_five_by_repeated_squaring():
    x = 22
    x2 = x * x
    x4 = x2 * x2
    x8 = x4 * x4
    assert machine_count(5) == x8 * x2


def test_machine_count_is_big_integer():
    assert machine_count(40) == 162 ** 80
    with pytest.raises(ValueError):
        machine_count(0)


@pytest.mark.parametrize(
    "instr, expected",
    [((0, 0, 0), 0), ((1, 0, -1), 2), ((2, 1, 1), 9)],
)
def test_instruction_index_examples(instr, expected):
    assert instruction_index(Instruction(*instr), 2) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_instruction_index_bijective(n):
    idx = sorted(instruction_index(i, n) for i in all_instructions(n))
    assert idx == list(range(4 * n + 2))
    for d in range(4 * n + 2):
        assert instruction_index(instruction_from_index(d, n), n) == d


@pytest.mark.parametrize(
    "bad",
    [(0, 1, 1), (1, 0, 0), (3, 0, 1), (1, 2, 1), (1, 0, 2)],
)
def test_invalid_instructions_rejected(bad):
    with pytest.raises(ValueError):
        instruction_index(Instruction(*bad), 2)


def test_machine_shape_validated():
    with pytest.raises(ValueError):
        Machine(2, ((0, 0, 0),) * 3)
    with pytest.raises(ValueError):
        Machine(1, ((0, 0, 0), (2, 0, 1)))


def test_unrank_examples():
    assert unrank(MachineIndex(1, 0)).transitions == ((0, 0, 0), (0, 0, 0))
    assert unrank(MachineIndex(1, 35)).transitions == ((1, 1, 1), (1, 1, 1))
    m = unrank(MachineIndex(2, 185))
    assert m.digits() == [0, 1, 8, 5]
    assert m.transitions == ((0, 0, 0), (0, 1, 0), (2, 1, -1), (1, 1, 1))


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank(MachineIndex(1, 36))
    with pytest.raises(ValueError):
        MachineIndex(2, -1)


@pytest.mark.parametrize("n", [1, 2])
def test_rank_unrank_exhaustive(n):
    seen = set()
    for t in range(machine_count(n)):
        m = unrank(MachineIndex(n, t))
        assert rank(m).index == t
        seen.add(m)
    assert len(seen) == machine_count(n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank_unrank_random(n):
    rng = random.Random(n)
    for _ in range(10_000):
        t = rng.randrange(machine_count(n))
        assert rank(unrank(MachineIndex(n, t))).index == t


def test_complement_example():
    m = unrank(MachineIndex(1, 0))
    assert complement_machine(m).transitions == ((0, 1, 0), (0, 1, 0))


def test_mirror_fixes_all_halting_machine():
    m = unrank(MachineIndex(2, 0))
    assert mirror_machine(m) == m


def test_involutions_exhaustive_n1():
    for t in range(36):
        m = unrank(MachineIndex(1, t))
        assert complement_machine(complement_machine(m)) == m
        assert mirror_machine(mirror_machine(m)) == m
        assert complement_machine(mirror_machine(m)) == mirror_machine(complement_machine(m))


@given(st.data())
def test_involutions_random(data):
    n = data.draw(st.integers(2, 5))
    t = data.draw(st.integers(0, machine_count(n) - 1))
    m = unrank(MachineIndex(n, t))
    assert complement_machine(complement_machine(m)) == m
    assert mirror_machine(mirror_machine(m)) == m
    assert complement_machine(mirror_machine(m)) == mirror_machine(complement_machine(m))


def test_complement_and_mirror_are_bijections_of_space():
    images_c = {rank(complement_machine(unrank(MachineIndex(2, t)))).index for t in range(10000)}
    images_m = {rank(mirror_machine(unrank(MachineIndex(2, t)))).index for t in range(10000)}
    assert images_c == images_m == set(range(10000))
