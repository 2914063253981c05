import random

import pytest
from hypothesis import given

from conftest import instances, random_instance
from lifo_resched import (Instance, ResourceLimitError, evaluate_weighted_late, has_equal_cardinality_partition,
                          make_partition_instance, oracle_optimum, solve_num_late, solve_weighted_late,
                          solve_wlate, solve_wlate_alt, solve_wlate_alt_omega, solve_wlate_omega,
                          wlate_alt_tables, wlate_tables)
from lifo_resched.wlate import choose_method, time_table_bytes, weight_table_bytes


def test_e4_weighted():
    inst = Instance.from_lists([25, 10, 5, 10], [1, 5, 2, 3], [45, 15, 10, 30])
    assert solve_wlate(inst).value == oracle_optimum(inst, 1, "wlate")[0]
    assert solve_wlate_alt(inst).value == solve_wlate(inst).value


@given(instances(wmin=0, wmax=9))
def test_both_programs_match_oracle(inst):
    best = oracle_optimum(inst, None, "wlate")[0]
    for solver in (solve_wlate, solve_wlate_alt):
        sol = solver(inst)
        assert sol.value == best
        assert evaluate_weighted_late(inst, sol.schedule) == best
        assert sol.moves.required_capacity <= inst.stack_capacity


@given(instances(wmin=1, wmax=1))
def test_unit_weights_equal_num_late(inst):
    assert solve_wlate(inst).value == solve_num_late(inst).value == solve_wlate_alt(inst).value


def test_omega_matches_oracle():
    rng = random.Random(8)
    for _ in range(50):
        inst = random_instance(rng, rng.randint(2, 7), rng.randint(1, 3), wmax=9)
        inst = inst.with_movable(j for j in range(1, inst.n + 1) if rng.random() < 0.5)
        best = oracle_optimum(inst, None, "wlate", omega=True)[0]
        for solver in (solve_wlate_omega, solve_wlate_alt_omega):
            sol = solver(inst)
            assert sol.value == best
            assert sol.moves.sources <= inst.movable


@given(instances(n_max=9))
def test_state_tables_sized_as_estimated(inst):
    assert wlate_tables(inst).nbytes == time_table_bytes(inst)
    tables = wlate_alt_tables(inst)
    cells = sum(a.nbytes for tab in tables.s for a in tab.values()) + \
        sum(a.nbytes for tab in tables.choice for a in tab.values())
    assert cells == weight_table_bytes(inst)


def test_memory_guard():
    inst = Instance.from_lists([50] * 40, [1] * 40, [100] * 40, stack_capacity=5)
    need = time_table_bytes(inst)
    with pytest.raises(ResourceLimitError) as info:
        wlate_tables(inst, memory_budget=need - 1)
    assert info.value.required_bytes == need
    assert "bytes" in str(info.value)


def test_auto_method():
    cheap_weights = Instance.from_lists([50, 60, 70], [1, 1, 1], [10, 10, 10])
    assert choose_method(cheap_weights) == "weight"
    cheap_time = Instance.from_lists([1, 2, 1], [80, 70, 90], [2, 2, 2])
    assert choose_method(cheap_time) == "time"
    assert solve_weighted_late(cheap_time).value == solve_wlate(cheap_time).value


def test_partition_instance_shape():
    inst, q = make_partition_instance([3, 1, 2, 2])
    assert q == 4
    assert inst.p == inst.w == (3, 1, 2, 2)
    assert inst.d == (4, 4, 4, 4)
    assert inst.stack_capacity == 2
    with pytest.raises(ValueError):
        make_partition_instance([1, 2, 3])


@pytest.mark.parametrize("values,expected", [([3, 1, 2, 2], True), ([5, 1, 1, 1], False),
                                             ([1, 1, 1, 3], False), ([6, 3, 2, 1], False),
                                             ([1, 2, 3, 4, 5, 5], True)])
def test_direct_partition(values, expected):
    assert has_equal_cardinality_partition(values) is expected


def test_partition_yes_instances_stay_below_threshold():
    # one direction holds: a balanced split always gives late weight <= Q
    rng = random.Random(4)
    for _ in range(100):
        n = rng.choice([2, 4, 6, 8])
        values = [rng.randint(1, 12) for _ in range(n)]
        if has_equal_cardinality_partition(values):
            inst, q = make_partition_instance(values)
            assert solve_wlate(inst).value <= q


def test_partition_converse_fails_on_known_list():
    # late weight 3 <= Q = 3 although no balanced split exists
    inst, q = make_partition_instance([1, 1, 1, 3])
    assert solve_wlate(inst).value <= q
    assert not has_equal_cardinality_partition([1, 1, 1, 3])
