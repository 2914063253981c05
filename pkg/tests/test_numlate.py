import random

import pytest
from hypothesis import given

from conftest import instances, random_instance
from lifo_resched import (build_multiset, evaluate_num_late, numlate_tables, oracle_optimum,
                          oracle_subsequence_state, solve_num_late, solve_num_late_omega)

# level-0 and level-1 state rows of the worked four-job example, keyed by (i, j)
E4_LEVEL0 = {
    (1, 1): [-20],
    (2, 2): [20], (1, 2): [20, -20],
    (3, 3): [30], (2, 3): [30, 20], (1, 3): [30, 20, -20],
    (4, 4): [20], (3, 4): [30, 20], (2, 4): [30, 20, 20], (1, 4): [30, 20, 20, -20],
}
E4_LEVEL1 = {
    (1, 1): [-20],
    (2, 2): [20], (1, 2): [-5, -20],
    (3, 3): [30], (2, 3): [25, 20], (1, 3): [5, -5, -20],
    (4, 4): [20], (3, 4): [30, 15], (2, 4): [25, 20, 10], (1, 4): [5, 5, -5, -20],
}
# sorted multisets for each move i -> k at level 1, keyed by (i, j, k)
E4_MULTISETS = {
    (1, 2, 1): [20, -20], (1, 2, 2): [-5, -10],
    (2, 3, 2): [30, 20], (2, 3, 3): [25, 20],
    (1, 3, 1): [25, 20, -20], (1, 3, 2): [30, -5, -10], (1, 3, 3): [5, -5, -5],
    (3, 4, 3): [30, 20], (3, 4, 4): [40, 15],
    (2, 4, 2): [30, 20, 15], (2, 4, 3): [25, 20, 20], (2, 4, 4): [35, 20, 10],
    (1, 4, 1): [25, 20, 10, -20], (1, 4, 2): [30, 15, -5, -10],
    (1, 4, 3): [20, 5, -5, -5], (1, 4, 4): [5, 5, -5, -5],
}


def test_worked_example_tables(e4):
    tables = numlate_tables(e4, 1)
    for (i, j), row in E4_LEVEL0.items():
        assert tables.row(i, j, 0) == row
    for (i, j), row in E4_LEVEL1.items():
        assert tables.row(i, j, 1) == row
    for (i, j, k), row in E4_MULTISETS.items():
        assert build_multiset(e4, tables, i, j, k, 1) == row


def test_worked_example_optimum(e4):
    sol = solve_num_late(e4)
    assert sol.value == 2
    assert evaluate_num_late(e4, sol.schedule) == 2
    assert sol.schedule.order == (2, 1, 3, 4)


def test_csv_layout(e4):
    lines = numlate_tables(e4, 1).to_csv([1]).splitlines()
    assert lines[0] == "level,j,i,m0,m1,m2,m3"
    assert lines[1] == "1,1,1,-20,,,"
    assert lines[-1] == "1,4,1,5,5,-5,-20"


def test_state_range_checked(e4):
    tables = numlate_tables(e4, 1)
    with pytest.raises(ValueError):
        tables.state(1, 2, 2, 1)
    with pytest.raises(ValueError):
        build_multiset(e4, tables, 2, 3, 1, 1)


@given(instances(n_max=6))
def test_states_match_brute_force(inst):
    tables = numlate_tables(inst, inst.n - 1)
    for level in range(tables.levels + 1):
        for j in range(1, inst.n + 1):
            for i in range(1, j + 1):
                for m in range(j - i + 1):
                    assert tables.state(i, j, m, level) == oracle_subsequence_state(inst, i, j, m, level)


@given(instances(n_max=8))
def test_matches_oracle(inst):
    sol = solve_num_late(inst)
    assert sol.value == oracle_optimum(inst, None, "numlate")[0]
    assert evaluate_num_late(inst, sol.schedule) == sol.value
    assert sol.moves.required_capacity <= inst.stack_capacity


def test_omega_matches_oracle():
    rng = random.Random(3)
    for _ in range(60):
        inst = random_instance(rng, rng.randint(2, 7), rng.randint(1, 3))
        inst = inst.with_movable(j for j in range(1, inst.n + 1) if rng.random() < 0.5)
        sol = solve_num_late_omega(inst)
        assert sol.moves.sources <= inst.movable
        assert sol.value == oracle_optimum(inst, None, "numlate", omega=True)[0]
