import random

from hypothesis import given

from conftest import instances, random_instance
from lifo_resched import (Instance, apply_moves, evaluate_twct, move_cost, oracle_optimum, solve_twct,
                          solve_twct_omega, twct_tables)
from lifo_resched.twct import move_cost_matrix, twct_value


def test_move_cost(e4):
    # job 1 behind job 2: job 1 waits 10 more, job 2 finishes 25 earlier
    assert move_cost(e4, 1, 2) == 1 * 10 - 25 * 1
    m = move_cost_matrix(e4)
    assert m[0, 1] == -15 and m[0, 3] == 25 - 75 and m[1, 0] == 0


def test_e4_deltas(e4):
    tables = twct_tables(e4, 3)
    initial = evaluate_twct(e4, list(range(1, 5)))
    assert initial == 150
    assert [initial + tables.delta(S) for S in (0, 1, 2, 3)] == [150, 100, 95, 95]


def test_wspt_ordered_has_zero_delta():
    inst = Instance.from_lists([1, 2, 3, 4], [4, 3, 2, 1], [0] * 4, stack_capacity=3)
    assert solve_twct(inst).value == 0
    assert solve_twct(inst).moves.pairs() == []


@given(instances())
def test_matches_oracle(inst):
    sol = solve_twct(inst)
    best, _ = oracle_optimum(inst, None, "twct")
    assert twct_value(inst, sol) == best
    sched, trace = apply_moves(inst, sol.moves)
    assert evaluate_twct(inst, sched) == best
    assert trace.max_occupancy <= inst.stack_capacity


def test_omega_matches_oracle():
    rng = random.Random(5)
    for _ in range(60):
        inst = random_instance(rng, rng.randint(2, 7), rng.randint(1, 3))
        inst = inst.with_movable(j for j in range(1, inst.n + 1) if rng.random() < 0.5)
        sol = solve_twct_omega(inst)
        assert sol.moves.sources <= inst.movable
        assert twct_value(inst, sol) == oracle_optimum(inst, None, "twct", omega=True)[0]


@given(instances(n_max=9, smax=8))
def test_deltas_nonincreasing(inst):
    tables = twct_tables(inst, inst.n)
    values = [tables.delta(S) for S in range(0, inst.n + 1)]
    assert values == sorted(values, reverse=True)
