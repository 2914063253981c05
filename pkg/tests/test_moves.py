import random
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lifo_resched import (CapacityExceededError, IncompatibleMovesError, Instance, Move, MoveSet,
                          apply_moves, is_reachable, reconstruct_move_set, simulate, stack_metrics)
from lifo_resched.moves import apply_moves_nested, format_move_script, parse_move_script

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]

NESTED_EXAMPLE_ORDER = (2, 3, 1, 4, 6, 8, 9, 7, 5)


def test_nested_example_trace():
    moves = reconstruct_move_set(9, NESTED_EXAMPLE_ORDER)
    assert moves.pairs() == [(1, 3), (5, 9), (7, 9)]
    assert moves.required_capacity == 2
    trace = simulate(9, moves)
    assert trace.order == NESTED_EXAMPLE_ORDER
    assert trace.occupancy == (1, 1, 0, 0, 1, 1, 2, 2, 0)
    assert stack_metrics(trace) == (3, 2, 1.0)
    assert apply_moves_nested(9, moves) == NESTED_EXAMPLE_ORDER


def test_trace_csv():
    trace = simulate(2, MoveSet.from_pairs([(1, 2)]))
    assert trace.to_csv() == "step,occupancy,event\n1,1,push 1\n2,1,emit 2\n2,0,pop 1\n"


def test_crossing_moves_rejected():
    with pytest.raises(IncompatibleMovesError):
        MoveSet.from_pairs([(1, 3), (2, 4)])
    # a move starting where another ends crosses it
    with pytest.raises(IncompatibleMovesError):
        MoveSet.from_pairs([(1, 3), (3, 5)])
    with pytest.raises(IncompatibleMovesError):
        MoveSet.from_pairs([(1, 3), (1, 4)])
    with pytest.raises(IncompatibleMovesError):
        Move(3, 2)


def test_sequential_and_nested_levels():
    seq = MoveSet.from_pairs([(1, 2), (3, 5)])
    assert seq.required_capacity == 1
    nested = MoveSet.from_pairs([(1, 5), (2, 4), (3, 4)])
    assert [nested.level(m) for m in nested] == [3, 2, 1]
    assert nested.level((2, 2)) == 1
    assert MoveSet.from_pairs([(2, 2)]).pairs() == []


def test_capacity_exceeded():
    inst = Instance.from_lists([1, 1, 1], stack_capacity=1)
    with pytest.raises(CapacityExceededError) as info:
        apply_moves(inst, [(1, 3), (2, 3)])
    assert info.value.required == 2
    sched, _ = apply_moves(inst, [(1, 3), (2, 3)], capacity=2)
    assert sched.order == (3, 2, 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_reachable_counts_are_catalan(n):
    reach = sum(reconstruct_move_set(n, perm) is not None for perm in permutations(range(1, n + 1)))
    assert reach == CATALAN[n]


def test_capacity_one_count_small():
    # with a single slot only the swap of disjoint blocks is possible
    counts = [sum(is_reachable(n, perm, 1) for perm in permutations(range(1, n + 1))) for n in range(1, 6)]
    assert counts == [1, 2, 4, 8, 16]


def test_unreachable_example():
    assert reconstruct_move_set(3, (3, 1, 2)) is None
    assert reconstruct_move_set(3, (2, 3, 1)).pairs() == [(1, 3)]


@st.composite
def laminar(draw, n_max=10):
    n = draw(st.integers(1, n_max))
    pairs, k = [], 1

    def fill(lo, hi):
        k = lo
        while k <= hi:
            if k < hi and draw(st.booleans()):
                t = draw(st.integers(k + 1, hi))
                pairs.append((k, t))
                fill(k + 1, t)
                k = t + 1
            else:
                k += 1

    fill(1, n)
    return n, MoveSet.from_pairs(pairs)


@given(laminar())
def test_apply_reconstruct_roundtrip(case):
    n, moves = case
    trace = simulate(n, moves)
    assert apply_moves_nested(n, moves) == trace.order
    assert trace.max_occupancy == moves.required_capacity
    assert reconstruct_move_set(n, trace.order) == moves


@given(laminar())
def test_move_script_roundtrip(case):
    _, moves = case
    assert parse_move_script(format_move_script(moves)) == moves


def test_move_script_arrow_syntax():
    assert parse_move_script("# c\n1->3\n\n5 9\n").pairs() == [(1, 3), (5, 9)]
