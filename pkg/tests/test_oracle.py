import pytest

from lifo_resched import Instance, OracleLimitError, enumerate_feasible, oracle_optimum
from lifo_resched.oracle import reachability_table


def test_table_sizes():
    assert [len(reachability_table(n)[0]) for n in range(1, 8)] == [1, 2, 5, 14, 42, 132, 429]


def test_three_jobs_single_slot():
    inst = Instance.from_lists([1, 2, 3], stack_capacity=1)
    orders = sorted(s.order for s in enumerate_feasible(inst))
    assert orders == [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1)]
    assert len(list(enumerate_feasible(inst, 2))) == 5


@pytest.mark.parametrize("S,late,lmax", [(1, 2, 5), (2, 1, 5), (3, 1, 5)])
def test_e4_values(e4, S, late, lmax):
    assert oracle_optimum(e4, S, "numlate")[0] == late
    assert oracle_optimum(e4, S, "lmax")[0] == lmax


def test_e4_witness(e4):
    value, sched = oracle_optimum(e4, 1, "numlate")
    assert (value, sched.order) == (2, (2, 1, 3, 4))


def test_omega_restricts(e4):
    assert oracle_optimum(e4.with_movable([1]), 3, "numlate", omega=True)[0] == 2
    assert oracle_optimum(e4.with_movable([2]), 3, "numlate", omega=True)[0] == 3
    assert oracle_optimum(e4.with_movable([]), 3, "numlate", omega=True)[0] == 3


def test_limit():
    with pytest.raises(OracleLimitError):
        oracle_optimum(Instance.from_lists([1] * 10), 1, "twct")
