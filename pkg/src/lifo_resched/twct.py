"""Total weighted completion time over LIFO-reachable schedules.

Interval DP over blocks of the initial sequence: ``mu[l][i, j]`` is the best
change of the weighted completion time that moves nested at most l deep
can achieve inside block i..j, and ``c[l][i, j]`` the best change when job
i is moved right behind job j. A move's own effect does not depend on how
the jobs it jumps over are arranged, so costs add up.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .model import Instance, Schedule, Solution, evaluate_twct
from .moves import MoveSet, apply_moves

_FORBIDDEN = np.iinfo(np.int64).max


def move_cost(instance: Instance, i: int, j: int) -> int:
    """Change of the weighted completion time when job i goes right after job j."""
    if not i < j:
        raise ValueError(f"move cost needs i < j, got {i}, {j}")
    return instance.w[i - 1] * instance.P(i + 1, j) - instance.p[i - 1] * instance.W(i + 1, j)


def move_cost_matrix(instance: Instance) -> np.ndarray:
    """0-based ``m[i, j]`` for i < j, zero elsewhere."""
    n = instance.n
    p = np.asarray(instance.p, dtype=np.int64)
    w = np.asarray(instance.w, dtype=np.int64)
    pp = np.asarray(instance.p_prefix, dtype=np.int64)
    wp = np.asarray(instance.w_prefix, dtype=np.int64)
    # P(i+1..j) in 0-based terms is pp[j+1] - pp[i+1]
    jump_p = pp[None, 1:] - pp[1:, None]
    jump_w = wp[None, 1:] - wp[1:, None]
    m = w[:, None] * jump_p - p[:, None] * jump_w
    return np.triu(m, k=1)


def allowed_moves(instance: Instance, omega: bool) -> np.ndarray:
    """``allowed[i, k]``: may job i+1 be moved behind job k+1 (0-based, k >= i)."""
    n = instance.n
    allowed = np.triu(np.ones((n, n), dtype=bool))
    if omega:
        for job in range(1, n + 1):
            if job not in instance.movable:
                allowed[job - 1, job:] = False
    return allowed


def interval_min(row_cost: np.ndarray, below: np.ndarray, allowed_row: np.ndarray, i: int,
                 combine=np.add) -> tuple[np.ndarray, np.ndarray]:
    """Best split for block rows starting at i.

    For every j >= i, minimise ``combine(row_cost[k], below[k+1, j])`` over
    allowed k in i..j, ``below`` being a ``(n+1, n)`` table whose entries
    with row > column describe the empty block. Returns values and arg-min
    k for columns i..n-1; ties go to the smallest k.
    """
    n = below.shape[1]
    ks = np.arange(i, n)
    cand = combine(row_cost[i:, None], below[i + 1:, :])
    valid = (ks[:, None] <= np.arange(n)[None, :]) & allowed_row[i:, None]
    cand = np.where(valid, cand, _FORBIDDEN)[:, i:]
    best = cand.argmin(axis=0)
    return cand[best, np.arange(n - i)], best + i


@dataclass
class TwctTables:
    """Per-level DP tables (0-based job indices, level 0 = no moves)."""

    instance: Instance
    omega: bool
    m: np.ndarray
    c: list[np.ndarray] = field(default_factory=list)
    mu: list[np.ndarray] = field(default_factory=list)
    choice: list[np.ndarray] = field(default_factory=list)
    level_seconds: list[float] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.mu) - 1

    def _level(self, capacity: int) -> int:
        return min(capacity, self.levels)

    def delta(self, capacity: int) -> int:
        if self.instance.n == 0:
            return 0
        return int(self.mu[self._level(capacity)][0, self.instance.n - 1])

    def move_set(self, capacity: int) -> MoveSet:
        return MoveSet.from_pairs(reconstruct_moves(self.choice, self.instance.n, self._level(capacity)))

    def solution(self, capacity: int) -> Solution:
        moves = self.move_set(capacity)
        schedule, _ = apply_moves(self.instance, moves, capacity=capacity)
        return Solution(self.delta(capacity), schedule, moves)


def reconstruct_moves(choice: list[np.ndarray], n: int, level: int) -> list[tuple[int, int]]:
    """Walk split choices ``choice[l][i, j] = k`` into 1-based move pairs."""
    pairs = []
    todo = [(0, n - 1, level)]
    while todo:
        i, j, lvl = todo.pop()
        if i > j or lvl == 0:
            continue
        k = int(choice[lvl][i, j])
        if k == i:
            todo.append((i + 1, j, lvl))
        else:
            pairs.append((i + 1, k + 1))
            todo.append((i + 1, k, lvl - 1))
            todo.append((k + 1, j, lvl))
    return pairs


def twct_tables(instance: Instance, levels: int | None = None, *, omega: bool = False) -> TwctTables:
    n = instance.n
    levels = instance.stack_capacity if levels is None else levels
    levels = max(0, min(levels, n - 1))
    m = move_cost_matrix(instance)
    allowed = allowed_moves(instance, omega)
    tables = TwctTables(instance, omega, m)
    tables.mu.append(np.zeros((n + 1, n), dtype=np.int64))
    tables.c.append(np.zeros((n, n), dtype=np.int64))
    tables.choice.append(np.zeros((n, n), dtype=np.int64))
    start = time.perf_counter()
    for _ in range(levels):
        prev = tables.mu[-1]
        c = np.triu(m + prev[1:, :], k=1)
        mu = np.zeros((n + 1, n), dtype=np.int64)
        choice = np.zeros((n, n), dtype=np.int64)
        for i in range(n - 1, -1, -1):
            values, best = interval_min(c[i], mu, allowed[i], i)
            mu[i, i:] = values
            choice[i, i:] = best
        tables.c.append(c)
        tables.mu.append(mu)
        tables.choice.append(choice)
        tables.level_seconds.append(time.perf_counter() - start)
    return tables


def solve_twct(instance: Instance) -> Solution:
    """Minimum change of the weighted completion time reachable with the instance's stack.

    Returns ``(delta, schedule, moves)``; the schedule's objective equals the
    initial objective plus ``delta``. Every job is treated as movable.
    """
    return twct_tables(instance).solution(instance.stack_capacity)


def solve_twct_omega(instance: Instance) -> Solution:
    """Like :func:`solve_twct` but only jobs in ``instance.movable`` may be moved."""
    return twct_tables(instance, omega=True).solution(instance.stack_capacity)


def twct_value(instance: Instance, solution: Solution) -> int:
    """Absolute objective of a solution returned by the solvers above."""
    return evaluate_twct(instance, Schedule.initial(instance)) + solution.value
