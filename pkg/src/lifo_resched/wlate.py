"""Weighted number of late jobs under LIFO moves (pseudo-polynomial).

Two dynamic programs solve the same problem:

* the time-indexed one keeps ``r[l][(i, j)][t]``, the least late weight of
  block i..j when it starts t units earlier than originally, for
  ``t = 0..P(1, i-1)``;
* the weight-indexed one generalises the unweighted state: ``s~(i, j, m, l)``
  is the least start advance that keeps the late weight of block i..j at
  most m, obtained from multisets in which a job of weight w counts w times.

:func:`solve_weighted_late` picks whichever has the smaller range
(total processing time versus total weight).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import InvalidInstanceError, ResourceLimitError
from .model import Instance, Solution
from .moves import MoveSet, apply_moves

DEFAULT_MEMORY_BUDGET = 1 << 30


def _levels(instance: Instance, levels: int | None) -> int:
    levels = instance.stack_capacity if levels is None else levels
    return max(0, min(levels, instance.n - 1))


def _choice_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


def time_table_bytes(instance: Instance, levels: int | None = None) -> int:
    """Exact size of the arrays :func:`wlate_tables` allocates."""
    levels = _levels(instance, levels)
    n = instance.n
    cells = sum((n - i) * (instance.p_prefix[i] + 1) for i in range(n))
    item = np.dtype(np.int64).itemsize
    return cells * (levels + 1) * item + cells * levels * np.dtype(_choice_dtype(n)).itemsize


def weight_table_bytes(instance: Instance, levels: int | None = None) -> int:
    """Exact size of the arrays :func:`wlate_alt_tables` allocates."""
    levels = _levels(instance, levels)
    n = instance.n
    cells = sum(instance.W(i, j) for i in range(1, n + 1) for j in range(i, n + 1))
    item = np.dtype(np.int64).itemsize
    return cells * (levels + 1) * item + cells * levels * np.dtype(_choice_dtype(n)).itemsize


@dataclass
class WlateTables:
    """Time-indexed tables keyed by 0-based ``(i, j)`` per level."""

    instance: Instance
    omega: bool
    r: list[dict[tuple[int, int], np.ndarray]] = field(default_factory=list)
    choice: list[dict[tuple[int, int], np.ndarray]] = field(default_factory=list)
    level_seconds: list[float] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.r) - 1

    def state(self, i: int, j: int, t: int, level: int) -> int:
        """``r(i, j, t, level)`` with 1-based job indices."""
        return int(self.r[min(level, self.levels)][(i - 1, j - 1)][t])

    @property
    def nbytes(self) -> int:
        return sum(a.nbytes for tab in self.r for a in tab.values()) + \
            sum(a.nbytes for tab in self.choice for a in tab.values())

    def value(self, capacity: int) -> int:
        return self.state(1, self.instance.n, 0, capacity)

    def move_set(self, capacity: int) -> MoveSet:
        p = self.instance.p
        pairs = []
        todo = [(0, self.instance.n - 1, min(capacity, self.levels), 0)]
        while todo:
            i, j, lvl, t = todo.pop()
            if i > j or lvl == 0:
                continue
            k = int(self.choice[lvl][(i, j)][t])
            if k == i:
                todo.append((i + 1, j, lvl, t))
            else:
                pairs.append((i + 1, k + 1))
                todo.append((i + 1, k, lvl - 1, t + p[i]))
                todo.append((k + 1, j, lvl, t))
        return MoveSet.from_pairs(pairs)

    def solution(self, capacity: int) -> Solution:
        moves = self.move_set(capacity)
        schedule, _ = apply_moves(self.instance, moves, capacity=capacity)
        return Solution(self.value(capacity), schedule, moves)


def wlate_tables(instance: Instance, levels: int | None = None, *, omega: bool = False,
                 memory_budget: int = DEFAULT_MEMORY_BUDGET) -> WlateTables:
    n = instance.n
    if n == 0:
        raise ValueError("need at least one job")
    levels = _levels(instance, levels)
    need = time_table_bytes(instance, levels)
    if need > memory_budget:
        raise ResourceLimitError(need, memory_budget, "time-indexed weighted late-job tables")
    p, w = instance.p, instance.w
    pre = instance.p_prefix
    late = [c - d for c, d in zip(instance.initial_completion, instance.d)]
    completion = instance.initial_completion
    cdtype = _choice_dtype(n)

    base: dict[tuple[int, int], np.ndarray] = {}
    for i in range(n):
        t = np.arange(pre[i] + 1, dtype=np.int64)
        acc = np.zeros(pre[i] + 1, dtype=np.int64)
        for j in range(i, n):
            acc = acc + w[j] * (late[j] > t)
            base[(i, j)] = acc
    tables = WlateTables(instance, omega, [base], [{}])

    start = time.perf_counter()
    for lvl in range(1, levels + 1):
        prev, cur, choice = tables.r[lvl - 1], {}, {}
        for j in range(n):
            for i in range(j, -1, -1):
                span = pre[i] + 1
                t = np.arange(span, dtype=np.int64)
                if i == j:
                    cur[(i, j)] = w[i] * (late[i] > t)
                    choice[(i, j)] = np.full(span, i, dtype=cdtype)
                    continue
                rows = [cur[(i + 1, j)][:span] + w[i] * (late[i] > t)]
                if not omega or (i + 1) in instance.movable:
                    lo, hi = p[i], p[i] + span
                    for k in range(i + 1, j + 1):
                        moved = w[i] * (completion[k] - instance.d[i] > t)
                        row = prev[(i + 1, k)][lo:hi] + moved
                        if k < j:
                            row = row + cur[(k + 1, j)][:span]
                        rows.append(row)
                stack = np.stack(rows)
                best = stack.argmin(axis=0)
                cur[(i, j)] = stack[best, t]
                choice[(i, j)] = (best + i).astype(cdtype)
        tables.r.append(cur)
        tables.choice.append(choice)
        tables.level_seconds.append(time.perf_counter() - start)
    return tables


@dataclass
class AltWlateTables:
    """Weight-indexed tables: sorted multisets of length ``W(i, j)`` per block."""

    instance: Instance
    omega: bool
    s: list[dict[tuple[int, int], np.ndarray]] = field(default_factory=list)
    choice: list[dict[tuple[int, int], np.ndarray]] = field(default_factory=list)
    level_seconds: list[float] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.s) - 1

    def state(self, i: int, j: int, m: int, level: int) -> int:
        return int(self.s[min(level, self.levels)][(i - 1, j - 1)][m])

    def row(self, i: int, j: int, level: int) -> list[int]:
        return self.s[min(level, self.levels)][(i - 1, j - 1)].tolist()

    def value(self, capacity: int) -> int:
        row = self.s[min(capacity, self.levels)][(0, self.instance.n - 1)]
        hits = np.flatnonzero(row <= 0)
        return int(hits[0]) if len(hits) else len(row)

    def move_set(self, capacity: int) -> MoveSet:
        p = self.instance.p
        pairs = []
        todo = [(0, self.instance.n - 1, min(capacity, self.levels), 0)]
        while todo:
            i, j, lvl, shift = todo.pop()
            if i > j or lvl == 0:
                continue
            hits = np.flatnonzero(self.s[lvl][(i, j)] <= shift)
            if not len(hits):
                continue
            k = int(self.choice[lvl][(i, j)][hits[0]])
            if k == i:
                todo.append((i + 1, j, lvl, shift))
            else:
                pairs.append((i + 1, k + 1))
                todo.append((i + 1, k, lvl - 1, shift + p[i]))
                todo.append((k + 1, j, lvl, shift))
        return MoveSet.from_pairs(pairs)

    def solution(self, capacity: int) -> Solution:
        moves = self.move_set(capacity)
        schedule, _ = apply_moves(self.instance, moves, capacity=capacity)
        return Solution(self.value(capacity), schedule, moves)


_EMPTY = np.zeros(0, dtype=np.int64)


def wlate_alt_tables(instance: Instance, levels: int | None = None, *, omega: bool = False,
                     memory_budget: int = DEFAULT_MEMORY_BUDGET) -> AltWlateTables:
    n = instance.n
    if n == 0:
        raise ValueError("need at least one job")
    levels = _levels(instance, levels)
    need = weight_table_bytes(instance, levels)
    if need > memory_budget:
        raise ResourceLimitError(need, memory_budget, "weight-indexed weighted late-job tables")
    p, w, d = instance.p, instance.w, instance.d
    late = instance.initial_lateness
    completion = instance.initial_completion
    cdtype = _choice_dtype(n)

    base = {}
    for i in range(n):
        for j in range(i, n):
            values = np.repeat(np.asarray(late[i:j + 1], dtype=np.int64), w[i:j + 1])
            base[(i, j)] = -np.sort(-values)
    tables = AltWlateTables(instance, omega, [base], [{}])

    def block(tab, i, j):
        return tab[(i, j)] if i <= j else _EMPTY

    start = time.perf_counter()
    for lvl in range(1, levels + 1):
        prev, cur, choice = tables.s[lvl - 1], {}, {}
        for j in range(n):
            for i in range(j, -1, -1):
                ks = [i] if omega and (i + 1) not in instance.movable else range(i, j + 1)
                rows = []
                for k in ks:
                    nested = block(prev, i + 1, k) - p[i]
                    rest = block(cur, k + 1, j)
                    moved = np.full(w[i], completion[k] - d[i], dtype=np.int64)
                    rows.append(np.concatenate([nested, rest, moved]))
                stack = -np.sort(-np.stack(rows), axis=1)
                best = stack.argmin(axis=0)
                cur[(i, j)] = stack[best, np.arange(stack.shape[1])]
                choice[(i, j)] = (np.asarray(ks, dtype=np.int64)[best]).astype(cdtype)
        tables.s.append(cur)
        tables.choice.append(choice)
        tables.level_seconds.append(time.perf_counter() - start)
    return tables


def solve_wlate(instance: Instance, **kw) -> Solution:
    """Least weighted number of late jobs via the time-indexed program."""
    return wlate_tables(instance, **kw).solution(instance.stack_capacity)


def solve_wlate_alt(instance: Instance, **kw) -> Solution:
    """Least weighted number of late jobs via the weight-indexed program."""
    return wlate_alt_tables(instance, **kw).solution(instance.stack_capacity)


def solve_wlate_omega(instance: Instance, **kw) -> Solution:
    """Time-indexed program moving only jobs in ``instance.movable``."""
    return wlate_tables(instance, omega=True, **kw).solution(instance.stack_capacity)


def solve_wlate_alt_omega(instance: Instance, **kw) -> Solution:
    return wlate_alt_tables(instance, omega=True, **kw).solution(instance.stack_capacity)


def choose_method(instance: Instance) -> str:
    """``"time"`` when total processing time is the smaller range, else ``"weight"``."""
    return "time" if instance.total_processing <= instance.W(1, instance.n) else "weight"


def weighted_late_tables(instance: Instance, levels: int | None = None, *, method: str = "auto",
                         omega: bool = False, memory_budget: int = DEFAULT_MEMORY_BUDGET):
    if method == "auto":
        method = choose_method(instance)
    if method == "time":
        return wlate_tables(instance, levels, omega=omega, memory_budget=memory_budget)
    if method == "weight":
        return wlate_alt_tables(instance, levels, omega=omega, memory_budget=memory_budget)
    raise ValueError(f"method must be auto, time or weight, got {method!r}")


def solve_weighted_late(instance: Instance, *, method: str = "auto", omega: bool = False,
                        memory_budget: int = DEFAULT_MEMORY_BUDGET) -> Solution:
    tables = weighted_late_tables(instance, method=method, omega=omega, memory_budget=memory_budget)
    return tables.solution(instance.stack_capacity)


def make_partition_instance(values: Sequence[int]) -> tuple[Instance, int]:
    """Scheduling instance for an equal-cardinality partition question.

    Job i gets ``p_i = w_i = a_i``, every due date is half the total, the
    stack holds n/2 jobs and the threshold Q is half the total, rounded
    down when the total is odd.
    """
    values = [int(a) for a in values]
    n = len(values)
    if n == 0 or n % 2:
        raise InvalidInstanceError(f"need an even, nonzero number of values, got {n}")
    if any(a < 1 for a in values):
        raise InvalidInstanceError("partition values must be positive")
    half = sum(values) // 2
    instance = Instance.from_lists(values, values, [half] * n, n // 2)
    return instance, half


def has_equal_cardinality_partition(values: Sequence[int]) -> bool:
    """Direct subset enumeration."""
    n = len(values)
    total = sum(values)
    if n % 2 or total % 2:
        return False
    return any(sum(values[k] for k in subset) * 2 == total for subset in combinations(range(n), n // 2))
