"""Number of late jobs under LIFO moves.

State ``s[l, i, j, m]``: the smallest amount by which block i..j has to be
started earlier (relative to its original start) so that at most m of its
jobs are late, rearranging it with moves nested at most l deep. Shifting a
block shifts all its lateness values alike, so the best rearrangement for
the (m+1)-th largest lateness does not depend on when the block starts.
That is what lets each split combine sub-block states as plain multisets.

Tables are dense ``(levels+1, n+1, n, n)`` arrays; entries with m > j - i
and empty blocks (i > j) hold ``PAD``, which sorts below every real value.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .model import Instance, Solution
from .moves import MoveSet, apply_moves

PAD = np.iinfo(np.int64).min // 4


@dataclass
class NumLateTables:
    instance: Instance
    omega: bool
    s: np.ndarray
    choice: np.ndarray
    level_seconds: list[float] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return self.s.shape[0] - 1

    def state(self, i: int, j: int, m: int, level: int) -> int:
        """``s(i, j, m, level)`` with 1-based job indices."""
        if not 0 <= m <= j - i:
            raise ValueError(f"m must lie in 0..{j - i}")
        return int(self.s[min(level, self.levels), i - 1, j - 1, m])

    def row(self, i: int, j: int, level: int) -> list[int]:
        return self.s[min(level, self.levels), i - 1, j - 1, : j - i + 1].tolist()

    def value(self, capacity: int) -> int:
        n = self.instance.n
        row = self.s[min(capacity, self.levels), 0, n - 1, :n]
        hits = np.flatnonzero(row <= 0)
        return int(hits[0]) if len(hits) else n

    def move_set(self, capacity: int) -> MoveSet:
        return MoveSet.from_pairs(self._walk(min(capacity, self.levels)))

    def solution(self, capacity: int) -> Solution:
        moves = self.move_set(capacity)
        schedule, _ = apply_moves(self.instance, moves, capacity=capacity)
        return Solution(self.value(capacity), schedule, moves)

    def _walk(self, level: int) -> list[tuple[int, int]]:
        # (i, j, level, shift): realise block i..j started `shift` earlier
        p = self.instance.p
        pairs = []
        todo = [(0, self.instance.n - 1, level, 0)]
        while todo:
            i, j, lvl, shift = todo.pop()
            if i > j or lvl == 0:
                continue
            row = self.s[lvl, i, j, : j - i + 1]
            hits = np.flatnonzero(row <= shift)
            if not len(hits):
                # every job of the block is late whatever we do
                continue
            k = int(self.choice[lvl, i, j, hits[0]])
            if k == i:
                todo.append((i + 1, j, lvl, shift))
            else:
                pairs.append((i + 1, k + 1))
                todo.append((i + 1, k, lvl - 1, shift + p[i]))
                todo.append((k + 1, j, lvl, shift))
        return pairs

    def to_csv(self, levels: list[int] | None = None) -> str:
        """Rows ``level,j,i,m0,m1,...`` ordered j ascending, i descending."""
        n = self.instance.n
        levels = list(range(self.levels + 1)) if levels is None else levels
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["level", "j", "i", *(f"m{m}" for m in range(n))])
        for lvl in levels:
            for j in range(1, n + 1):
                for i in range(j, 0, -1):
                    row = self.row(i, j, lvl)
                    writer.writerow([lvl, j, i, *row, *([""] * (n - len(row)))])
        return buf.getvalue()


def init_numlate(instance: Instance) -> np.ndarray:
    """Level-0 states: ``out[i, j, m]`` is the (m+1)-th largest initial lateness in block i..j."""
    n = instance.n
    late = np.asarray(instance.initial_lateness, dtype=np.int64)
    out = np.full((n + 1, n, n), PAD, dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            out[i, j, : j - i + 1] = -np.sort(-late[i:j + 1])
    return out


def _candidate_rows(s: np.ndarray, instance: Instance, i: int, j: int, level: int) -> np.ndarray:
    """Sorted multisets for every split k = i..j, one row each (0-based)."""
    size = j - i + 1
    p_i = instance.p[i]
    completion = np.asarray(instance.initial_completion[i:j + 1], dtype=np.int64)
    # jobs i+1..k, started p_i earlier and arranged one level shallower
    nested = s[level - 1, i + 1, i:j + 1, : size - 1] - p_i
    # jobs k+1..j keep their start and their level budget
    rest = s[level, i + 1:j + 2, j, : size - 1]
    # job i itself, now finishing where job k did
    moved = (completion - instance.d[i])[:, None]
    rows = np.concatenate([nested, rest, moved], axis=1)
    return -np.sort(-rows, axis=1)[:, :size]


def build_multiset(instance: Instance, tables: NumLateTables, i: int, j: int, k: int, level: int) -> list[int]:
    """Lateness multiset of block i..j when job i moves behind job k (1-based), sorted nonincreasing."""
    if not i <= k <= j:
        raise ValueError("need i <= k <= j")
    if level < 1:
        raise ValueError("multisets exist from level 1 on")
    rows = _candidate_rows(tables.s, instance, i - 1, j - 1, min(level, tables.levels))
    return rows[k - i].tolist()


def numlate_tables(instance: Instance, levels: int | None = None, *, omega: bool = False) -> NumLateTables:
    n = instance.n
    if n == 0:
        raise ValueError("need at least one job")
    levels = instance.stack_capacity if levels is None else levels
    levels = max(0, min(levels, n - 1))
    s = np.full((levels + 1, n + 1, n, n), PAD, dtype=np.int64)
    choice = np.zeros((levels + 1, n, n, n), dtype=np.int16 if n < 2**15 else np.int32)
    s[0] = init_numlate(instance)
    tables = NumLateTables(instance, omega, s, choice)
    start = time.perf_counter()
    for lvl in range(1, levels + 1):
        for j in range(n):
            for i in range(j, -1, -1):
                size = j - i + 1
                rows = _candidate_rows(s, instance, i, j, lvl)
                if omega and (i + 1) not in instance.movable:
                    rows = rows[:1]
                best = rows.argmin(axis=0)
                s[lvl, i, j, :size] = rows[best, np.arange(size)]
                choice[lvl, i, j, :size] = best + i
        tables.level_seconds.append(time.perf_counter() - start)
    return tables


def solve_num_late(instance: Instance) -> Solution:
    """Fewest late jobs reachable with the instance's stack capacity."""
    return numlate_tables(instance).solution(instance.stack_capacity)


def solve_num_late_omega(instance: Instance) -> Solution:
    """Like :func:`solve_num_late`, moving only jobs in ``instance.movable``."""
    return numlate_tables(instance, omega=True).solution(instance.stack_capacity)
