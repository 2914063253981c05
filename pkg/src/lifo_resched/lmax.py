"""Maximum lateness, and the maximum of regular cost functions, under LIFO moves.

``lam[l][i, j]`` is the smallest maximum lateness of block i..j (measured
against the block's original start) reachable with moves nested at most l
deep; ``g[l][i, j]`` is the same value when job i must go right after job j.

The general ``max phi_j(C_j)`` objective does not decompose over blocks,
so it is solved by bisection on the objective value: each probe turns the
target into deadlines and asks the lateness DP whether all of them can be
met.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import NonMonotoneFunctionError
from .model import Instance, RegularFunctionSet, Solution
from .moves import MoveSet, apply_moves
from .twct import allowed_moves, interval_min, reconstruct_moves

_EMPTY = np.iinfo(np.int64).min // 4


@dataclass
class LmaxTables:
    instance: Instance
    omega: bool
    g: list[np.ndarray] = field(default_factory=list)
    lam: list[np.ndarray] = field(default_factory=list)
    choice: list[np.ndarray] = field(default_factory=list)
    level_seconds: list[float] = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.lam) - 1

    def value(self, capacity: int) -> int:
        return int(self.lam[min(capacity, self.levels)][0, self.instance.n - 1])

    def move_set(self, capacity: int) -> MoveSet:
        return MoveSet.from_pairs(reconstruct_moves(self.choice, self.instance.n, min(capacity, self.levels)))

    def solution(self, capacity: int) -> Solution:
        moves = self.move_set(capacity)
        schedule, _ = apply_moves(self.instance, moves, capacity=capacity)
        return Solution(self.value(capacity), schedule, moves)


def _block_max(values: np.ndarray) -> np.ndarray:
    """``out[i, j] = max(values[i..j])`` on an (n+1, n) grid, empty blocks marked."""
    n = len(values)
    out = np.full((n + 1, n), _EMPTY, dtype=np.int64)
    for i in range(n):
        out[i, i:] = np.maximum.accumulate(values[i:])
    return out


def lmax_tables(instance: Instance, levels: int | None = None, *, omega: bool = False,
                due_dates=None) -> LmaxTables:
    """Build tables up to ``levels`` (default: the stack capacity).

    ``due_dates`` overrides the instance's due dates and may hold negative
    values, which the bisection for phi objectives needs.
    """
    n = instance.n
    if n == 0:
        raise ValueError("maximum lateness needs at least one job")
    levels = instance.stack_capacity if levels is None else levels
    levels = max(0, min(levels, n - 1))
    p = np.asarray(instance.p, dtype=np.int64)
    pp = np.asarray(instance.p_prefix, dtype=np.int64)
    if due_dates is None:
        late0 = np.asarray(instance.initial_lateness, dtype=np.int64)
    else:
        late0 = pp[1:] - np.asarray(due_dates, dtype=np.int64)
    # lateness of job i after moving it behind job j: L_i + P(i+1..j)
    moved_late = late0[:, None] + (pp[None, 1:] - pp[1:, None])
    allowed = allowed_moves(instance, omega)
    diag = np.arange(n)

    tables = LmaxTables(instance, omega)
    tables.lam.append(_block_max(late0))
    tables.g.append(np.diag(late0))
    tables.choice.append(np.zeros((n, n), dtype=np.int64))
    start = time.perf_counter()
    for _ in range(levels):
        prev = tables.lam[-1]
        g = np.maximum(moved_late, prev[1:, :] - p[:, None])
        g[diag, diag] = late0
        g = np.where(np.triu(np.ones((n, n), dtype=bool)), g, 0)
        lam = np.full((n + 1, n), _EMPTY, dtype=np.int64)
        choice = np.zeros((n, n), dtype=np.int64)
        for i in range(n - 1, -1, -1):
            values, best = interval_min(g[i], lam, allowed[i], i, combine=np.maximum)
            lam[i, i:] = values
            choice[i, i:] = best
        tables.g.append(g)
        tables.lam.append(lam)
        tables.choice.append(choice)
        tables.level_seconds.append(time.perf_counter() - start)
    return tables


def solve_lmax(instance: Instance) -> Solution:
    """Smallest maximum lateness reachable with the instance's stack capacity."""
    return lmax_tables(instance).solution(instance.stack_capacity)


def solve_lmax_omega(instance: Instance) -> Solution:
    """Like :func:`solve_lmax`, moving only jobs in ``instance.movable``."""
    return lmax_tables(instance, omega=True).solution(instance.stack_capacity)


@dataclass
class PhimaxSearchState:
    """Bisection bracket and the deadlines of the last probe."""

    alpha: int
    omega: int
    deadlines: tuple[int, ...] = ()
    probes: list[tuple[int, bool]] = field(default_factory=list)


def phimax_bounds(instance: Instance, phis: RegularFunctionSet) -> tuple[int, int]:
    """``max_j phi_j(p_j)`` and ``max_j phi_j(P(1, j))`` bracket the optimum."""
    alpha = max(phis(j, instance.p[j - 1]) for j in range(1, instance.n + 1))
    omega = max(phis(j, instance.P(1, j)) for j in range(1, instance.n + 1))
    return alpha, omega


def deadline(phis: RegularFunctionSet, job: int, target: int, horizon: int) -> int:
    """Latest integer t in [0, horizon] with ``phi_job(t) <= target``, or -1 if none."""
    if phis(job, 0) > target:
        return -1
    lo, hi = 0, horizon
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if phis(job, mid) <= target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def solve_phimax(instance: Instance, phis: RegularFunctionSet | None = None, *, omega: bool = False,
                 state: PhimaxSearchState | None = None) -> Solution:
    """Minimise ``max_j phi_j(C_j)`` over the reachable schedules.

    Every ``phi_j`` must be nondecreasing and integer valued on
    ``[0, P(1, n)]``; the optimum is then an integer inside
    :func:`phimax_bounds`, found by bisection.
    """
    phis = phis or RegularFunctionSet.from_spec(instance)
    if len(phis) != instance.n:
        raise ValueError(f"need {instance.n} cost functions, got {len(phis)}")
    horizon = instance.total_processing
    phis.check_monotone(horizon)
    alpha, upper = phimax_bounds(instance, phis)
    state = state if state is not None else PhimaxSearchState(alpha, upper)
    state.alpha, state.omega = alpha, upper
    capacity = instance.stack_capacity

    def probe(target: int) -> LmaxTables:
        due = [deadline(phis, j, target, horizon) for j in range(1, instance.n + 1)]
        state.deadlines = tuple(due)
        # a deadline of -1 can never be met since every C_j >= 0
        return lmax_tables(instance, capacity, omega=omega, due_dates=due)

    lo, hi = alpha, upper
    best = probe(hi)
    if best.value(capacity) > 0:
        raise NonMonotoneFunctionError("the initial sequence misses the upper bound; phi is not regular")
    state.probes.append((hi, True))
    while lo < hi:
        mid = (lo + hi) // 2
        tables = probe(mid)
        ok = tables.value(capacity) <= 0
        state.probes.append((mid, ok))
        if ok:
            hi, best = mid, tables
        else:
            lo = mid + 1
    passed = [t for t, ok in state.probes if ok]
    failed = [t for t, ok in state.probes if not ok]
    if failed and max(failed) >= min(passed):
        raise NonMonotoneFunctionError("feasibility of the deadline test is not monotone in the target")
    moves = best.move_set(capacity)
    schedule, _ = apply_moves(instance, moves, capacity=capacity)
    value = max(phis(j + 1, c) for j, c in enumerate(schedule.completion))
    if value != hi:
        raise NonMonotoneFunctionError(f"witness reaches {value}, bisection ended at {hi}")
    return Solution(hi, schedule, moves)
