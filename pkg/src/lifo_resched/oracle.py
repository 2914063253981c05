"""Brute-force ground truth over all permutations for small n.

Which permutations are reachable, and at what stack depth, depends only on
n, so the filtered permutation table is computed once per n and reused for
every instance of that size.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterator

import numpy as np

from .errors import OracleLimitError
from .model import Instance, RegularFunctionSet, Schedule, evaluate
from .moves import _reconstruct

DEFAULT_LIMIT = 9


@lru_cache(maxsize=16)
def reachability_table(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All reachable orders of 1..n in lexicographic order.

    Returns ``(orders, capacity, moved_mask)``: an ``(N, n)`` array of job
    ids, the stack depth each order needs, and a bitmask of moved jobs
    (bit ``j - 1`` set when job j is the source of a move).
    """
    orders, caps, masks = [], [], []
    for perm in permutations(range(1, n + 1)):
        move_set = _reconstruct(perm)
        if move_set is None:
            continue
        orders.append(perm)
        caps.append(move_set.required_capacity)
        masks.append(sum(1 << (s - 1) for s in move_set.sources))
    return (np.array(orders, dtype=np.int64).reshape(len(orders), n),
            np.array(caps, dtype=np.int64), np.array(masks, dtype=np.int64))


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise OracleLimitError(f"brute force refused for n={n} > limit {limit}")


def _feasible_orders(instance: Instance, capacity: int, omega: bool, limit: int) -> np.ndarray:
    _guard(instance.n, limit)
    orders, caps, masks = reachability_table(instance.n)
    keep = caps <= capacity
    if omega:
        frozen = sum(1 << (j - 1) for j in range(1, instance.n + 1) if j not in instance.movable)
        keep &= (masks & frozen) == 0
    return orders[keep]


def enumerate_feasible(instance: Instance, capacity: int | None = None, *, omega: bool = False,
                       limit: int = DEFAULT_LIMIT) -> Iterator[Schedule]:
    """Yield every schedule reachable with the given stack capacity, once each."""
    capacity = instance.stack_capacity if capacity is None else capacity
    for row in _feasible_orders(instance, capacity, omega, limit):
        yield Schedule.from_order(instance, row.tolist())


def _objective_values(instance: Instance, orders: np.ndarray, objective: str,
                      phis: RegularFunctionSet | None) -> np.ndarray:
    p = np.asarray(instance.p, dtype=np.int64)
    w = np.asarray(instance.w, dtype=np.int64)
    d = np.asarray(instance.d, dtype=np.int64)
    idx = orders - 1
    completion_by_pos = np.cumsum(p[idx], axis=1)
    completion = np.empty_like(completion_by_pos)
    np.put_along_axis(completion, idx, completion_by_pos, axis=1)
    lateness = completion - d
    if objective == "twct":
        return completion @ w
    if objective == "lmax":
        return lateness.max(axis=1)
    if objective == "numlate":
        return (lateness > 0).sum(axis=1)
    if objective == "wlate":
        return (lateness > 0).astype(np.int64) @ w
    if objective == "phimax":
        phis = phis or RegularFunctionSet.lateness(instance)
        cache: dict[tuple[int, int], int] = {}
        out = np.empty(len(orders), dtype=np.int64)
        for r, row in enumerate(completion.tolist()):
            best = None
            for j, c in enumerate(row, start=1):
                key = (j, c)
                if key not in cache:
                    cache[key] = phis(j, c)
                best = cache[key] if best is None else max(best, cache[key])
            out[r] = best
        return out
    raise ValueError(f"unknown objective {objective!r}")


def oracle_optimum(instance: Instance, capacity: int | None, objective: str, *,
                   phis: RegularFunctionSet | None = None, omega: bool = False,
                   limit: int = DEFAULT_LIMIT) -> tuple[int, Schedule]:
    """Minimum objective over the reachable schedules.

    Ties go to the lexicographically smallest order.
    """
    capacity = instance.stack_capacity if capacity is None else capacity
    orders = _feasible_orders(instance, capacity, omega, limit)
    values = _objective_values(instance, orders, objective, phis)
    best = int(np.argmin(values))
    schedule = Schedule.from_order(instance, orders[best].tolist())
    value = int(values[best])
    assert value == evaluate(objective, instance, schedule, phis)
    return value, schedule


def oracle_subsequence_state(instance: Instance, i: int, j: int, m: int, level: int, *,
                             limit: int = DEFAULT_LIMIT) -> int:
    """Brute-force number-of-late-jobs state for the block of jobs i..j.

    Over all rearrangements of jobs i..j needing at most ``level`` stack
    slots (level 0 allows only the original order), the smallest possible
    (m+1)-th largest lateness, with the block starting where it does
    originally.
    """
    size = j - i + 1
    if not 0 <= m < size:
        raise ValueError(f"m must lie in 0..{size - 1}")
    _guard(size, limit)
    orders, caps, _ = reachability_table(size)
    orders = orders[caps <= level]
    p = np.asarray(instance.p[i - 1:j], dtype=np.int64)
    d = np.asarray(instance.d[i - 1:j], dtype=np.int64)
    idx = orders - 1
    completion = instance.P(1, i - 1) + np.cumsum(p[idx], axis=1)
    lateness = completion - d[idx]
    ranked = -np.sort(-lateness, axis=1)
    return int(ranked[:, m].min())
