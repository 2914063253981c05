"""Unconstrained optima (any permutation allowed), used as gap references.

Ties in every sort are broken by job id so results are deterministic.
"""
from __future__ import annotations

import heapq
from fractions import Fraction

import numpy as np

from .model import (Instance, Schedule, evaluate_lmax, evaluate_num_late,
                    evaluate_twct)


def wspt(instance: Instance) -> tuple[int, Schedule]:
    """Smith's rule: nondecreasing p/w; zero-weight jobs go last."""
    def key(job):
        ratio = Fraction(job.p, job.w) if job.w > 0 else None
        return (ratio is None, ratio or 0, job.id)

    order = [job.id for job in sorted(instance.jobs, key=key)]
    schedule = Schedule.from_order(instance, order)
    return evaluate_twct(instance, schedule), schedule


def edd_order(instance: Instance) -> list[int]:
    return sorted(range(1, instance.n + 1), key=lambda j: (instance.d[j - 1], j))


def edd(instance: Instance) -> tuple[int, Schedule]:
    """Earliest due date first; optimal for maximum lateness."""
    schedule = Schedule.from_order(instance, edd_order(instance))
    return evaluate_lmax(instance, schedule), schedule


def moore_hodgson(instance: Instance) -> tuple[int, Schedule]:
    """Fewest late jobs: scan in EDD order, on overload drop the longest accepted job.

    Dropped jobs are appended after the on-time ones, in id order.
    """
    accepted: list[tuple[int, int]] = []  # max-heap on (p, id) via negation
    t = 0
    dropped = []
    for j in edd_order(instance):
        p = instance.p[j - 1]
        heapq.heappush(accepted, (-p, -j))
        t += p
        if t > instance.d[j - 1]:
            neg_p, neg_j = heapq.heappop(accepted)
            t += neg_p
            dropped.append(-neg_j)
    kept = set(dropped)
    order = [j for j in edd_order(instance) if j not in kept] + sorted(dropped)
    schedule = Schedule.from_order(instance, order)
    value = evaluate_num_late(instance, schedule)
    assert value == len(dropped)
    return value, schedule


def lawler_moore_weighted(instance: Instance) -> int:
    """Least total weight of late jobs over all permutations.

    On-time jobs can always run in EDD order, so ``best[t]`` holds the most
    on-time weight whose jobs finish exactly at t.
    """
    total = instance.total_processing
    best = np.full(total + 1, -1, dtype=np.int64)
    best[0] = 0
    for j in edd_order(instance):
        p, w, d = instance.p[j - 1], instance.w[j - 1], instance.d[j - 1]
        hi = min(d, total)
        if hi < p:
            continue
        prev = best[: hi - p + 1]
        cand = np.where(prev >= 0, prev + w, -1)
        best[p: hi + 1] = np.maximum(best[p: hi + 1], cand)
    return int(sum(instance.w) - best.max())


def baseline_value(objective: str, instance: Instance) -> int:
    if objective == "twct":
        return wspt(instance)[0]
    if objective == "lmax":
        return edd(instance)[0]
    if objective == "numlate":
        return moore_hodgson(instance)[0]
    if objective == "wlate":
        return lawler_moore_weighted(instance)
    raise ValueError(f"no baseline for objective {objective!r}")
