"""One entry point per objective, returning absolute objective values."""
from __future__ import annotations

from .lmax import lmax_tables, solve_phimax
from .model import Instance, RegularFunctionSet, Schedule, Solution, evaluate_twct
from .numlate import numlate_tables
from .twct import twct_tables
from .wlate import DEFAULT_MEMORY_BUDGET, weighted_late_tables

TABLE_OBJECTIVES = ("twct", "lmax", "numlate", "wlate")


class LevelProfile:
    """Tables built once up to ``levels``, queried for every smaller capacity."""

    def __init__(self, objective: str, instance: Instance, levels: int, *, omega: bool = False,
                 method: str = "auto", memory_budget: int = DEFAULT_MEMORY_BUDGET):
        if objective not in TABLE_OBJECTIVES:
            raise ValueError(f"objective must be one of {TABLE_OBJECTIVES}, got {objective!r}")
        self.objective = objective
        self.instance = instance
        if objective == "twct":
            self.tables = twct_tables(instance, levels, omega=omega)
            self._base = evaluate_twct(instance, Schedule.initial(instance))
        elif objective == "lmax":
            self.tables = lmax_tables(instance, levels, omega=omega)
        elif objective == "numlate":
            self.tables = numlate_tables(instance, levels, omega=omega)
        else:
            self.tables = weighted_late_tables(instance, levels, method=method, omega=omega,
                                               memory_budget=memory_budget)

    def solution(self, capacity: int) -> Solution:
        sol = self.tables.solution(capacity)
        if self.objective == "twct":
            sol = sol._replace(value=self._base + sol.value)
        return sol

    def seconds(self, capacity: int) -> float:
        """Build time up to level ``capacity`` (levels beyond n-1 cost nothing)."""
        times = self.tables.level_seconds
        if not times:
            return 0.0
        return times[min(capacity, len(times)) - 1]


def solve(objective: str, instance: Instance, capacity: int | None = None, *, omega: bool = False,
          method: str = "auto", phis: RegularFunctionSet | None = None,
          memory_budget: int = DEFAULT_MEMORY_BUDGET) -> Solution:
    """Optimal reachable schedule; ``value`` is the absolute objective."""
    capacity = instance.stack_capacity if capacity is None else capacity
    if objective == "phimax":
        return solve_phimax(instance.with_capacity(capacity), phis, omega=omega)
    profile = LevelProfile(objective, instance, capacity, omega=omega, method=method,
                           memory_budget=memory_budget)
    return profile.solution(capacity)
