"""Instances, schedules and exact objective evaluation.

Jobs are numbered 1..n by their position in the initial sequence; every
quantity is an integer and schedules start at time 0 without idle time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInstanceError, InvalidScheduleError, NonMonotoneFunctionError

OBJECTIVES = ("twct", "lmax", "numlate", "wlate", "phimax")

# products P(1,n) * max(w) * n must stay inside int64 with headroom
_INT_LIMIT = 2**62


@dataclass(frozen=True)
class Job:
    id: int
    p: int
    w: int = 1
    d: int = 0

    def __post_init__(self):
        for name in ("id", "p", "w", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidInstanceError(f"job field {name} must be an integer, got {value!r}")
        if self.p < 0 or self.w < 0 or self.d < 0:
            raise InvalidInstanceError(f"job {self.id}: p, w, d must be nonnegative")


@dataclass(frozen=True)
class Instance:
    """Jobs in initial order, a stack capacity and the movable set."""

    jobs: tuple[Job, ...]
    stack_capacity: int = 1
    movable: frozenset[int] | None = None
    phi_spec: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        ids = [job.id for job in self.jobs]
        if ids != list(range(1, len(ids) + 1)):
            raise InvalidInstanceError("job ids must be 1..n in sequence order")
        if not isinstance(self.stack_capacity, (int, np.integer)) or self.stack_capacity < 1:
            raise InvalidInstanceError(f"stack capacity must be a positive integer, got {self.stack_capacity!r}")
        movable = frozenset(ids) if self.movable is None else frozenset(int(j) for j in self.movable)
        if not movable <= set(ids):
            raise InvalidInstanceError(f"movable set mentions unknown jobs {sorted(movable - set(ids))}")
        object.__setattr__(self, "movable", movable)
        object.__setattr__(self, "phi_spec", tuple(self.phi_spec))
        total = sum(job.p for job in self.jobs)
        wmax = max((job.w for job in self.jobs), default=0)
        if (total + 1) * (wmax + 1) * (len(ids) + 1) >= _INT_LIMIT or max((j.d for j in self.jobs), default=0) >= _INT_LIMIT:
            raise InvalidInstanceError("instance data too large for 64-bit exact arithmetic")

    @classmethod
    def from_lists(cls, p: Sequence[int], w: Sequence[int] | None = None, d: Sequence[int] | None = None,
                   stack_capacity: int = 1, movable: Iterable[int] | None = None,
                   phi_spec: Sequence[str] = ()) -> Instance:
        n = len(p)
        w = [1] * n if w is None else list(w)
        d = [0] * n if d is None else list(d)
        if len(w) != n or len(d) != n:
            raise InvalidInstanceError("p, w and d must have the same length")
        jobs = tuple(Job(k + 1, int(p[k]), int(w[k]), int(d[k])) for k in range(n))
        return cls(jobs, stack_capacity, None if movable is None else frozenset(movable), tuple(phi_spec))

    def with_capacity(self, stack_capacity: int) -> Instance:
        return Instance(self.jobs, stack_capacity, self.movable, self.phi_spec)

    def with_movable(self, movable: Iterable[int] | None) -> Instance:
        return Instance(self.jobs, self.stack_capacity, None if movable is None else frozenset(movable), self.phi_spec)

    def with_due_dates(self, d: Sequence[int]) -> Instance:
        return Instance.from_lists(self.p, self.w, d, self.stack_capacity, self.movable, self.phi_spec)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @cached_property
    def p(self) -> tuple[int, ...]:
        return tuple(job.p for job in self.jobs)

    @cached_property
    def w(self) -> tuple[int, ...]:
        return tuple(job.w for job in self.jobs)

    @cached_property
    def d(self) -> tuple[int, ...]:
        return tuple(job.d for job in self.jobs)

    @cached_property
    def p_prefix(self) -> tuple[int, ...]:
        """``p_prefix[k]`` is the total processing time of jobs 1..k."""
        out = [0]
        for value in self.p:
            out.append(out[-1] + value)
        return tuple(out)

    @cached_property
    def w_prefix(self) -> tuple[int, ...]:
        out = [0]
        for value in self.w:
            out.append(out[-1] + value)
        return tuple(out)

    def P(self, i: int, j: int) -> int:
        """Total processing time of jobs i..j (1-based, empty when i > j)."""
        if i > j:
            return 0
        return self.p_prefix[j] - self.p_prefix[i - 1]

    def W(self, i: int, j: int) -> int:
        if i > j:
            return 0
        return self.w_prefix[j] - self.w_prefix[i - 1]

    @property
    def total_processing(self) -> int:
        return self.p_prefix[-1]

    @cached_property
    def initial_completion(self) -> tuple[int, ...]:
        return self.p_prefix[1:]

    @cached_property
    def initial_lateness(self) -> tuple[int, ...]:
        return tuple(c - d for c, d in zip(self.initial_completion, self.d))

    def is_movable(self, job: int) -> bool:
        return job in self.movable


@dataclass(frozen=True)
class Schedule:
    """A job order with completion times and lateness indexed by job id - 1."""

    order: tuple[int, ...]
    completion: tuple[int, ...] = field(repr=False)
    lateness: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_order(cls, instance: Instance, order: Iterable[int]) -> Schedule:
        order = tuple(int(j) for j in order)
        check_permutation(instance.n, order)
        completion = [0] * instance.n
        t = 0
        for job in order:
            t += instance.p[job - 1]
            completion[job - 1] = t
        lateness = tuple(c - d for c, d in zip(completion, instance.d))
        return cls(order, tuple(completion), lateness)

    @classmethod
    def initial(cls, instance: Instance) -> Schedule:
        return cls.from_order(instance, range(1, instance.n + 1))

    def late_jobs(self) -> list[int]:
        return [j + 1 for j, value in enumerate(self.lateness) if value > 0]


class Solution(NamedTuple):
    """Solver output: objective value, optimal schedule and the move set that builds it."""

    value: int
    schedule: Schedule
    moves: "MoveSet"  # noqa: F821 - defined in moves.py


def check_permutation(n: int, order: Sequence[int]) -> None:
    if len(order) != n or sorted(order) != list(range(1, n + 1)):
        raise InvalidScheduleError(f"order {tuple(order)} is not a permutation of 1..{n}")


def _schedule(instance: Instance, schedule: Schedule | Sequence[int]) -> Schedule:
    if isinstance(schedule, Schedule):
        check_permutation(instance.n, schedule.order)
        if len(schedule.completion) != instance.n:
            raise InvalidScheduleError("schedule belongs to a different instance")
        return schedule
    return Schedule.from_order(instance, schedule)


def evaluate_twct(instance: Instance, schedule: Schedule | Sequence[int]) -> int:
    s = _schedule(instance, schedule)
    return sum(w * c for w, c in zip(instance.w, s.completion))


def evaluate_lmax(instance: Instance, schedule: Schedule | Sequence[int]) -> int:
    s = _schedule(instance, schedule)
    if not s.lateness:
        raise InvalidScheduleError("maximum lateness of an empty schedule is undefined")
    return max(s.lateness)


def evaluate_num_late(instance: Instance, schedule: Schedule | Sequence[int]) -> int:
    s = _schedule(instance, schedule)
    return sum(1 for value in s.lateness if value > 0)


def evaluate_weighted_late(instance: Instance, schedule: Schedule | Sequence[int]) -> int:
    s = _schedule(instance, schedule)
    return sum(w for w, value in zip(instance.w, s.lateness) if value > 0)


def evaluate_phimax(instance: Instance, phis: RegularFunctionSet, schedule: Schedule | Sequence[int]) -> int:
    s = _schedule(instance, schedule)
    return max(phis(j + 1, c) for j, c in enumerate(s.completion))


def evaluate(objective: str, instance: Instance, schedule: Schedule | Sequence[int],
             phis: RegularFunctionSet | None = None) -> int:
    if objective == "twct":
        return evaluate_twct(instance, schedule)
    if objective == "lmax":
        return evaluate_lmax(instance, schedule)
    if objective == "numlate":
        return evaluate_num_late(instance, schedule)
    if objective == "wlate":
        return evaluate_weighted_late(instance, schedule)
    if objective == "phimax":
        return evaluate_phimax(instance, phis or RegularFunctionSet.lateness(instance), schedule)
    raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


class RegularFunctionSet:
    """Per-job nondecreasing integer cost functions of the completion time.

    Real-valued costs have to be scaled to integers by the caller, e.g.
    ``0.2 t + 15`` becomes ``2 t + 150`` after multiplying by ten.
    """

    def __init__(self, functions: Sequence[Callable[[int], int]], names: Sequence[str] | None = None):
        self.functions = tuple(functions)
        self.names = tuple(names) if names is not None else tuple("custom" for _ in self.functions)

    def __len__(self):
        return len(self.functions)

    def __call__(self, job: int, t: int) -> int:
        return int(self.functions[job - 1](t))

    def check_monotone(self, horizon: int, samples: int = 257) -> None:
        """Sample each function on [0, horizon] and raise if it ever decreases."""
        if horizon <= samples:
            grid = range(horizon + 1)
        else:
            grid = sorted(set(np.linspace(0, horizon, samples).round().astype(int).tolist()))
        for job in range(1, len(self) + 1):
            prev = None
            for t in grid:
                value = self(job, t)
                if prev is not None and value < prev:
                    raise NonMonotoneFunctionError(f"phi_{job} decreases between t={t - 1} and t={t}")
                prev = value

    @classmethod
    def lateness(cls, instance: Instance) -> RegularFunctionSet:
        return cls([(lambda t, d=d: t - d) for d in instance.d], ["lateness"] * instance.n)

    @classmethod
    def weighted_tardiness(cls, instance: Instance) -> RegularFunctionSet:
        return cls([(lambda t, d=d, w=w: w * max(0, t - d)) for w, d in zip(instance.w, instance.d)],
                   ["weighted-tardiness"] * instance.n)

    @classmethod
    def affine(cls, coefficients: Sequence[tuple[int, int]]) -> RegularFunctionSet:
        for a, _ in coefficients:
            if a < 0:
                raise NonMonotoneFunctionError(f"affine slope {a} is negative")
        return cls([(lambda t, a=a, b=b: a * t + b) for a, b in coefficients],
                   [f"affine:{a},{b}" for a, b in coefficients])

    @classmethod
    def from_spec(cls, instance: Instance, tokens: Sequence[str] | None = None) -> RegularFunctionSet:
        """Build from ``phi`` tokens: one family for all jobs or one token per job."""
        tokens = list(instance.phi_spec if tokens is None else tokens)
        if not tokens:
            return cls.lateness(instance)
        if len(tokens) == 1:
            tokens = tokens * instance.n
        if len(tokens) != instance.n:
            raise InvalidInstanceError(f"phi needs 1 or {instance.n} tokens, got {len(tokens)}")
        functions, names = [], []
        for job, token in zip(instance.jobs, tokens):
            if token == "lateness":
                functions.append(lambda t, d=job.d: t - d)
            elif token == "weighted-tardiness":
                functions.append(lambda t, d=job.d, w=job.w: w * max(0, t - d))
            elif token.startswith("affine:"):
                try:
                    a, b = (int(x) for x in token[len("affine:"):].split(","))
                except ValueError as exc:
                    raise InvalidInstanceError(f"bad affine token {token!r}") from exc
                if a < 0:
                    raise NonMonotoneFunctionError(f"affine slope {a} is negative")
                functions.append(lambda t, a=a, b=b: a * t + b)
            else:
                raise InvalidInstanceError(f"unknown phi family {token!r}")
            names.append(token)
        return cls(functions, names)


def parse_instance(text: str) -> Instance:
    """Parse the plain-text instance format.

    Line 1 is ``n S``, followed by n lines ``p w d``; optional ``omega``
    and ``phi`` lines may follow. ``#`` starts a comment.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise InvalidInstanceError("empty instance file")
    header = lines[0].split()
    if len(header) != 2:
        raise InvalidInstanceError(f"header must be 'n S', got {lines[0]!r}")
    try:
        n, capacity = int(header[0]), int(header[1])
    except ValueError as exc:
        raise InvalidInstanceError(f"header must be two integers, got {lines[0]!r}") from exc
    if n < 0 or len(lines) < n + 1:
        raise InvalidInstanceError(f"expected {n} job lines, found {len(lines) - 1}")
    p, w, d = [], [], []
    for k, line in enumerate(lines[1:n + 1], start=1):
        fields = line.split()
        if len(fields) != 3:
            raise InvalidInstanceError(f"job line {k} must have 'p w d', got {line!r}")
        try:
            pk, wk, dk = (int(x) for x in fields)
        except ValueError as exc:
            raise InvalidInstanceError(f"job line {k} is not integral: {line!r}") from exc
        p.append(pk)
        w.append(wk)
        d.append(dk)
    movable = None
    phi: list[str] = []
    for line in lines[n + 1:]:
        key, *rest = line.split()
        if key == "omega":
            try:
                movable = frozenset(int(x) for x in rest)
            except ValueError as exc:
                raise InvalidInstanceError(f"bad omega line {line!r}") from exc
        elif key == "phi":
            phi.extend(rest)
        else:
            raise InvalidInstanceError(f"unexpected line {line!r}")
    return Instance.from_lists(p, w, d, capacity, movable, phi)


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def format_instance(instance: Instance, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{instance.n} {instance.stack_capacity}")
    out.extend(f"{job.p} {job.w} {job.d}" for job in instance.jobs)
    if instance.movable != frozenset(range(1, instance.n + 1)):
        out.append(" ".join(["omega", *(str(j) for j in sorted(instance.movable))]))
    if instance.phi_spec:
        out.append(" ".join(["phi", *instance.phi_spec]))
    return "\n".join(out) + "\n"


def write_instance(instance: Instance, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_instance(instance, comment), encoding="utf-8")
