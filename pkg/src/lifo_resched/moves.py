"""LIFO move semantics.

A move ``i -> j`` takes job i off the line into the stack and puts it back
right after job j, so it can only postpone. Two moves are compatible when
they are sequential or nested; the nesting depth (level) of a move family
is the stack capacity it needs.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityExceededError, IncompatibleMovesError, InvalidInstanceError
from .model import Instance, Schedule, check_permutation


@dataclass(frozen=True, order=True)
class Move:
    source: int
    target: int

    def __post_init__(self):
        if self.source < 1 or self.target < self.source:
            raise IncompatibleMovesError(f"move {self.source}->{self.target} does not postpone")

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def __str__(self):
        return f"{self.source}->{self.target}"


class MoveSet:
    """A laminar family of postponing moves with distinct sources.

    Identity moves are accepted and dropped; they never occupy the stack.
    """

    __slots__ = ("moves", "_levels")

    def __init__(self, moves: Iterable[Move | tuple[int, int]] = ()):
        items = []
        for move in moves:
            if not isinstance(move, Move):
                move = Move(*move)
            if not move.is_identity:
                items.append(move)
        items.sort()
        sources = [m.source for m in items]
        if len(set(sources)) != len(sources):
            raise IncompatibleMovesError("two moves share the same source job")
        check_compatible(items)
        self.moves: tuple[Move, ...] = tuple(items)
        self._levels = _levels(self.moves)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> MoveSet:
        return cls(Move(int(i), int(j)) for i, j in pairs)

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def __eq__(self, other):
        if not isinstance(other, MoveSet):
            return NotImplemented
        return self.moves == other.moves

    def __hash__(self):
        return hash(self.moves)

    def __repr__(self):
        return "MoveSet({" + ", ".join(map(str, self.moves)) + "})"

    def pairs(self) -> list[tuple[int, int]]:
        return [(m.source, m.target) for m in self.moves]

    def level(self, move: Move | tuple[int, int]) -> int:
        if not isinstance(move, Move):
            move = Move(*move)
        if move.is_identity:
            return 1
        return self._levels[move]

    @property
    def levels(self) -> dict[Move, int]:
        return dict(self._levels)

    @property
    def required_capacity(self) -> int:
        return max(self._levels.values(), default=0)

    @property
    def sources(self) -> frozenset[int]:
        return frozenset(m.source for m in self.moves)


def check_compatible(moves: Sequence[Move]) -> None:
    """Raise unless every pair of moves is sequential or nested.

    ``moves`` must be sorted by source. A move starting exactly at the
    target of an open move crosses it and is rejected.
    """
    open_moves: list[Move] = []
    for move in moves:
        while open_moves and open_moves[-1].target < move.source:
            open_moves.pop()
        if open_moves and move.target > open_moves[-1].target:
            raise IncompatibleMovesError(f"moves {open_moves[-1]} and {move} overlap without nesting")
        open_moves.append(move)


def _levels(moves: Sequence[Move]) -> dict[Move, int]:
    levels: dict[Move, int] = {}
    for idx in range(len(moves) - 1, -1, -1):
        move = moves[idx]
        inner = 0
        for other in moves[idx + 1:]:
            if other.source > move.target:
                break
            inner = max(inner, levels[other])
        levels[move] = inner + 1
    return levels


@dataclass(frozen=True)
class StackTrace:
    """What the device did while scanning the original sequence.

    ``occupancy[k-1]`` is the number of jobs in the stack after position k
    has been handled. ``events`` holds ``(step, kind, job, occupancy)``
    tuples with kind one of ``push``, ``emit``, ``pop``.
    """

    occupancy: tuple[int, ...]
    events: tuple[tuple[int, str, int, int], ...]
    order: tuple[int, ...]

    @property
    def max_occupancy(self) -> int:
        return max(self.occupancy, default=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "occupancy", "event"])
        for step, kind, job, occ in self.events:
            writer.writerow([step, occ, f"{kind} {job}"])
        return buf.getvalue()


def simulate(n: int, move_set: MoveSet) -> StackTrace:
    """Run the stack device over positions 1..n in index order."""
    target = {m.source: m.target for m in move_set}
    if any(t > n for t in target.values()):
        raise InvalidInstanceError(f"a move targets a job beyond n={n}")
    stack: list[int] = []
    out: list[int] = []
    occupancy: list[int] = []
    events: list[tuple[int, str, int, int]] = []
    for k in range(1, n + 1):
        if k in target:
            stack.append(k)
            events.append((k, "push", k, len(stack)))
        else:
            out.append(k)
            events.append((k, "emit", k, len(stack)))
        while stack and target[stack[-1]] == k:
            job = stack.pop()
            out.append(job)
            events.append((k, "pop", job, len(stack)))
        occupancy.append(len(stack))
    if stack:
        raise IncompatibleMovesError(f"jobs {stack} never leave the stack")
    return StackTrace(tuple(occupancy), tuple(events), tuple(out))


def apply_moves(instance: Instance, move_set: MoveSet | Iterable[tuple[int, int]],
                capacity: int | None = None) -> tuple[Schedule, StackTrace]:
    """Apply a compatible move set to the initial sequence.

    Raises :class:`CapacityExceededError` when the stack would need more
    than ``capacity`` slots (default: the instance's capacity).
    """
    if not isinstance(move_set, MoveSet):
        move_set = MoveSet.from_pairs(move_set)
    trace = simulate(instance.n, move_set)
    capacity = instance.stack_capacity if capacity is None else capacity
    if trace.max_occupancy > capacity:
        raise CapacityExceededError(trace.max_occupancy, capacity)
    return Schedule.from_order(instance, trace.order), trace


def apply_moves_nested(n: int, move_set: MoveSet) -> tuple[int, ...]:
    """Build the final order by expanding each outermost move recursively.

    Independent of the left-to-right stack scan in :func:`simulate`; used to
    check that the result does not depend on the processing policy.
    """
    target = {m.source: m.target for m in move_set}

    def expand(lo: int, hi: int) -> list[int]:
        out: list[int] = []
        k = lo
        while k <= hi:
            if k in target:
                out.extend(expand(k + 1, target[k]))
                out.append(k)
                k = target[k] + 1
            else:
                out.append(k)
                k += 1
        return out

    return tuple(expand(1, n))


def _reconstruct(order: Sequence[int]) -> MoveSet | None:
    n = len(order)
    pairs = []
    running = 0
    for job in order:
        if running > job:
            pairs.append((job, running))
        running = max(running, job)
    try:
        move_set = MoveSet.from_pairs(pairs)
        trace = simulate(n, move_set)
    except (IncompatibleMovesError, InvalidInstanceError):
        return None
    if trace.order != tuple(order):
        return None
    return move_set


def reconstruct_move_set(instance: Instance | int, target: Sequence[int]) -> MoveSet | None:
    """Return the unique move set turning the initial sequence into ``target``.

    Job i is moved iff some larger job precedes it; its destination is the
    largest such job. ``None`` means the order is not reachable by any
    compatible move family.
    """
    n = instance if isinstance(instance, int) else instance.n
    target = tuple(int(j) for j in target)
    check_permutation(n, target)
    return _reconstruct(target)


def is_reachable(instance: Instance | int, target: Sequence[int], capacity: int | None = None) -> bool:
    if capacity is None:
        if isinstance(instance, int):
            raise ValueError("capacity is required when only n is given")
        capacity = instance.stack_capacity
    move_set = reconstruct_move_set(instance, target)
    return move_set is not None and move_set.required_capacity <= capacity


def stack_metrics(trace: StackTrace) -> tuple[int, int, float]:
    """Return ``(moves, max occupancy, mean occupancy over steps 1..n-1)``."""
    moves = sum(1 for _, kind, _, _ in trace.events if kind == "push")
    samples = trace.occupancy[:-1]
    avg = sum(samples) / len(samples) if samples else 0.0
    return moves, trace.max_occupancy, avg


def parse_move_script(text: str) -> MoveSet:
    """One ``i j`` pair per line; blank lines and ``#`` comments ignored."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace("->", " ").split()
        if len(fields) != 2:
            raise InvalidInstanceError(f"move line {lineno} must be 'i j', got {raw!r}")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError as exc:
            raise InvalidInstanceError(f"move line {lineno} is not integral: {raw!r}") from exc
    return MoveSet.from_pairs(pairs)


def format_move_script(move_set: MoveSet) -> str:
    return "".join(f"{m.source} {m.target}\n" for m in move_set)
