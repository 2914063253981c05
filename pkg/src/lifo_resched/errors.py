"""Exception hierarchy shared by the solvers and the CLI."""


class ReschedError(Exception):
    """Base class for all library errors."""


class InvalidInstanceError(ReschedError, ValueError):
    """Malformed instance data or instance file."""


class InvalidScheduleError(ReschedError, ValueError):
    """A schedule order that is not a permutation of the instance's jobs."""


class IncompatibleMovesError(ReschedError, ValueError):
    """Two moves that are neither sequential nor nested."""


class CapacityExceededError(ReschedError):
    """A move set whose nesting depth is larger than the stack capacity."""

    def __init__(self, required: int, capacity: int):
        super().__init__(f"move set needs a stack of {required}, capacity is {capacity}")
        self.required = required
        self.capacity = capacity


class NonMonotoneFunctionError(ReschedError, ValueError):
    """A cost function phi_j that decreases somewhere on the sampled horizon."""


class ResourceLimitError(ReschedError, MemoryError):
    """A dynamic program whose tables would not fit in the memory budget."""

    def __init__(self, required_bytes: int, budget_bytes: int, what: str = "tables"):
        super().__init__(
            f"{what} need about {required_bytes / 2**20:.1f} MiB "
            f"({required_bytes} bytes), budget is {budget_bytes / 2**20:.1f} MiB"
        )
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes


class OracleLimitError(ReschedError, ValueError):
    """Brute-force enumeration requested above the configured job limit."""
