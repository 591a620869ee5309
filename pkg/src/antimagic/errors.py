"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class AntimagicError(Exception):
    """Base class for all errors raised by :mod:`antimagic`."""


class GraphError(AntimagicError, ValueError):
    """Malformed graph input or a structural query that cannot be answered."""


class PreconditionError(AntimagicError, ValueError):
    """An operation was called on input that violates one of its preconditions.

    ``operation`` names the routine and ``condition`` the violated hypothesis,
    so callers (and the CLI) can report exactly what went wrong.
    """

    def __init__(self, operation: str, condition: str, detail: str = ""):
        self.operation = operation
        self.condition = condition
        self.detail = detail
        msg = f"{operation}: precondition violated: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConditionError(AntimagicError, AssertionError):
    """A constructed object failed one of its guaranteed postconditions."""

    def __init__(self, operation: str, condition: str, detail: str = ""):
        self.operation = operation
        self.condition = condition
        self.detail = detail
        msg = f"{operation}: postcondition failed: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class LabelExhaustedError(AntimagicError, RuntimeError):
    """A greedy labelling step found no admissible label."""

    def __init__(self, operation: str, edge: int | None = None, detail: str = ""):
        self.operation = operation
        self.edge = edge
        msg = f"{operation}: no admissible label"
        if edge is not None:
            msg += f" for edge {edge}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class TrialsExhaustedError(AntimagicError, RuntimeError):
    """A randomised construction failed in every allowed trial.

    ``best`` carries the best attempt seen, for diagnostics.
    """

    def __init__(self, operation: str, trials: int, best=None, detail: str = ""):
        self.operation = operation
        self.trials = trials
        self.best = best
        msg = f"{operation}: failed in all {trials} trials"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class BudgetExceededError(AntimagicError, RuntimeError):
    """Exhaustive search stopped before covering its search space."""


class PipelineError(AntimagicError, RuntimeError):
    """A labelling pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: BaseException | str):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage} failed: {cause}")
