"""Exception types shared across modules."""


class CapExceededError(RuntimeError):
    """A structure grew past its configured size cap."""


class NotInitiallyConnectedError(ValueError):
    """An initialized automaton does not reach every state."""


class ThresholdExceededError(RuntimeError):
    """An exhaustive check was requested above the interpretation budget."""
