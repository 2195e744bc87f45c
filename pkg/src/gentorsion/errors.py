"""Exceptions shared across the toolkit."""


class GroupInputError(ValueError):
    """Invalid group data, or arguments outside an operation's domain."""


class BackendCapabilityError(TypeError):
    """The backend does not support the requested query."""


class TheoremViolationError(RuntimeError):
    """An internally constructed certificate failed its own verification.

    This never fires on valid input; it indicates a bug, so callers should
    not catch it.
    """
