"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class ExponentRangeError(OverflowError):
    """An exponent of the dual density exceeded the configured cap.

    ``node`` is the index of the first offending quadrature node.
    """

    def __init__(self, message, node):
        super().__init__(message)
        self.node = node


class SolverError(RuntimeError):
    """The dual minimization produced a non-finite state it could not recover from."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
