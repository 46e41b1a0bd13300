"""Exception types shared across the package."""


class DynHubError(Exception):
    """Base class for all errors raised by dynhub."""


class DuplicateInsert(DynHubError):
    pass


class MissingDelete(DynHubError):
    pass


class OutOfRangeVertex(DynHubError, IndexError):
    pass


class InvalidWeight(DynHubError, ValueError):
    pass


class TraceSyntaxError(DynHubError, SyntaxError):
    """Malformed trace line. ``lineno`` is 1-based."""

    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InfeasibleConfig(DynHubError, ValueError):
    pass


class HierarchyResampleExhausted(DynHubError):
    pass


class HubCapExceeded(DynHubError):
    pass


class SlotPoolExhausted(DynHubError):
    pass


class UnsupportedUpdate(DynHubError):
    pass


class InvalidRho(DynHubError, ValueError):
    pass


class OracleSpecError(DynHubError, ValueError):
    pass


class VerificationFailure(DynHubError):
    pass
