"""Exception hierarchy shared by every package.

The CLI maps ``exit_code`` onto the process exit status.
"""


class PklError(Exception):
    exit_code = 1


class PreconditionError(PklError, ValueError):
    """A documented precondition of an operation does not hold."""
    exit_code = 2


class DimensionMismatchError(PreconditionError):
    pass


class DegreeLimitError(PreconditionError):
    pass


class HypothesisError(PreconditionError):
    """A bound was requested outside the domain where it is proven.

    ``inequality`` names the hypothesis that failed.
    """

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        message = f"hypothesis failed: {inequality}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class CertificateError(PreconditionError):
    def __init__(self, message: str, node=None, value=None):
        self.node = node
        self.value = value
        super().__init__(message)


class CapacityError(PreconditionError):
    pass


class ConstructionError(PklError):
    exit_code = 2


class SolverError(PklError):
    exit_code = 3

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class ConfigError(PklError, ValueError):
    """config.yaml is missing, unreadable or fails validation."""
    exit_code = 1
