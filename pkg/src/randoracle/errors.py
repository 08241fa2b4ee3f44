"""Exception hierarchy shared by every layer of the package."""


class RandOracleError(Exception):
    """Base class for all package errors."""


class ContractViolation(RandOracleError, ValueError):
    """An argument broke an operation's precondition."""


class EmptySetError(ContractViolation):
    """The requested combinatorial family is empty."""


class ConfigurationError(ContractViolation):
    """A constructor was asked for an unsupported configuration."""


class CapExceeded(RandOracleError):
    """Refusal: the computation would exceed a configured size cap."""


class SchemaError(RandOracleError, ValueError):
    """A problem document failed validation.

    ``path`` locates the offending field (JSON-pointer style).
    """

    def __init__(self, message, path="/"):
        super().__init__(f"{path}: {message}")
        self.path = path


class DefectError(RandOracleError, AssertionError):
    """An identity that must always hold was violated."""
