"""Exact query-complexity laboratory for oracles with internal randomness."""
from . import kernels
from .errors import (
    CapExceeded,
    ConfigurationError,
    ContractViolation,
    DefectError,
    EmptySetError,
    RandOracleError,
    SchemaError,
)
from .config import caps, override_caps

__version__ = "0.1.0"
