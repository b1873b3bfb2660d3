"""Exception hierarchy shared by all warplab modules.

Every failure mode surfaces as one of these types so callers can tell a bad
argument (DomainError, RangeError) from a bad configuration (ConfigurationError,
ConstructionError), an unmet caller obligation (PreconditionError), or a
numerical breakdown (IntegrationError, SolverError).
"""


class WarplabError(Exception):
    """Base class for all warplab errors."""


class DomainError(WarplabError, ValueError):
    """Argument lies outside the mathematical domain of an operation."""


class RangeError(WarplabError, ValueError):
    """Query point lies outside tabulated data."""


class ConfigurationError(WarplabError, ValueError):
    """Inconsistent or unsupported configuration values."""


class ConstructionError(WarplabError, ValueError):
    """An object cannot be built from the given ingredients."""


class PreconditionError(WarplabError, ValueError):
    """A documented caller obligation was violated."""


class IntegrationError(WarplabError, RuntimeError):
    """An ODE or quadrature routine failed to reach its target accuracy."""


class SolverError(WarplabError, RuntimeError):
    """A linear or nonlinear solve failed or produced an invalid state."""
