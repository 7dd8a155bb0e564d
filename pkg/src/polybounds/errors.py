"""Exception hierarchy; each class maps to a distinct CLI exit code."""


class PolyboundsError(Exception):
    exit_code = 10


class ConfigError(PolyboundsError, ValueError):
    exit_code = 2


class SolverError(PolyboundsError, RuntimeError):
    """Factorization failure or too few converged eigenvalues."""

    exit_code = 3


class NoAdmissibleSigmaError(PolyboundsError, ValueError):
    exit_code = 4


class InconsistentPrefixError(PolyboundsError, ValueError):
    """A spectrum prefix for which a universal inequality has no real solution."""

    exit_code = 7


class ReportIOError(PolyboundsError, OSError):
    exit_code = 5


EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_DEGENERATE_ONLY = 6
