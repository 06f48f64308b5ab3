"""Exception types shared across the package."""


class GcesError(Exception):
    """Base class for package errors."""


class DimensionError(GcesError, ValueError):
    """Operands have incompatible shapes."""


class InvalidStepError(GcesError, ValueError):
    """A step/prox parameter is out of its valid range (e.g. t <= 0)."""


class InvalidRegularizerError(GcesError, ValueError):
    """Regularizer parameters are inconsistent (e.g. negative curvature)."""


class DegenerateStateError(GcesError, RuntimeError):
    """Solver state cannot advance (e.g. sigma = gamma = 0)."""


class LineSearchError(GcesError, RuntimeError):
    """Backtracking failed to terminate; usually a broken smooth oracle."""


class ParseError(GcesError, ValueError):
    """Malformed input file.  Carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class RegistryError(GcesError, KeyError):
    """Unknown dataset name."""


class FetchError(GcesError, RuntimeError):
    """Dataset download failed."""


class IntegrityError(GcesError, RuntimeError):
    """Cached file does not match its recorded checksum."""


class ReferenceFailureError(GcesError, RuntimeError):
    """Reference solve exhausted its budget without cross-agreement."""
