"""Exception hierarchy shared across the package."""


class EnzPairError(Exception):
    """Base class; the CLI turns these into machine-readable error JSON."""

    code = "error"


class DomainError(EnzPairError, ValueError):
    code = "domain_error"


class NoCrossing(EnzPairError):
    code = "no_crossing"


class DegenerateIndex(EnzPairError, ValueError):
    code = "degenerate_index"


class NonAsymptoticStart(EnzPairError):
    code = "non_asymptotic_start"


class StepFailure(EnzPairError):
    code = "step_failure"


class NonFinite(EnzPairError):
    code = "non_finite"


class EmptySpectrum(EnzPairError, ValueError):
    code = "empty_spectrum"


class ParseError(EnzPairError):
    code = "parse_error"

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(EnzPairError, ValueError):
    code = "validation_error"

    def __init__(self, key, constraint):
        super().__init__(f"{key}: {constraint}")
        self.key = key
        self.constraint = constraint
