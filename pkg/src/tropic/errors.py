"""Exception hierarchy shared across the package.

Each class maps to one CLI exit code; see ``tropic.cli``.
"""


class TropicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TropicError):
    """Input text does not conform to the polynomial-system grammar."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ConfigError(TropicError):
    """Invalid run configuration (bad flag combination, non-real input in real mode, ...)."""


class TrackingError(TropicError):
    """A continuation path could not be completed."""


class SolveFailure(TropicError):
    """A polynomial solve produced no usable solutions."""


class ComponentError(TropicError):
    """No curve component could be identified in the input system."""


class AggregationError(TropicError):
    """Ray multiplicities did not aggregate to integers (paths were lost)."""


class BezoutCapError(TropicError):
    """A total-degree solve would exceed the configured path-count cap."""


class PatchError(TropicError):
    """No usable affine patch vector could be found."""


class ValuationError(TropicError):
    """Coefficient search exhausted its exponent cap (coordinate numerically zero)."""
