"""Exception hierarchy.

Everything raised deliberately by the library derives from ``VivochanError``.
The CLI maps :class:`ValidationError` (and subclasses) to exit code 2 and
:class:`DataError` (and subclasses) to exit code 3.
"""


class VivochanError(Exception):
    """Base class for library errors."""


class ValidationError(VivochanError, ValueError):
    """An input violates a documented invariant or precondition."""


class DomainError(ValidationError):
    """A numeric argument lies outside the mathematical domain of an operation."""


class FrequencyRangeError(ValidationError):
    """A frequency lies outside a tissue's valid range."""

    def __init__(self, tissue, frequency, bound, bound_value):
        self.tissue = tissue
        self.frequency = frequency
        self.bound = bound
        self.bound_value = bound_value
        super().__init__(
            f"frequency {frequency:.6g} Hz outside valid range of tissue "
            f"{tissue!r}: {bound} = {bound_value:.6g} Hz"
        )


class UnknownLabelError(ValidationError, LookupError):
    """A named entry (preset, tissue, band) was not found."""

    def __init__(self, kind, label, valid):
        self.kind = kind
        self.label = label
        self.valid = list(valid)
        super().__init__(
            f"unknown {kind} {label!r}; valid: {', '.join(self.valid)}"
        )


class DataError(VivochanError):
    """Runtime or data problem (unreadable file, inconsistent dataset)."""


class ParseError(DataError, ValueError):
    """A data file could not be parsed."""

    def __init__(self, message, record=None):
        self.record = record
        if record is not None:
            message = f"record {record}: {message}"
        super().__init__(message)


class ConfigurationError(DataError):
    """Required configuration (e.g. a tissue mass density) is missing."""
