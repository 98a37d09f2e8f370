"""Exception types shared across the pipeline.

Every error raised on purpose by this package derives from MythforgeError,
so callers (and the build report) can count failures by class name.
"""


class MythforgeError(Exception):
    """Base class for all package errors."""


class InvalidIri(MythforgeError):
    """IRI is relative, contains forbidden characters, or is empty."""


class InvalidLiteral(MythforgeError):
    """Literal breaks a datatype rule enforced at construction."""


class InvalidSegment(MythforgeError):
    """mint_iri got an empty segment list or a malformed segment."""


class PrefixError(MythforgeError):
    """Unknown or duplicate prefix label."""


class SchemaError(MythforgeError):
    """Input table is missing a mapped column."""


class RowError(MythforgeError):
    """A data row does not match the header width."""

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row


class NoiseError(MythforgeError):
    """Serialized-array cell noise that cannot be decoded."""


class EmptyField(MythforgeError):
    """A required raw field is empty."""


class EmptySlug(MythforgeError):
    """Slugification left nothing (input had no alphanumerics)."""


class TimeFormatError(MythforgeError):
    """Unparseable century/year/datetime cell. Non-fatal in the pipeline."""


class RomanError(MythforgeError):
    """Not a canonical Roman numeral in 1..3999."""


class CitationError(MythforgeError):
    """Canonical citation with a malformed passage (for example M < N)."""


class UnknownWork(MythforgeError):
    """Work name absent from the registry."""


class ConfigError(MythforgeError):
    """Bad or missing configuration."""


class IntegrityError(MythforgeError):
    """Dataset breaks a structural invariant (dangling refs, bad head...)."""

    def __init__(self, message: str, offenders: list | None = None):
        super().__init__(message)
        self.offenders = list(offenders or [])


class ParseError(MythforgeError):
    """Bad N-Quads input."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class QueryParseError(MythforgeError):
    """Query text outside the supported subset."""

    def __init__(self, message: str, position: int = 0, expected: tuple = ()):
        super().__init__(message)
        self.position = position
        self.expected = tuple(expected)
