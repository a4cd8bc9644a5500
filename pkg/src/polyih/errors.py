"""Exception types raised across the package."""


class PolyIHError(Exception):
    """Base class for every error raised by polyih."""


class ValidationError(PolyIHError):
    """Input data violates a structural invariant."""

    invariant = "validation"


class NonClosedFiltration(ValidationError):
    invariant = "closed-filtration"


class EmptyRegularPart(ValidationError):
    invariant = "nonempty-regular-part"


class UnknownStratum(ValidationError):
    invariant = "known-stratum"


class NotInRealization(ValidationError):
    invariant = "image-in-realization"


class NotStratified(ValidationError):
    invariant = "stratified-map"


class CoverNotOpen(ValidationError):
    invariant = "open-cover"


class SamplingExhausted(PolyIHError):
    """Rejection sampling of a pseudo-barycentre ran out of attempts."""


class InvariantViolation(PolyIHError):
    """A post-hoc structural check on a constructed object failed."""


class NotMinimal(PolyIHError):
    """The critical-face set of a subdivision cell has no minimum."""


class ParseError(PolyIHError):
    """A document could not be parsed; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
