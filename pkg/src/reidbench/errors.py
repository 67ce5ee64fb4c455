"""Exception hierarchy.

``ValidationError`` covers everything caused by bad input data or bad
arguments; the CLI maps it to exit code 2.
"""


class ReidBenchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ReidBenchError):
    """Invalid input data or arguments."""


# --- manifest / embedding / detection ingestion ---------------------------

class MissingColumn(ValidationError):
    pass


class DuplicateImageId(ValidationError):
    pass


class DuplicateEmbeddingIndex(ValidationError):
    pass


class NegativeLabel(ValidationError):
    pass


class BadSplitValue(ValidationError):
    pass


class QueryWithoutGalleryMatch(ValidationError):
    pass


class BadMagic(ValidationError):
    pass


class VersionUnsupported(ValidationError):
    pass


class TruncatedPayload(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class EmptyStore(ValidationError):
    pass


class MalformedLine(ValidationError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class NegativeDimension(ValidationError):
    pass


class OutOfRangeIndex(ValidationError):
    pass


# --- standard retrieval evaluation -----------------------------------------

class DimensionMismatch(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class EmptyGalleryAfterFilter(ReidBenchError):
    pass


class NoMatchInGallery(ReidBenchError):
    def __init__(self, query_id: str):
        self.query_id = query_id
        super().__init__(f"query {query_id!r} has no true match in the gallery")


class EmptySplit(ValidationError):
    pass


# --- training-set combination ----------------------------------------------

class TooFewSources(ValidationError):
    pass


class ExcludedNotFound(ValidationError):
    pass


class QuotaExceedsSource(ValidationError):
    pass


# --- live evaluation --------------------------------------------------------

class NoTrials(ValidationError):
    pass


# --- statistics and reporting ------------------------------------------------

class EmptySelection(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class ZeroVarianceDifferences(ValidationError):
    pass


class InconsistentKeys(ValidationError):
    pass
