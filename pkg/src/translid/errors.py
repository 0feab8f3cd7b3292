"""Exception types shared across the package."""


class TranslidError(Exception):
    """Base class for all package errors."""


class CorpusError(TranslidError):
    """Bad or empty input corpus."""


class PatternError(TranslidError):
    """Malformed hyphenation pattern file."""


class EncodingError(TranslidError):
    """Token cannot be mapped to an id."""


class ModelFileError(TranslidError):
    """Corrupt or unreadable model file."""


class ModeMismatchError(TranslidError):
    """Model was trained with a different tokenizer mode or pattern set."""


class NumericError(TranslidError):
    """Training produced a non-finite loss."""
