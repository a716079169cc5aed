"""Exception hierarchy.

The CLI maps these onto exit codes: ``ConfigError`` -> 2, ``DataError`` -> 3,
``NumericalError`` -> 4.
"""


class RstSentError(Exception):
    pass


class ConfigError(RstSentError, ValueError):
    pass


class DataError(RstSentError):
    pass


class RstFormatError(DataError):
    """Raised for malformed tree files. ``position`` is a character offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class LexiconError(DataError):
    pass


class CorpusError(DataError):
    pass


class NumericalError(RstSentError):
    pass
