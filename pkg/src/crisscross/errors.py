"""Exception hierarchy shared by every module."""


class CrissCrossError(Exception):
    """Base class for all library errors."""


class InputError(CrissCrossError, ValueError):
    """Invalid arguments: bad indices, dimension mismatch, out-of-range params."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DecodeFailure(CrissCrossError):
    """The received data is not consistent with any codeword."""


class EnumerationRefused(CrissCrossError):
    """An exhaustive job would exceed its configured guard."""


class AmbiguousDecoding(DecodeFailure):
    """Several codewords of the coset explain the same received grid.

    ``candidates`` holds ``(codeword, row, col)`` triples, one per distinct codeword.
    """

    def __init__(self, message: str, candidates: tuple = ()):
        self.candidates = candidates
        super().__init__(message)
