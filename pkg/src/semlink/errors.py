"""Exception types shared across the package.

Everything raised for bad user data derives from ValidationError so the
CLI can map it to a single exit code.
"""


class ValidationError(ValueError):
    """Invalid input data (files, records, shapes, labels)."""


class FileFormatError(ValidationError):
    """A data file violates its documented line format.

    Carries a 1-based line number when one is known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class OutOfVocabularyError(ValidationError):
    """No token of an entity label is present in the word-vector table."""
