"""Exception types shared across the package.

The CLI maps these onto exit codes: parse problems exit 2, numeric/domain
problems exit 3.
"""


class WordFSError(Exception):
    """Base class for all package errors."""


class ParseError(WordFSError, ValueError):
    """Malformed input file or record."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class DomainError(WordFSError, ValueError):
    """Numerically or structurally invalid request (rank, sizes, zero norms)."""
