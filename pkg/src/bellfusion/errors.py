"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates an operation's mathematical precondition."""


class DataFormatError(DomainError):
    """An input file or record is malformed.

    ``source`` and ``line`` locate the offending record when known.
    """

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class InvariantError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
