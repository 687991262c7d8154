class GraphSmoothError(Exception):
    """Base class for all errors raised by graphsmooth."""


class ValidationError(GraphSmoothError, ValueError):
    """Bad parameters, configuration, or inconsistent inputs."""


class TopologyError(ValidationError):
    """Signals, guidance, or filters defined on different topologies."""


class FormatError(GraphSmoothError, ValueError):
    """A file could not be parsed.

    ``line`` is the 1-based line number of the offending record when known.
    """

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


class NumericError(GraphSmoothError, ArithmeticError):
    """Non-finite values appeared during an iteration."""
