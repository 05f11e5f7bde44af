"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ParseError(ValueError):
    """A graph file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(where + message)


class ConfigError(ValueError):
    """A run configuration is malformed or describes an invalid instance."""


class IntegrationError(ArithmeticError):
    """The integrator left the probability simplex by more than roundoff.

    Usually means the step size is too large for the rates involved.
    """

    def __init__(self, message, time):
        self.time = time
        super().__init__(f"{message} (t={time:.17g})")
