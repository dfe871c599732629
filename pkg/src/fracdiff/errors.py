"""Exception hierarchy shared by all fracdiff modules."""


class FracDiffError(ValueError):
    """Base class for every error raised by fracdiff."""


# problem statement
class OrderOutOfRange(FracDiffError):
    pass


class NonPositiveDiffusivity(FracDiffError):
    pass


class DegenerateGrid(FracDiffError):
    pass


class MissingInitialRate(FracDiffError):
    pass


# numerics
class PoleArgument(FracDiffError):
    pass


class InvalidCount(FracDiffError):
    pass


class IndexOutOfRange(FracDiffError, IndexError):
    pass


class NonPositiveTime(FracDiffError):
    pass


class SingularSystem(FracDiffError):
    pass


class Diverged(FracDiffError):
    """Raised by a single time step whose output blew up.

    ``level`` is the time level that failed and ``values`` the offending
    nodal vector, kept so the driver can store the partial solution.
    """

    def __init__(self, message, level=None, values=None):
        super().__init__(message)
        self.level = level
        self.values = values


# verification
class InvalidPower(FracDiffError):
    pass


class NonConstantBCs(FracDiffError):
    pass


class UnstableMember(FracDiffError):
    pass


# configuration
class ConfigError(FracDiffError):
    """Configuration problem located at ``line``/``column`` (1-based, optional)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class UnknownKey(ConfigError):
    pass


class MalformedValue(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass
