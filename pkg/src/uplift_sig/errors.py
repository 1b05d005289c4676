"""Exception hierarchy shared by every module of the package."""


class UpliftError(Exception):
    """Base class for all errors raised by uplift_sig."""


class InvalidArgument(UpliftError, ValueError):
    """An argument lies outside the domain of the function."""


class DegenerateGroup(UpliftError):
    """A target or control group is empty (or too small) for the computation."""


class VarianceDegenerate(UpliftError):
    """An estimated variance vanishes, so the reference distribution is invalid."""


class ValidationError(UpliftError, ValueError):
    """Counts violate the data model (negative, fractional, responders > total)."""


class SchemaError(UpliftError, ValueError):
    """An input file lacks required columns or (subgroup, group) combinations."""


class ParseError(UpliftError, ValueError):
    """A row of an input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
