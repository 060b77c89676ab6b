"""Exception hierarchy.

The CLI maps the three families below onto exit codes: configuration
problems exit 2, bad input data exits 3, numerical failures exit 4.
"""


class ReradError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ReradError, ValueError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class DataError(ReradError, ValueError):
    pass


class MalformedFile(DataError):
    pass


class NonMonotoneGrid(DataError):
    pass


class NegativeCoefficient(DataError):
    pass


class EmptyGrid(DataError):
    pass


class OutOfRange(DataError):
    pass


class UnknownSpecies(DataError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidInput(ReradError, ValueError):
    """A physical argument lies outside the domain of the formula."""


class NonPositiveInput(InvalidInput):
    pass


class NonPositiveFrequency(NonPositiveInput):
    pass


class NegativeAbsorption(InvalidInput):
    pass


class NotPerfectSquare(InvalidInput):
    pass


class NonPositiveSpacing(InvalidInput):
    pass


class OverlappingElements(InvalidInput):
    pass


class PureLoS(InvalidInput):
    """Rician decomposition requested for a channel with no re-radiation."""


class NonPositivePower(InvalidInput):
    pass


class NumericalError(ReradError, ArithmeticError):
    pass


class NumericalFailure(NumericalError):
    pass


class AllZeroGains(NumericalError):
    pass
