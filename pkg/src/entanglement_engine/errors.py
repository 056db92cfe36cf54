"""Exception hierarchy shared by the numerical and CLI layers."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(EngineError, ValueError):
    """A physical parameter lies outside its admissible range.

    ``field`` names the offending attribute so that configuration front-ends
    can report a field path.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NonPhysicalState(EngineError, ValueError):
    pass


class DimensionMismatch(EngineError, ValueError):
    pass


class DegenerateSteadyState(EngineError, ArithmeticError):
    pass


class OffGrid(EngineError, ValueError):
    pass


class UncoveredSelector(EngineError, ValueError):
    pass


class ZeroBias(EngineError, ArithmeticError):
    pass


class ZeroCoherence(EngineError, ArithmeticError):
    pass


class ZeroCurrent(EngineError, ArithmeticError):
    pass


class NoSignChange(EngineError, ValueError):
    pass


class ConfigInvalid(EngineError, ValueError):
    exit_code = 2


class NumericalFailure(EngineError, RuntimeError):
    exit_code = 3
