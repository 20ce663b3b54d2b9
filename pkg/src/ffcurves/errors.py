"""Exception hierarchy shared by every module."""


class FFCurvesError(Exception):
    """Base class for all library errors."""


class NotPrime(FFCurvesError, ValueError):
    pass


class EvenCharacteristic(FFCurvesError, ValueError):
    pass


class SizeCapExceeded(FFCurvesError, ValueError):
    pass


class NotASubfield(FFCurvesError, ValueError):
    pass


class ZeroForm(FFCurvesError, ValueError):
    pass


class DegenerateLeadingCoefficient(FFCurvesError, ValueError):
    pass


class CoordinateChangeExhausted(FFCurvesError, RuntimeError):
    pass


class DegreeMismatch(FFCurvesError, ValueError):
    pass


class PointNotOnCurve(FFCurvesError, ValueError):
    pass


class SingularPoint(FFCurvesError, ValueError):
    pass


class NonReflexive(FFCurvesError, ValueError):
    pass


class NonIntegralDualDegree(FFCurvesError, ArithmeticError):
    pass


class InsufficientSamplePoints(FFCurvesError, RuntimeError):
    pass


class CoincidentPoints(FFCurvesError, ValueError):
    pass


class CurveContainsLine(FFCurvesError, ValueError):
    pass


class FrobeniusNonClassical(FFCurvesError, ValueError):
    pass


class NotFrobeniusNonClassical(FFCurvesError, ValueError):
    pass


class BudgetExhausted(FFCurvesError, RuntimeError):
    pass


class ParseError(FFCurvesError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class NonHomogeneous(ParseError):
    pass


class BadFieldLiteral(ParseError):
    pass
