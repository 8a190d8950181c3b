"""Exception hierarchy.

Every error raised on purpose by the package derives from ``BilliardError``
so callers (and the CLI) can catch one type.
"""


class BilliardError(Exception):
    pass


class NumericalFailure(BilliardError):
    """A computed result failed its own postcondition check."""


class SingularMatrix(NumericalFailure):
    pass


class RankDeficient(NumericalFailure):
    pass


class DegenerateCircle(BilliardError, ValueError):
    """Billiard too close to a circle for the caustic formulas (0/0)."""


class NoRightOrbit(BilliardError, ValueError):
    pass


class DegenerateTriangle(BilliardError, ValueError):
    pass


class PointAtInfinity(BilliardError, ValueError):
    pass


class UnknownCenter(BilliardError, KeyError):
    pass


class DegenerateCevian(BilliardError, ValueError):
    pass


class DegenerateConic(BilliardError, ValueError):
    pass


class ImaginaryAxis(DegenerateConic):
    pass


class DegenerateToLines(DegenerateConic):
    """Rectangular hyperbola collapsed to a pair of lines (isosceles input)."""


class NullSpaceDimension(NumericalFailure):
    pass


class ClosureFailure(NumericalFailure):
    pass


class NotRight(BilliardError, ValueError):
    pass
