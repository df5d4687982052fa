"""Exception hierarchy.

Everything raised for a mathematically invalid input derives from
:class:`GeometryError`, so callers (the CLI in particular) can separate
domain failures from programming errors.
"""


class GeometryError(ValueError):
    pass


class AlgebraMismatchError(GeometryError):
    pass


class NotAUnitError(GeometryError, ArithmeticError):
    pass


class SpaceMismatchError(GeometryError):
    pass


class LinearDependenceError(GeometryError):
    pass


class DegenerateSpanError(GeometryError):
    """No vector (or pair) with unit self-product remains in the span."""


class IsotropicPointError(GeometryError):
    pass


class BadPointError(GeometryError):
    """Vector is not a good point, so it has no projective class."""


class SingularPointError(GeometryError):
    pass


class BaseMismatchError(GeometryError):
    pass


class ZeroTangentError(GeometryError):
    pass


class NonRealSpanError(GeometryError):
    pass


class NullGeodesicError(GeometryError):
    pass


class DegeneratePlaneError(GeometryError):
    """The metric restricted to the plane is degenerate; K is undefined."""


class ZeroTanceError(GeometryError):
    pass


class SignatureNotConstantError(GeometryError):
    pass
