"""Exception hierarchy for asakit."""


class AsaError(Exception):
    """Base class for all library errors."""


class InvalidBody(AsaError, ValueError):
    """Body description violates a structural invariant."""


class BodySpecError(InvalidBody):
    """Malformed JSON body specification."""


class SingularMatrix(AsaError, ValueError):
    pass


class NonRegularNormal(AsaError):
    """The direction exposes a face of dimension >= 1."""


class NonRegularPoint(AsaError):
    """The boundary point has more than one outer unit normal."""


class NotAVertex(AsaError, ValueError):
    pass


class HessianUnavailable(AsaError):
    """Support-function Hessian could not be formed reliably."""


class DegenerateCurvature(AsaError):
    """Curvature function is not finite at a quadrature node."""


class ZeroCurvatureFunction(AsaError):
    pass


class OriginNotInterior(AsaError, ValueError):
    """Some support value is <= 0, so the origin is not an interior point."""


class HullUnavailable(AsaError):
    pass


class NumericalFailure(AsaError):
    pass


class NonConvergence(AsaError, RuntimeWarning):
    """Optimizer stopped on its iteration budget; the best value so far is returned."""
