"""
Errors contains the exceptions raised by riembill.

Two families exist. ValidationError sub-classes signal bad input such as a
malformed configuration, a curve that is not strictly convex or an
impossible ellipse radius. NumericalError sub-classes signal that a
numerical procedure could not deliver its result within its budgets.
The command line tool maps the first family to exit code 1 and the second
to exit code 2.
"""


class RiembillError(Exception):
    """Parent of every riembill exception. Keyword payloads are kept as
    attributes so callers can inspect partial results."""
    def __init__(self, message="", **payload):
        super(RiembillError, self).__init__(message)
        self.message = message
        for key, value in payload.items():
            setattr(self, key, value)


# ---------------------------------------------------------------- validation
class ValidationError(RiembillError):
    pass

class ConfigError(ValidationError):
    pass

class InvalidCurve(ValidationError):
    pass

class InvalidRadius(ValidationError):
    pass

class CompletionInfeasible(ValidationError):
    pass

class DegenerateEndpoints(ValidationError):
    pass


# ----------------------------------------------------------------- numerical
class NumericalError(RiembillError):
    pass

class ChartDomainExceeded(NumericalError):
    pass

class NoConvergence(NumericalError):
    pass

class NoHitWithinBudget(NumericalError):
    pass

class Trapped(NumericalError):
    """Raised when a ray exhausts its order or time budget. The partial
    trajectory is available as the ``trajectory`` attribute."""
    pass

class ShootingFailed(NumericalError):
    pass

class AmbiguousChaining(NumericalError):
    pass

class OrderBoundViolation(NumericalError):
    """Raised when a complete trajectory breaks order*d_K <= time <=
    (order+1)*diam_S. The trajectory is the ``trajectory`` attribute."""
    pass

class UnpairedEndpoint(NumericalError):
    pass

class StratumInconsistency(NumericalError):
    pass

class CountMismatch(NumericalError):
    pass

class NoIntegerSolution(NumericalError):
    """Obstacle count has no integer solution. ``candidates`` and
    ``residual`` describe the nearest integers."""
    pass

class StitchFailure(NumericalError):
    pass

class NoIntersection(NumericalError):
    pass

class DivergedEnvelope(NumericalError):
    pass

class Ambiguity(NumericalError):
    pass

class IncompleteCoverage(NumericalError):
    pass
