"""Exception types shared across the library."""


class CurvlabError(Exception):
    """Base class for all library errors."""


class InvalidParams(CurvlabError):
    """A parameter violates one of the admissibility inequalities.

    The message names the violated inequality.
    """


class GridMismatch(CurvlabError):
    """Two sampled profile triples live on different grids or spaces."""


class ShootingFailed(CurvlabError):
    """The bump-function shooting search did not converge."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = residuals or {}


class OutOfRange(CurvlabError):
    """Evaluation point outside the operation's admissible interval."""


class PoleEvaluationFailed(CurvlabError):
    """Richardson extrapolation at a pole disagrees between two orders."""


class NonPositiveMetric(CurvlabError):
    """A metric coefficient that must stay positive reached <= 0."""


class StepRejected(CurvlabError):
    """Time step violates the CFL policy and cannot be shrunk further."""


class BlowUp(CurvlabError):
    """Curvature exceeded the blow-up threshold during the flow."""


class ReproductionFailed(CurvlabError):
    """A reproduction driver could not reproduce the claimed phenomenon."""
