"""Exception types shared across the package."""


class BecexpError(Exception):
    """Base class for all becexp-specific errors."""


class NonConvergence(BecexpError):
    """An iterative solver exhausted its iteration budget.

    Carries the last iterate and the residual at the point of failure so
    callers can decide whether the partial answer is still usable.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class DomainError(BecexpError):
    """Inputs left the domain where the governing equations make sense."""


class DivisibilityError(BecexpError):
    """Ensemble sizes that do not admit a regular bipartite graph."""


class GraphConstructionError(BecexpError):
    """Stub matching could not remove parallel edges within budget."""


class NoZeroEntropySolution(BecexpError):
    """No tilted fixed point with zero entropy exists in this regime.

    Raised when the nontrivial branch of the tilted recursion folds before
    its entropy crosses zero, which happens between the 1RSB and dynamical
    thresholds for the typical exponent and below the 1RSB threshold for
    the average one.
    """


class ExtrapolationUnstable(BecexpError):
    """Small-y extrapolants disagree beyond tolerance."""


class InsufficientSamples(BecexpError):
    """Too few Monte-Carlo trials to evaluate the requested statistic."""
