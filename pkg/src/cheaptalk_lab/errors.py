"""Exception types shared across the package."""


class CheapTalkError(Exception):
    """Base class for all package-specific errors."""


class DivergentIntegral(CheapTalkError):
    """A separation integral does not converge for the given density pair."""


class QuadratureFailure(CheapTalkError):
    """Adaptive quadrature could not reach the requested tolerance."""


class DivisionOutsideSupport(CheapTalkError):
    """Likelihood ratio requested at a point outside the common support."""


class DegenerateHorizon(CheapTalkError):
    """The commitment schedule is singular for the requested horizon."""


class OutOfRegime(CheapTalkError):
    """A threshold was requested outside the half-interval on which it is defined."""
