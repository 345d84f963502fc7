"""Service-state densities and the separation integrals built on them.

The service state is a continuous quantity whose density is one of two
candidates (a "low" and a "high" one).  Three location-scale families are
supported; all have full support on the real line, so the two candidates of a
pair automatically share their support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .errors import DivergentIntegral, DivisionOutsideSupport, QuadratureFailure

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Relative tolerance requested from the adaptive integrator.
QUAD_REL_TOL = 1e-10


class Family(str, Enum):
    NORMAL = "normal"
    LAPLACE = "laplace"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class StateDistribution:
    """One candidate density, parameterized by location and scale.

    ``scale`` is the standard deviation for the normal family, the diversity
    ``b`` for Laplace and the shape ``s`` for the logistic family.
    """

    family: Family
    location: float
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def mean(self) -> float:
        return self.location

    @property
    def variance(self) -> float:
        if self.family is Family.NORMAL:
            return self.scale**2
        if self.family is Family.LAPLACE:
            return 2.0 * self.scale**2
        return self.scale**2 * math.pi**2 / 3.0

    def log_density(self, theta):
        """Log density, vectorized over ``theta``."""
        z = (np.asarray(theta, dtype=float) - self.location) / self.scale
        if self.family is Family.NORMAL:
            out = -0.5 * z**2 - math.log(self.scale) - _LOG_SQRT_2PI
        elif self.family is Family.LAPLACE:
            out = -np.abs(z) - math.log(2.0 * self.scale)
        else:
            # symmetric form of the logistic density, stable for large |z|
            a = -np.abs(z)
            out = a - math.log(self.scale) - 2.0 * np.log1p(np.exp(a))
        return out if out.ndim else float(out)

    def density(self, theta):
        return np.exp(self.log_density(theta))

    def sample(self, rng: np.random.Generator, size=None):
        """Draw from the density using an explicit generator state."""
        if self.family is Family.NORMAL:
            return rng.normal(self.location, self.scale, size)
        if self.family is Family.LAPLACE:
            return rng.laplace(self.location, self.scale, size)
        return rng.logistic(self.location, self.scale, size)

    def _tail(self) -> tuple[float, float]:
        """(quadratic, linear) exponential decay coefficients of the log tail."""
        if self.family is Family.NORMAL:
            return 1.0 / (2.0 * self.scale**2), 0.0
        return 0.0, 1.0 / self.scale


def density(dist: StateDistribution, theta):
    return dist.density(theta)


def sample(dist: StateDistribution, rng: np.random.Generator, size=None):
    return dist.sample(rng, size)


@dataclass(frozen=True)
class DistributionPair:
    """The low/high candidate densities of one rating problem."""

    low: StateDistribution
    high: StateDistribution

    def __post_init__(self):
        if self.high.mean < self.low.mean:
            raise ValueError("high mean must be >= low mean")

    @property
    def mu_low(self) -> float:
        return self.low.mean

    @property
    def mu_high(self) -> float:
        return self.high.mean

    @property
    def mean_gap(self) -> float:
        return self.high.mean - self.low.mean


def normal_pair(mu_low: float, mu_high: float, var_low: float = 1.0,
                var_high: float = 1.0) -> DistributionPair:
    """Convenience constructor for a pair of normal densities."""
    return DistributionPair(
        StateDistribution(Family.NORMAL, mu_low, math.sqrt(var_low)),
        StateDistribution(Family.NORMAL, mu_high, math.sqrt(var_high)),
    )


def log_likelihood_ratio(pair: DistributionPair, theta: float) -> float:
    if not np.all(np.isfinite(theta)):
        raise DivisionOutsideSupport(f"state {theta!r} is outside the support")
    return pair.high.log_density(theta) - pair.low.log_density(theta)


def likelihood_ratio(pair: DistributionPair, theta: float) -> float:
    """Ratio of the high to the low density at ``theta``."""
    return math.exp(log_likelihood_ratio(pair, theta))


def history_log_likelihood_ratio(pair: DistributionPair, history) -> float:
    """Log ratio of the joint densities of independent draws.

    Computed as a sum of per-observation log ratios so long histories do not
    overflow.  The empty history has log ratio 0.
    """
    hist = np.asarray(history, dtype=float)
    if hist.size == 0:
        return 0.0
    return float(np.sum(log_likelihood_ratio(pair, hist)))


def history_likelihood_ratio(pair: DistributionPair, history) -> float:
    return math.exp(history_log_likelihood_ratio(pair, history))


def _check_converges(num: StateDistribution, den: StateDistribution) -> tuple[float, float]:
    """Tail-decay coefficients of num^2/den; raises if the integral diverges.

    The integrand's log tail behaves like -(2*q_n - q_d) theta^2 - (2*r_n - r_d)|theta|;
    it is integrable iff the quadratic coefficient is positive, or zero with a
    positive linear rate.
    """
    qn, rn = num._tail()
    qd, rd = den._tail()
    quad = 2.0 * qn - qd
    rate = 2.0 * rn - rd
    if quad < 0 or (quad == 0 and rate <= 0):
        raise DivergentIntegral(
            f"integral of {num.family.value}^2/{den.family.value} with scales "
            f"({num.scale}, {den.scale}) does not converge"
        )
    return quad, rate


def _ratio_integral(num: StateDistribution, den: StateDistribution) -> float:
    """Adaptive quadrature of the squared-ratio integral num^2/den over the line."""
    quad_coeff, rate = _check_converges(num, den)

    centers = sorted({num.location, den.location})
    base = 12.0 * max(num.scale, den.scale)
    # widen until the truncated exponential tail is negligible (~e^-60)
    width = base
    if quad_coeff > 0:
        width = max(width, math.sqrt(60.0 / quad_coeff))
    else:
        width = max(width, 60.0 / rate)
    lo, hi = centers[0] - width, centers[-1] + width

    def integrand(t):
        return math.exp(2.0 * num.log_density(t) - den.log_density(t))

    def run(a, b):
        value, abserr = integrate.quad(
            integrand, a, b, points=centers, limit=500,
            epsabs=1e-13, epsrel=QUAD_REL_TOL / 10.0,
        )
        return value, abserr

    value, abserr = run(lo, hi)
    # doubling the truncation width must not change the estimate; growth
    # signals a divergent (or far-from-converged) integral
    wide, wide_err = run(lo - width, hi + width)
    if wide - value > 1e-8 * max(abs(wide), 1.0):
        raise DivergentIntegral(
            "integral estimate keeps growing with the truncation width"
        )
    if wide_err > 1e-9 * max(abs(wide), 1.0):
        raise QuadratureFailure(
            f"estimated quadrature error {wide_err:.3e} exceeds tolerance"
        )
    return wide


def alpha_beta(pair: DistributionPair) -> tuple[float, float]:
    """The two squared-ratio separation integrals of the pair.

    Both equal 1 exactly when the densities coincide and exceed 1 otherwise.
    Equal-variance normal pairs use the exact closed form
    exp(gap^2 / sigma^2); every other combination is integrated numerically.
    """
    low, high = pair.low, pair.high
    if (low.family is Family.NORMAL and high.family is Family.NORMAL
            and low.scale == high.scale):
        value = math.exp(pair.mean_gap**2 / low.scale**2)
        return value, value
    return _ratio_integral(low, high), _ratio_integral(high, low)
