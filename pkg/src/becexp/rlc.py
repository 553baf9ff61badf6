"""Random-linear-code (infinite-connectivity) limit: closed forms for the
potential, both error exponents, and the thresholds p_e and p_y."""

import math
from typing import NamedTuple

from .errors import DomainError

LN2 = math.log(2.0)


class RlcParams(NamedTuple):
    """Rate/erasure pair for the infinite-connectivity ensemble."""

    R: float
    p: float

    def validate(self):
        if not 0.0 < self.R < 1.0:
            raise DomainError(f"rate must be in (0,1), got {self.R}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"erasure probability must be in [0,1], got {self.p}")
        return self


def _check_rate(R):
    R = float(R)
    if not 0.0 < R < 1.0:
        raise DomainError(f"rate must be in (0,1), got {R}")
    return R


def kl_divergence(a, b):
    """Binary Kullback-Leibler divergence D(a || b) in bits.

    Degenerate references b in {0, 1} are only defined when a matches
    them (D = 0); otherwise the divergence is infinite and a DomainError
    is raised.  The a*log(a) terms use the continuity convention
    0*log(0) = 0.
    """
    a, b = float(a), float(b)
    if not 0.0 <= a <= 1.0:
        raise DomainError(f"first argument must be a probability, got {a}")
    if not 0.0 <= b <= 1.0:
        raise DomainError(f"second argument must be a probability, got {b}")
    if b == 0.0 or b == 1.0:
        if a == b:
            return 0.0
        raise DomainError(f"D({a}||{b}) is infinite")
    out = 0.0
    if a > 0.0:
        out += a * math.log2(a / b)
    if a < 1.0:
        out += (1.0 - a) * math.log2((1.0 - a) / (1.0 - b))
    return out


def binary_entropy(delta):
    """h2(delta) = -delta*log2(delta) - (1-delta)*log2(1-delta)."""
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"entropy argument must be in [0,1], got {delta}")
    out = 0.0
    if 0.0 < delta:
        out -= delta * math.log2(delta)
    if delta < 1.0:
        out -= (1.0 - delta) * math.log2(1.0 - delta)
    return out


def rlc_potential(params, x, y):
    """psi(x, y) = y*log2(p*2^x + 1 - p) + (R - 1)*x*y (exact in y)."""
    R, p = RlcParams(*params).validate()
    x, y = float(x), float(y)
    return y * (math.log1p(p * math.expm1(x * LN2)) / LN2 + (R - 1.0) * x)


def rlc_p_e(R):
    """Crossover p_e = (1 - R)/(1 + R) between the two E_av branches."""
    R = _check_rate(R)
    return (1.0 - R) / (1.0 + R)


def rlc_average_exponent(R, p):
    """Average error exponent: 1 - R - log2(1+p) below p_e, the KL
    divergence D(1-R || p) between p_e and capacity, 0 at or above
    capacity p = 1 - R."""
    R = _check_rate(R)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    if p >= 1.0 - R:
        return 0.0
    if p < rlc_p_e(R):
        return 1.0 - R - math.log1p(p) / LN2
    return kl_divergence(1.0 - R, p)


def gilbert_varshamov_delta(R, tol=1e-12):
    """Smaller root of h2(delta) = 1 - R on (0, 1/2), by bisection."""
    R = _check_rate(R)
    tol = float(tol)
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    target = 1.0 - R
    lo, hi = 1e-15, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rlc_p_y(R, tol=1e-12):
    """Threshold p_y = delta_GV/(1 - delta_GV) below which the typical
    exponent departs from the average one."""
    d = gilbert_varshamov_delta(R, tol)
    return d / (1.0 - d)


def rlc_typical_exponent(R, p, tol=1e-12):
    """Typical error exponent: -delta_GV*log2(p) below p_y, the average
    exponent above it, 0 at or above capacity."""
    R = _check_rate(R)
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"typical exponent needs p in (0,1], got {p}")
    if p >= 1.0 - R:
        return 0.0
    d = gilbert_varshamov_delta(R, tol)
    if p < d / (1.0 - d):
        return -d * math.log2(p)
    return rlc_average_exponent(R, p)
