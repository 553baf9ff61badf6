"""Density evolution for regular codes on the erasure channel.

Tracks the erasure-message fixed point (eta, zeta) of the (l, k) ensemble
at noise level p, the densities of the residual core it predicts, and the
two classical thresholds: p_d where a nontrivial fixed point appears, and
p_c where the typical entropy density of the core turns positive.
"""

import math
from typing import NamedTuple

from .errors import DomainError, NonConvergence
from .gf2 import EnsembleParams


class CavityState(NamedTuple):
    """Fixed point of the message recursion.

    eta: probability a bit-to-check message is an erasure;
    zeta: probability a check-to-bit message is an erasure.
    """

    eta: float
    zeta: float


class CoreDensities(NamedTuple):
    """Densities (per bit) of the peeling core predicted by a fixed point."""

    n_c: float
    m_c: float
    s_cav_typical: float


def _check_p(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    return p


def zeta_from_eta(eta, k):
    """zeta = 1 - (1 - eta)^(k-1), evaluated cancellation-free."""
    if eta >= 1.0:
        return 1.0
    return -math.expm1((k - 1) * math.log1p(-eta))


def de_fixed_point(params, p, init_eta=1.0, tol=1e-12, max_iter=10**6):
    """Iterate eta -> p * zeta(eta)^(l-1) from init_eta until the update
    moves less than tol; returns the resulting CavityState.

    The plain successive-difference stopping rule is deliberate: it is
    cheap, monotone from init_eta = 1, and its bias is well below every
    tolerance used downstream.
    """
    l, k = EnsembleParams(*params).validate()
    p = _check_p(p)
    eta = float(init_eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"init_eta must be in [0,1], got {eta}")
    e = l - 1
    km1 = k - 1
    log1p, expm1 = math.log1p, math.expm1
    new = eta
    for _ in range(int(max_iter)):
        zeta = 1.0 if eta >= 1.0 else -expm1(km1 * log1p(-eta))
        new = p * zeta**e
        if abs(new - eta) < tol:
            return CavityState(new, zeta_from_eta(new, k))
        eta = new
    raise NonConvergence(
        f"density evolution did not settle in {max_iter} iterations "
        f"(l={l}, k={k}, p={p})",
        last=eta,
        residual=abs(new - eta),
    )


def core_densities(params, p, state):
    """Core bit/check densities and cavity entropy density at a fixed point.

    n_c = p*zeta^l, m_c = (l/k)*(1 - (1-eta)^k - k*eta*(1-eta)^(k-1)),
    s_cav = n_c - m_c.  The entropy density may be negative; it is the
    *typical* entropy only after clamping at zero (see typical_entropy).
    """
    l, k = EnsembleParams(*params).validate()
    p = _check_p(p)
    eta, zeta = state
    n_c = p * zeta**l
    if eta >= 1.0:
        reduced = 1.0
    else:
        # 1-(1-eta)^k - k*eta*(1-eta)^(k-1) via expm1/log1p: the bracket
        # is O(eta^2) and the naive form drowns in roundoff for tiny eta
        lg = math.log1p(-eta)
        reduced = -math.expm1(k * lg) - k * eta * math.exp((k - 1) * lg)
    m_c = (l / k) * reduced
    return CoreDensities(n_c, m_c, n_c - m_c)


def typical_entropy(params, p, tol=1e-12):
    """max(0, s_cav) at the density-evolution fixed point from eta = 1."""
    state = de_fixed_point(params, p, tol=tol)
    if state.eta <= 10.0 * tol:
        # the iteration is collapsing to the trivial point; its limit is
        # exactly zero, stopping early just leaves float dust in eta
        return 0.0
    return max(0.0, core_densities(params, p, state).s_cav_typical)


def _is_nontrivial(params, p, tol=1e-12):
    # limiting eta above 10*tol counts as a nontrivial fixed point; the
    # limit value jumps at p_d, so the margin is enormous either way
    state = de_fixed_point(params, p, tol=tol, max_iter=10**8)
    return state.eta > 10.0 * tol


def find_p_d(params, tol=1e-10):
    """Smallest p where density evolution from eta=1 has a nontrivial
    fixed point (the BP/peeling threshold), by bisection to width tol."""
    EnsembleParams(*params).validate()
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _is_nontrivial(params, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def find_p_c(params, tol=1e-10):
    """Smallest p where the cavity entropy of the fixed point from eta=1
    is positive (the MAP threshold), by bisection to width tol."""
    EnsembleParams(*params).validate()

    def positive(p):
        state = de_fixed_point(params, p, max_iter=10**8)
        if state.eta <= 1e-9:
            return False
        return core_densities(params, p, state).s_cav_typical > 0.0

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
