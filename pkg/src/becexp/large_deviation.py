"""Large-deviation analysis of the solution entropy: the tilted cavity
fixed point, the two-temperature potential psi(x, y), the entropic rate
curve L1(s), and the average/typical error exponents.

Conventions (all logs base 2): the bias x is conjugate to the entropy
density, y reweights the code ensemble; y = 1 gives the annealed
potential phi(x) whose Legendre transform is L1, and the y -> 0 limit
selects the typical exponent.  The x = 0 slice reduces exactly — same
floating-point operations — to plain density evolution, and the literal
y = 0 slice degenerates to a p- and x-independent recursion; the typical
exponent therefore extrapolates from small positive y.
"""

import math
from typing import NamedTuple

from .density_evolution import (
    CavityState,
    core_densities,
    de_fixed_point,
    zeta_from_eta,
)
from .errors import (
    DomainError,
    ExtrapolationUnstable,
    NonConvergence,
    NoZeroEntropySolution,
)
from .gf2 import EnsembleParams

LN2 = math.log(2.0)

#: fixed-point values of eta below this are treated as the trivial branch
NONTRIVIAL_ETA = 1e-8

#: y sequence for the typical-exponent extrapolation, largest first
Y_SEQUENCE = (1e-2, 5e-3, 2.5e-3)

#: allowed disagreement between consecutive small-y extrapolants
EXTRAPOLATION_TOL = 1e-4


class BiasParams(NamedTuple):
    """Tilt pair: x conjugate to entropy, y reweighting the ensemble."""

    x: float
    y: float


class PotentialValue(NamedTuple):
    """psi(x,y) together with the fixed point and Z_l it came from."""

    psi: float
    state: CavityState
    z_l: float


class RateSample(NamedTuple):
    x: float
    s_cav: float
    l1: float
    phi: float


class RateCurve:
    """Ordered Legendre samples (x, s_cav, L1, phi) of the y=1 potential."""

    __slots__ = ("ensemble", "p", "samples")

    def __init__(self, ensemble, p, samples):
        self.ensemble = ensemble
        self.p = p
        self.samples = list(samples)

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def min_l1(self):
        """The sample with the smallest L1 value."""
        return min(self.samples, key=lambda s: s.l1)

    def __repr__(self):
        return (
            f"RateCurve(ensemble={tuple(self.ensemble)}, p={self.p}, "
            f"n={len(self.samples)})"
        )


def _check_bias(bias):
    x, y = bias
    x, y = float(x), float(y)
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"ensemble temperature y must be in [0,1], got {y}")
    if abs(x) > 512.0:
        raise DomainError(f"bias x out of supported range, got {x}")
    return x, y


def _tilt(p, x, y):
    """Precomputed tilt factors (G, b, c) of the biased update.

    b = 2^(-xy), c = (p*2^x + 1 - p)^y, G = (c - 1)/(1 - b), arranged
    through expm1/log1p so that small tilts do not cancel.  The x = 0
    slice returns (p, 1, 1), making the update bitwise identical to plain
    density evolution; the literal y = 0 slice degenerates to (1, 1, 1).
    """
    if y == 0.0:
        return 1.0, 1.0, 1.0
    if x == 0.0:
        return p, 1.0, 1.0
    b = 2.0 ** (-x * y)
    t = p * math.expm1(x * LN2)
    lw = y * math.log1p(t)
    c = math.exp(lw)
    G = math.expm1(lw) / (-math.expm1(-x * y * LN2))
    return G, b, c


def _update(eta, l, k, G, b, c):
    """One biased cavity update eta -> G*(zeta*b)^(l-1) / Z_(l-1)."""
    m = l - 1
    zeta = zeta_from_eta(eta, k)
    if b == 1.0 and c == 1.0:
        return G * zeta**m
    B = zeta * b
    A = B + 1.0 - zeta
    zm = A**m - B**m + zeta**m * c * b**m
    if not (zm > 0.0) or not math.isfinite(zm):
        raise DomainError(
            f"cavity normalization Z_(l-1) degenerated (Z={zm!r}); "
            "the bias is outside the physical region"
        )
    return G * B**m / zm


def _solve(l, k, p, x, y, init=1.0, tol=1e-12, max_iter=10**7):
    """Fixed point of the biased update from ``init``.

    Stops when the estimated true error — the step scaled by the observed
    contraction ratio r/(1-r) — drops below tol, or when the step hits
    float resolution.  Iterates heading into the trivial basin exit early;
    the trivial point is superattracting for l >= 3.
    """
    G, b, c = _tilt(p, x, y)
    eta = float(init)
    eta = 0.0 if eta < 0.0 else (1.0 if eta > 1.0 else eta)
    prev = None
    new = eta
    for _ in range(int(max_iter)):
        new = _update(eta, l, k, G, b, c)
        d = abs(new - eta)
        if d < 4e-17:
            return new
        if new < 1e-9 and new < eta:
            return new
        if prev is not None and d < prev:
            r = d / prev
            if r < 0.9999999 and d * r / (1.0 - r) < tol:
                return new
        prev = d
        eta = new
    raise NonConvergence(
        f"tilted cavity iteration stalled (l={l}, k={k}, p={p}, x={x}, y={y})",
        last=new,
        residual=abs(new - eta),
    )


def _psi_terms(eta, l, k, x, y, G, b, c):
    """(psi, Z_l) at a given eta for tilt (x, y)."""
    zeta = zeta_from_eta(eta, k)
    if b == 1.0 and c == 1.0:
        return 0.0, 1.0
    B = zeta * b
    A = B + 1.0 - zeta
    zl = A**l - B**l + zeta**l * c * b**l
    if not (zl > 0.0) or not math.isfinite(zl):
        raise DomainError(f"potential normalization Z_l degenerated (Z={zl!r})")
    omek = (1.0 - eta) ** k
    w = omek + (1.0 - omek) * b
    psi = math.log2(zl) - (l * (k - 1) / k) * math.log2(w)
    return psi, zl


def _entropy_along(eta, l, k, p, x, y, G, b, c):
    """Analytic cavity entropy s_cav = (1/y) d(psi)/dx at a fixed point.

    Uses the envelope property of the potential (stationary in eta), so
    only explicit x-dependence contributes; reduces to n_c - m_c at x=0.
    """
    zeta = zeta_from_eta(eta, k)
    B = zeta * b
    A = B + 1.0 - zeta
    zl = A**l - B**l + zeta**l * c * b**l
    px = p * 2.0**x
    q = px / (px + 1.0 - p)
    term1 = -(l * B * (A ** (l - 1) - B ** (l - 1)) + zeta**l * c * b**l * (l - q)) / zl
    omek = (1.0 - eta) ** k
    w = omek + (1.0 - omek) * b
    term2 = (l * (k - 1) / k) * (1.0 - omek) * b / w
    return term1 + term2


def _map_slope(eta, l, k, G, b, c):
    """Analytic derivative of the biased update map with respect to eta."""
    m = l - 1
    zeta = zeta_from_eta(eta, k)
    B = zeta * b
    A = B + 1.0 - zeta
    zm = A**m - B**m + zeta**m * c * b**m
    dzm = m * ((b - 1.0) * A ** (m - 1) - b * B ** (m - 1) + zeta ** (m - 1) * c * b**m)
    df_dzeta = G * b**m * (m * zeta ** (m - 1) * zm - zeta**m * dzm) / (zm * zm)
    dzeta_deta = (k - 1) * (1.0 - eta) ** (k - 2)
    return df_dzeta * dzeta_deta


def _s_at(l, k, p, x, y, eta):
    G, b, c = _tilt(p, x, y)
    return _entropy_along(eta, l, k, p, x, y, G, b, c)


def _fold_residual(eta, x, l, k, p, y):
    """(F(eta)-eta, F'(eta)-1): zero exactly at a fold of the branch."""
    G, b, c = _tilt(p, x, y)
    f = _update(eta, l, k, G, b, c) - eta
    g = _map_slope(eta, l, k, G, b, c) - 1.0
    return f, g


def _fold_newton(l, k, p, y, eta, x):
    """Polish a fold location by damped 2-D Newton on (F-eta, F'-1)."""
    for _ in range(80):
        f1, f2 = _fold_residual(eta, x, l, k, p, y)
        he = 1e-7 * max(1.0, abs(eta))
        hx = 1e-7 * max(1.0, abs(x))
        f1e, f2e = _fold_residual(eta + he, x, l, k, p, y)
        f1x, f2x = _fold_residual(eta, x + hx, l, k, p, y)
        j11 = (f1e - f1) / he
        j12 = (f1x - f1) / hx
        j21 = (f2e - f2) / he
        j22 = (f2x - f2) / hx
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            break
        de = (f1 * j22 - f2 * j12) / det
        dx = (j11 * f2 - j21 * f1) / det
        de = max(-0.1, min(0.1, de))
        dx = max(-0.25, min(0.25, dx))
        eta -= de
        x -= dx
        eta = min(1.0 - 1e-15, max(1e-12, eta))
        if max(abs(de), abs(dx)) < 1e-13:
            break
    return eta, x


def _find_fold(l, k, p, y, fp_tol=1e-13):
    """Locate the fold (lower endpoint in x) of the nontrivial branch.

    Walks x down from 8 with warm starts until the branch is lost, then
    polishes with Newton.  Returns (x_fold, eta_fold), or None when there
    is no nontrivial branch anywhere in the window.
    """
    x = 8.0
    eta = _solve(l, k, p, x, y, 1.0, fp_tol)
    if eta < NONTRIVIAL_ETA:
        return None
    step = 0.25
    while x > -64.0:
        x_try = x - step
        eta_try = _solve(l, k, p, x_try, y, eta, fp_tol)
        if eta_try < NONTRIVIAL_ETA:
            eta_f, x_f = _fold_newton(l, k, p, y, eta, x)
            return x_f, eta_f
        x, eta = x_try, eta_try
    return None


def _zero_entropy_x(l, k, p, y, fp_tol=1e-13):
    """The tilt x* where the branch entropy s_cav(x; y) crosses zero.

    Raises NoZeroEntropySolution when the nontrivial branch either does
    not exist or is already born (at its fold) with positive entropy.
    Returns (x_star, eta_star).
    """
    eta0 = _solve(l, k, p, 0.0, y, 1.0, fp_tol)
    if eta0 >= NONTRIVIAL_ETA:
        s0 = _s_at(l, k, p, 0.0, y, eta0)
        if s0 >= 0.0:
            return 0.0, eta0
        x_lo = 0.0
    else:
        fold = _find_fold(l, k, p, y)
        if fold is None:
            raise NoZeroEntropySolution(
                f"no nontrivial tilted fixed point exists at p={p}, y={y}"
            )
        x_f, eta_f = fold
        s_f = _s_at(l, k, p, x_f, y, eta_f)
        if s_f > 0.0:
            raise NoZeroEntropySolution(
                f"the tilted branch appears with entropy {s_f:.3e} > 0 at "
                f"p={p}, y={y}; no s_cav = 0 point exists on it"
            )
        x_lo = x_f
    x_hi = 8.0
    eta_hi = _solve(l, k, p, x_hi, y, 1.0, fp_tol)
    while _s_at(l, k, p, x_hi, y, eta_hi) < 0.0:
        if x_hi >= 64.0:
            raise NoZeroEntropySolution(
                f"entropy stays negative out to x={x_hi} at p={p}, y={y}"
            )
        x_hi *= 2.0
        eta_hi = _solve(l, k, p, x_hi, y, eta_hi, fp_tol)
    warm = eta_hi
    for _ in range(90):
        x_mid = 0.5 * (x_lo + x_hi)
        eta_mid = _solve(l, k, p, x_mid, y, warm, fp_tol)
        if eta_mid < NONTRIVIAL_ETA:
            # fell off the branch: the true fold is to the right of x_mid
            x_lo = x_mid
            continue
        warm = eta_mid
        if _s_at(l, k, p, x_mid, y, eta_mid) < 0.0:
            x_lo = x_mid
        else:
            x_hi = x_mid
        if x_hi - x_lo < 1e-14 * max(1.0, abs(x_hi)):
            break
    x_star = 0.5 * (x_lo + x_hi)
    eta_star = _solve(l, k, p, x_star, y, warm, fp_tol)
    if eta_star < NONTRIVIAL_ETA:
        eta_star = warm
        x_star = x_hi
    return x_star, eta_star


# ---------------------------------------------------------------------------
# public operations


def ld_fixed_point(params, p, bias, init_eta=1.0, tol=1e-12, max_iter=10**7):
    """Fixed point of the biased cavity recursion at the given tilt.

    At x = 0 this coincides with de_fixed_point (same arithmetic); at the
    literal y = 0 the recursion degenerates to eta = zeta^(l-1),
    independent of p and x.
    """
    l, k = EnsembleParams(*params).validate()
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    x, y = _check_bias(bias)
    eta = _solve(l, k, p, x, y, init_eta, tol, max_iter)
    return CavityState(eta, zeta_from_eta(eta, k))


def potential(params, p, bias, tol=1e-12):
    """psi(x, y) at the biased fixed point reached from eta = 1."""
    l, k = EnsembleParams(*params).validate()
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    x, y = _check_bias(bias)
    G, b, c = _tilt(p, x, y)
    eta = _solve(l, k, p, x, y, 1.0, tol)
    psi, zl = _psi_terms(eta, l, k, x, y, G, b, c)
    return PotentialValue(psi, CavityState(eta, zeta_from_eta(eta, k)), zl)


def phi(params, p, x, tol=1e-12):
    """The annealed potential phi(x) = psi(x, 1)."""
    return potential(params, p, BiasParams(float(x), 1.0), tol).psi


def _fd_entropy(l, k, p, x, eta, fp_tol, h=1e-5):
    """s_cav at a curve point by Richardson-extrapolated central
    differences of phi, warm-started from the point's fixed point; falls
    back to one-sided differences when a probe crosses the branch fold."""

    def probe(xx):
        e = _solve(l, k, p, xx, 1.0, eta, fp_tol)
        if e < NONTRIVIAL_ETA or abs(e - eta) > 0.05:
            return None
        G, b, c = _tilt(p, xx, 1.0)
        return _psi_terms(e, l, k, xx, 1.0, G, b, c)[0]

    vals = [probe(x - h), probe(x - 0.5 * h), probe(x + 0.5 * h), probe(x + h)]
    if None not in vals:
        d_h = (vals[3] - vals[0]) / (2.0 * h)
        d_h2 = (vals[2] - vals[1]) / h
        return (4.0 * d_h2 - d_h) / 3.0
    G, b, c = _tilt(p, x, 1.0)
    psi0 = _psi_terms(eta, l, k, x, 1.0, G, b, c)[0]
    r1, r2 = probe(x + h), probe(x + 2.0 * h)
    if r1 is not None and r2 is not None:
        return (-3.0 * psi0 + 4.0 * r1 - r2) / (2.0 * h)
    l1v, l2v = probe(x - h), probe(x - 2.0 * h)
    if l1v is not None and l2v is not None:
        return (3.0 * psi0 - 4.0 * l1v + l2v) / (2.0 * h)
    # isolated point hard against the fold on both sides
    return _s_at(l, k, p, x, 1.0, eta)


def rate_curve(params, p, x_min, x_max, steps, tol=1e-12):
    """Sample (x, s_cav, L1, phi) on a uniform x grid at y = 1.

    Follows the warm-start continuation of the nontrivial branch (seeded
    from eta = 1 where the previous point was trivial); grid points where
    only the trivial fixed point exists contribute exact (0, 0, 0) rows.
    s_cav comes from finite differences of phi; L1 = x*s_cav - phi.
    """
    l, k = EnsembleParams(*params).validate()
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"erasure probability must be in [0,1], got {p}")
    steps = int(steps)
    if steps < 2 or not x_min < x_max:
        raise DomainError("need x_min < x_max and at least 2 steps")
    fp_tol = min(float(tol), 1e-12)
    span = (float(x_max) - float(x_min)) / (steps - 1)
    samples = []
    prev = None
    for i in range(steps):
        x = float(x_min) + i * span
        init = prev if (prev is not None and prev >= NONTRIVIAL_ETA) else 1.0
        eta = _solve(l, k, p, x, 1.0, init, fp_tol)
        prev = eta
        if eta < NONTRIVIAL_ETA:
            samples.append(RateSample(x, 0.0, 0.0, 0.0))
            continue
        G, b, c = _tilt(p, x, 1.0)
        psi_v = _psi_terms(eta, l, k, x, 1.0, G, b, c)[0]
        s = _fd_entropy(l, k, p, x, eta, fp_tol)
        samples.append(RateSample(x, s, x * s - psi_v, psi_v))
    return RateCurve(EnsembleParams(l, k), p, samples)


def _exponent_prelude(params, p):
    """Common validation + the p >= p_c shortcut (exponent 0)."""
    l, k = EnsembleParams(*params).validate()
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"exponents need p in (0,1), got {p}")
    state = de_fixed_point(params, p, max_iter=10**8)
    if state.eta > 1e-6 and core_densities(params, p, state).s_cav_typical >= 0.0:
        return l, k, p, True
    return l, k, p, False


def tempered_exponent(params, p, y, tol=1e-10):
    """-psi(x*(y), y)/y at the zero-entropy tilt x*(y).

    This is the finite-difference estimate of -d(psi)/dy anchored at the
    exact value psi = 0 of the degenerate y = 0 slice; y = 1 gives the
    average exponent exactly.  Returns 0 for p at or above p_c.
    """
    l, k, p, above = _exponent_prelude(params, p)
    y = float(y)
    if not 0.0 < y <= 1.0:
        raise DomainError(f"tempered exponent needs y in (0,1], got {y}")
    if above:
        return 0.0
    fp_tol = min(float(tol), 1e-12)
    x_star, eta_star = _zero_entropy_x(l, k, p, y, fp_tol)
    G, b, c = _tilt(p, x_star, y)
    psi_v = _psi_terms(eta_star, l, k, x_star, y, G, b, c)[0]
    return -psi_v / y


def average_exponent(params, p, tol=1e-10):
    """E_av = L1(0) = -phi(x*) at the zero-entropy tilt of the y=1 branch.

    Returns 0 for p >= p_c; raises NoZeroEntropySolution below p_1rsb
    where the branch never reaches s_cav = 0.
    """
    return tempered_exponent(params, p, 1.0, tol)


def typical_exponent(params, p, tol=1e-10):
    """E_typ from the y -> 0 limit of the zero-entropy selection.

    Evaluates the tempered exponent on Y_SEQUENCE, extrapolates linearly
    in y, and checks the two extrapolants against each other.  The
    returned value is the maximum of the extrapolation, the evaluated
    tempered values, and the average exponent: the tempered family is
    nondecreasing in y wherever the extrapolation undershoots, and the
    average exponent is a rigorous lower bound (Jensen), so the frozen
    branch wins whenever the analytic continuation dips below it.
    """
    e_av = average_exponent(params, p, tol)
    if e_av == 0.0:
        return 0.0
    ts = []
    for yy in Y_SEQUENCE:
        try:
            ts.append(tempered_exponent(params, p, yy, tol))
        except NoZeroEntropySolution:
            # the tempered branch terminates before this y: the zero-
            # entropy family has frozen and the average branch takes over
            ts.append(None)
    cands = [e_av] + [t for t in ts if t is not None]
    if None not in ts:
        y1, y2, y3 = Y_SEQUENCE
        e12 = (ts[1] * y1 - ts[0] * y2) / (y1 - y2)
        e23 = (ts[2] * y2 - ts[1] * y3) / (y2 - y3)
        if abs(e12 - e23) > EXTRAPOLATION_TOL:
            raise ExtrapolationUnstable(
                f"small-y extrapolants disagree: {e12!r} vs {e23!r} at p={p}"
            )
        cands.append(e23)
    return max(cands)


def find_p_1rsb(params, tol=1e-8):
    """Smallest p where the zero-entropy solution of the y = 1 branch
    exists (the boundary of validity of the average exponent).

    Below p_d the branch is born at a fold; the zero-entropy point exists
    iff the fold entropy is <= 0, and that entropy changes sign exactly
    at p_1rsb.  Bisecting on its sign avoids solving the near-critical
    fixed point and is sharp to bisection accuracy.
    """
    l, k = EnsembleParams(*params).validate()

    def above(p):
        state = de_fixed_point(params, p, max_iter=10**8)
        if state.eta > 1e-6:
            # branch passes through x = 0: a crossing exists (or the
            # typical entropy is already nonnegative)
            return True
        fold = _find_fold(l, k, p, 1.0)
        if fold is None:
            return False
        x_f, eta_f = fold
        return _s_at(l, k, p, x_f, 1.0, eta_f) <= 0.0

    lo, hi = 1e-3, 1.0 - 1e-3
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
