"""Tests for density evolution, core densities, and thresholds."""

import math

import pytest

from becexp import (
    CavityState,
    DomainError,
    EnsembleParams,
    NonConvergence,
    REFERENCE_THRESHOLDS,
    core_densities,
    de_fixed_point,
    find_p_c,
    find_p_d,
    typical_entropy,
    zeta_from_eta,
)

from _oracles import de_eta_oracle, p_d_tangency_oracle

P36 = EnsembleParams(3, 6)
P34 = EnsembleParams(3, 4)


def test_zeta_edge_values():
    assert zeta_from_eta(0.0, 6) == 0.0
    assert zeta_from_eta(1.0, 6) == 1.0
    assert abs(zeta_from_eta(0.5, 6) - (1 - 0.5**5)) < 1e-15


def test_fixed_point_satisfies_its_equation():
    for params, p in [(P36, 0.45), (P36, 0.75), (P34, 0.66), (P34, 0.9)]:
        st = de_fixed_point(params, p, tol=1e-13)
        l, k = params
        resid = p * zeta_from_eta(st.eta, k) ** (l - 1) - st.eta
        assert abs(resid) < 1e-11
        assert abs(st.zeta - zeta_from_eta(st.eta, k)) < 1e-15


def test_fixed_point_matches_scan_oracle():
    """The iteration from 1 lands on the largest fixed point."""
    for params, p in [(P36, 0.45), (P36, 0.6), (P36, 0.95), (P34, 0.7), (P34, 0.99)]:
        eta = de_fixed_point(params, p, tol=1e-14).eta
        assert abs(eta - de_eta_oracle(*params, p)) < 1e-9


def test_subcritical_erasure_decodes_to_trivial_point():
    for params, p in [(P36, 0.25), (P36, 0.42), (P34, 0.5)]:
        st = de_fixed_point(params, p)
        assert st.eta < 1e-10
        assert st.zeta < 1e-9


def test_iterates_decrease_monotonically_from_one():
    l, k, p = 3, 6, 0.55
    eta = 1.0
    prev = 2.0
    for _ in range(200):
        eta_next = p * zeta_from_eta(eta, k) ** (l - 1)
        assert eta_next <= eta <= prev
        prev, eta = eta, eta_next


def test_known_fixed_point_values():
    assert abs(de_fixed_point(P36, 0.45).eta - 0.3554433077498433) < 1e-12
    assert abs(de_fixed_point(P36, 0.60).eta - 0.5853875009) < 1e-9


def test_nonconvergence_carries_context():
    with pytest.raises(NonConvergence):
        de_fixed_point(P36, 0.45, max_iter=3)


def test_domain_validation():
    with pytest.raises(DomainError):
        de_fixed_point(P36, -0.1)
    with pytest.raises(DomainError):
        de_fixed_point(P36, 1.5)
    with pytest.raises(DomainError):
        de_fixed_point(EnsembleParams(6, 3), 0.5)


# --- core densities ----------------------------------------------------------


def test_core_densities_at_full_erasure():
    st = de_fixed_point(P36, 1.0)
    d = core_densities(P36, 1.0, st)
    assert d.n_c == pytest.approx(1.0, abs=1e-12)
    assert d.m_c == pytest.approx(0.5, abs=1e-12)
    assert d.s_cav_typical == pytest.approx(0.5, abs=1e-12)


def test_core_densities_vanish_below_threshold():
    st = de_fixed_point(P36, 0.40)
    d = core_densities(P36, 0.40, st)
    assert abs(d.n_c) < 1e-15
    assert abs(d.m_c) < 1e-15


def test_core_density_small_eta_expansion():
    """m_c ~ (l/k) C(k,2) eta^2 for small eta: no cancellation artifacts."""
    l, k = 3, 6
    for eta in (1e-4, 1e-6, 1e-8):
        st = CavityState(eta, zeta_from_eta(eta, k))
        d = core_densities(P36, 0.45, st)
        lead = (l / k) * math.comb(k, 2) * eta**2
        assert d.m_c == pytest.approx(lead, rel=1e-3)
        assert d.m_c > 0.0


def test_entropy_density_grows_with_erasure():
    ps = [0.50, 0.55, 0.65, 0.80, 0.95]
    vals = [typical_entropy(P36, p) for p in ps]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v > 0 for v in vals)


def test_entropy_density_zero_below_condensation():
    assert typical_entropy(P36, 0.30) == 0.0
    assert typical_entropy(P36, 0.45) == 0.0


# --- thresholds ---------------------------------------------------------------


def test_decoding_threshold_matches_tangency_oracle():
    for params in (P36, P34, EnsembleParams(4, 8)):
        assert find_p_d(params, tol=1e-10) == pytest.approx(
            p_d_tangency_oracle(*params), abs=1e-8
        )


def test_decoding_threshold_brackets_behavior():
    p_d = find_p_d(P36, tol=1e-10)
    assert de_fixed_point(P36, p_d - 1e-4).eta < 1e-10
    assert de_fixed_point(P36, p_d + 1e-4).eta > 0.1


def test_condensation_threshold_sign_change():
    p_c = find_p_c(P36, tol=1e-10)
    below = core_densities(P36, p_c - 1e-4, de_fixed_point(P36, p_c - 1e-4))
    above = core_densities(P36, p_c + 1e-4, de_fixed_point(P36, p_c + 1e-4))
    assert below.s_cav_typical < 0 < above.s_cav_typical


def test_thresholds_match_reference_table():
    for params in (P36, P34):
        ref = REFERENCE_THRESHOLDS[tuple(params)]
        assert find_p_d(params, tol=1e-10) == pytest.approx(ref["p_d"], abs=1e-8)
        assert find_p_c(params, tol=1e-10) == pytest.approx(ref["p_c"], abs=1e-8)


def test_threshold_ordering():
    for params in (P36, P34):
        assert find_p_d(params) < find_p_c(params) < 1.0 - params.rate() + 1e-9
