import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qssa import (
    DomainError,
    InitialState,
    NotApplicableError,
    RateConstants,
    RegimeKind,
    classify_regime,
    derive_constants,
)
from qssa.kinetics import regime_time_scales

pos = st.floats(1e-6, 1e6)


def test_segel_constants_by_hand(segel):
    _, _, dc = segel
    # K_M = (25 + 15)/4e6 = 1e-5, eps = 1e-8/(1e-5 + 1e-5)
    assert dc.k_m == pytest.approx(1e-5, rel=1e-15)
    assert dc.epsilon == pytest.approx(5e-4, rel=1e-15)
    assert dc.t1_s == pytest.approx(1 / (4e6 * 2e-5), rel=1e-15)
    assert dc.t2_s == pytest.approx(1 / (4e6 * 1e-8), rel=1e-15)
    assert dc.sigma == pytest.approx(1.0)
    assert dc.rho == pytest.approx(25 / 15)
    assert dc.a3 == pytest.approx(1e-8) and dc.a4 == pytest.approx(5e-9)


def test_reverse_constants_by_hand(reverse):
    _, _, dc = reverse
    assert dc.epsilon == pytest.approx(500.0, rel=1e-12)
    assert dc.eta == pytest.approx(1e-3, rel=1e-12)
    assert dc.t1_r == pytest.approx(1e-5 / (4e6 * 2e-5 * 1e-2), rel=1e-12)
    assert dc.t2_r == pytest.approx(1.25e-5 * 1e3, rel=1e-12)
    assert dc.a4 == dc.a1


def test_zero_enzyme_leaves_undefined_constants_as_none():
    dc = derive_constants(RateConstants(1, 1, 1), InitialState(1.0, 0.0))
    assert dc.eta is None and dc.t2_s is None and dc.t1_r is None
    assert dc.epsilon == 0.0
    with pytest.raises(NotApplicableError):
        classify_regime(dc)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
def test_rates_must_be_positive(bad):
    with pytest.raises(DomainError):
        RateConstants(bad, 1.0, 1.0)


def test_initial_state_must_be_nonnegative():
    with pytest.raises(DomainError):
        InitialState(-1e-9, 1.0)


@pytest.mark.parametrize(
    "e0, kind",
    [(0.1 * 2e-5, RegimeKind.STANDARD), (10 * 2e-5, RegimeKind.REVERSE), (2e-5, RegimeKind.INTERMEDIATE)],
)
def test_classification_thresholds_are_inclusive(e0, kind):
    dc = derive_constants(RateConstants(4e6, 25, 15), InitialState(1e-5, e0))
    assert classify_regime(dc).kind is kind


def test_bad_thresholds():
    dc = derive_constants(RateConstants(1, 1, 1), InitialState(1.0, 1.0))
    with pytest.raises(DomainError):
        classify_regime(dc, eps_lo=2.0, eps_hi=1.0)


def test_intermediate_borrows_pair_by_side_of_one():
    rates = RateConstants(4e6, 25, 15)
    below = derive_constants(rates, InitialState(1e-5, 1e-5))
    above = derive_constants(rates, InitialState(1e-5, 1e-4))
    assert regime_time_scales(below, classify_regime(below)) == (below.t1_s, below.t2_s)
    assert regime_time_scales(above, classify_regime(above)) == (above.t1_r, above.t2_r)


@given(pos, pos, pos, st.floats(0, 1e3), st.floats(1e-9, 1e3), st.floats(0, 1e3), st.floats(0, 1e3))
def test_derived_relations(k1, km1, k2, s0, e0, c0, p0):
    dc = derive_constants(RateConstants(k1, km1, k2), InitialState(s0, e0, c0, p0))
    assert dc.a1 == s0 + c0 + p0 and dc.a2 == e0 + c0
    assert 0 <= dc.a4 <= dc.a3 * (1 + 1e-12)
    assert dc.t2_s == pytest.approx(dc.t1_s / dc.epsilon, rel=1e-12)
    if dc.a1 > 0:
        assert dc.t2_r == pytest.approx(dc.t1_r / dc.eta, rel=1e-12)
