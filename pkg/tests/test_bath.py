"""Reservoir model: occupation factors, correlation components, rates."""

import math

import pytest
from hypothesis import given, strategies as st

from tlsflow.bath import (ReservoirSpec, correlation_fourier, coupling_rate,
                          mean_occupation, relaxation_rate)
from tlsflow.errors import DomainError


def test_mean_occupation_reference_value():
    # x = omega/T = 5: n = 1/(e^5 - 1), evaluated independently
    assert mean_occupation(1.0, 0.2) == pytest.approx(1.0 / (math.exp(5.0) - 1.0), rel=1e-15)
    assert mean_occupation(1.0, 0.2) == pytest.approx(0.0067836549063042314, rel=1e-15)


def test_mean_occupation_extreme_arguments():
    # x = 800 must not overflow; limit is e^-x
    assert mean_occupation(8.0, 0.01) == pytest.approx(math.exp(-800.0), rel=1e-12)
    # x -> 0: n ~ 1/x - 1/2
    x = 1e-8
    n = mean_occupation(x, 1.0)
    assert n * x == pytest.approx(1.0, rel=1e-6)
    assert 1.0 / x - n == pytest.approx(0.5, rel=1e-6)


def test_correlation_split_identities():
    spec = ReservoirSpec(temperature=0.2, prefactor=0.002)
    for w in (0.3, 1.0, 2.7):
        gam = coupling_rate(spec, w)
        n = mean_occupation(w, spec.temperature)
        assert correlation_fourier(spec, w, +1) == pytest.approx(gam * n, rel=1e-15)
        assert correlation_fourier(spec, w, -1) == pytest.approx(gam * (n + 1.0), rel=1e-15)
        half_sum = 0.5 * (correlation_fourier(spec, w, +1) + correlation_fourier(spec, w, -1))
        assert relaxation_rate(spec, w) == pytest.approx(half_sum, rel=1e-15)


def test_power_law_spectrum():
    cubic = ReservoirSpec(temperature=0.2, prefactor=0.002)
    assert cubic.exponent == 3
    assert coupling_rate(cubic, 2.0) == pytest.approx(0.002 * 8.0, rel=1e-15)
    flat = ReservoirSpec(temperature=0.2, prefactor=0.002, exponent=0)
    assert coupling_rate(flat, 2.0) == 0.002
    assert coupling_rate(flat, 0.37) == 0.002


def test_domain_errors():
    spec = ReservoirSpec(temperature=0.2, prefactor=0.002)
    with pytest.raises(DomainError):
        mean_occupation(-1.0, 0.2)
    with pytest.raises(DomainError):
        mean_occupation(1.0, 0.0)
    with pytest.raises(DomainError):
        coupling_rate(spec, 0.0)
    with pytest.raises(DomainError):
        correlation_fourier(spec, 1.0, 0)
    with pytest.raises(DomainError):
        ReservoirSpec(temperature=-0.2, prefactor=0.002)
    with pytest.raises(DomainError):
        ReservoirSpec(temperature=0.2, prefactor=0.0)
    with pytest.raises(DomainError):
        ReservoirSpec(temperature=0.2, prefactor=0.002, exponent=-1)


@given(w=st.floats(1e-3, 10.0), t=st.floats(0.05, 10.0), c=st.floats(1e-6, 1.0))
def test_detailed_balance_property(w, t, c):
    # G(+w)/G(-w) = exp(-w/T); keep w/T small enough that n does not underflow
    spec = ReservoirSpec(temperature=t, prefactor=c)
    gp = correlation_fourier(spec, w, +1)
    gm = correlation_fourier(spec, w, -1)
    assert gp > 0.0 and gm > 0.0
    assert gp < gm
    assert gp / gm == pytest.approx(math.exp(-w / t), rel=1e-12)


@given(w=st.floats(1e-3, 10.0), t=st.floats(1e-2, 10.0))
def test_emission_minus_absorption_is_bare_rate(w, t):
    # G(-w) - G(+w) = gamma(w) exactly in exact arithmetic
    spec = ReservoirSpec(temperature=t, prefactor=0.01)
    gm = correlation_fourier(spec, w, -1)
    gp = correlation_fourier(spec, w, +1)
    assert gm - gp == pytest.approx(coupling_rate(spec, w), rel=1e-9)
