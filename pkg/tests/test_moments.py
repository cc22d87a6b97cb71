"""Moment-space generator: assembly, stationary solve, propagation."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tlsflow.bath import (ReservoirSpec, correlation_fourier, mean_occupation,
                          relaxation_rate)
from tlsflow.errors import DomainError, SteadyStateError
from tlsflow.moments import (DEV_MUTATIONS, build_moment_system, check_moment_vector,
                             coherent_matrix, evolve_moments, h_vector,
                             steady_moments)
from tlsflow.system import TlsPair

BATHS = (ReservoirSpec(temperature=0.2, prefactor=0.002),
         ReservoirSpec(temperature=0.22, prefactor=0.04))
PAIR = TlsPair(1.0, 1.0, 0.05)


def test_local_matrix_entrywise():
    pair = TlsPair(1.0, 0.93, 0.04)
    g1 = relaxation_rate(BATHS[0], 1.0)
    g2 = relaxation_rate(BATHS[1], 0.93)
    om, dw = 0.04, 1.0 - 0.93
    expect = np.array([
        [-2.0 * g1, 0.0, -1j * om, 1j * om],
        [0.0, -2.0 * g2, 1j * om, -1j * om],
        [-1j * om, 1j * om, 1j * dw - (g1 + g2), 0.0],
        [1j * om, -1j * om, 0.0, -1j * dw - (g1 + g2)],
    ])
    system = build_moment_system("local", pair, BATHS)
    assert np.allclose(system.matrix, expect, rtol=1e-14, atol=1e-18)
    assert np.allclose(system.source,
                       [correlation_fourier(BATHS[0], 1.0, +1),
                        correlation_fourier(BATHS[1], 0.93, +1), 0.0, 0.0],
                       rtol=1e-15)


def test_parts_sum_to_total():
    for approach in ("local", "global", "ps"):
        system = build_moment_system(approach, PAIR, BATHS)
        assert np.array_equal(
            system.matrix,
            system.coherent + system.res_matrices[0] + system.res_matrices[1])
        assert np.array_equal(system.source,
                              system.res_sources[0] + system.res_sources[1])


@given(st.lists(st.floats(-1.0, 1.0), min_size=8, max_size=8))
def test_coherent_part_conserves_energy(parts):
    # h . (M_coh v) = 0 for every v, not only stationary ones
    v = np.array(parts[:4]) + 1j * np.array(parts[4:])
    h = h_vector(PAIR)
    leak = h @ (coherent_matrix(PAIR) @ v)
    assert abs(leak) < 1e-15


def test_uncoupled_local_state_is_gibbs():
    pair = TlsPair(1.0, 1.0, 0.0)
    v = steady_moments(build_moment_system("local", pair, BATHS))
    n1 = mean_occupation(1.0, BATHS[0].temperature)
    n2 = mean_occupation(1.0, BATHS[1].temperature)
    assert v[0].real == pytest.approx(n1 / (2.0 * n1 + 1.0), rel=1e-13)
    assert v[1].real == pytest.approx(n2 / (2.0 * n2 + 1.0), rel=1e-13)
    assert abs(v[2]) < 1e-15
    assert abs(v[0].imag) < 1e-16 and abs(v[1].imag) < 1e-16


def test_steady_state_contract():
    for approach in ("local", "global", "ps"):
        system = build_moment_system(approach, PAIR, BATHS)
        v = steady_moments(system)
        resid = np.linalg.norm(system.matrix @ v + system.source)
        assert resid <= 1e-12 * np.linalg.norm(system.source)
        # physical state: conjugate coherences, occupations in [0, 1]
        assert abs(v[3] - np.conj(v[2])) < 1e-12
        check_moment_vector(v)


def test_evolution_fixed_point_and_convergence():
    system = build_moment_system("ps", PAIR, BATHS)
    v_ss = steady_moments(system)
    out = evolve_moments(system, v_ss, np.array([0.0, 50.0, 400.0]))
    assert np.allclose(out[1], v_ss, atol=1e-12)
    assert np.allclose(out[2], v_ss, atol=1e-12)
    # relaxation from the ground state reaches the same stationary vector
    out = evolve_moments(system, np.zeros(4), np.array([0.0, 2e4]))
    assert np.allclose(out[1], v_ss, atol=1e-10)


def test_evolution_input_validation():
    system = build_moment_system("local", PAIR, BATHS)
    with pytest.raises(DomainError):
        evolve_moments(system, np.zeros(4), np.array([1.0, 0.5]))
    with pytest.raises(DomainError):
        evolve_moments(system, np.zeros(4), np.array([]))
    with pytest.raises(DomainError):
        evolve_moments(system, np.zeros(4), np.array([[0.0, 1.0]]))


def test_check_moment_vector_rejects_unphysical():
    with pytest.raises(DomainError):
        check_moment_vector(np.array([1.5, 0.1, 0.0, 0.0]))
    with pytest.raises(DomainError):
        check_moment_vector(np.array([0.1 + 1e-3j, 0.1, 0.0, 0.0]))
    with pytest.raises(DomainError):
        check_moment_vector(np.array([0.1, 0.1, 0.05 + 0.0j, 0.06 + 0.0j]))
    # coherence above the Cauchy-Schwarz bound
    with pytest.raises(DomainError):
        check_moment_vector(np.array([0.01, 0.01, 0.5, 0.5]))
    with pytest.raises(DomainError):
        check_moment_vector(np.zeros(3))


def test_zero_source_rejected():
    # artificial system with a vanishing source has no unique stationary state
    system = build_moment_system("local", PAIR, BATHS)
    broken = type(system)(
        approach=system.approach, pair=system.pair, baths=system.baths,
        matrix=system.matrix, source=np.zeros(4, dtype=complex),
        coherent=system.coherent, res_matrices=system.res_matrices,
        res_sources=system.res_sources)
    with pytest.raises(SteadyStateError):
        steady_moments(broken)


def test_dev_mutation_flips_coherent_sign():
    DEV_MUTATIONS.add("local-sign-flip")
    try:
        mutated = build_moment_system("local", PAIR, BATHS)
    finally:
        DEV_MUTATIONS.discard("local-sign-flip")
    clean = build_moment_system("local", PAIR, BATHS)
    assert mutated.coherent[0, 2] == -clean.coherent[0, 2]
    # the mutation must break the energy bookkeeping of the coherent part
    h = h_vector(PAIR)
    v = steady_moments(clean)
    assert abs(h @ (mutated.coherent @ v)) > 1e-8
